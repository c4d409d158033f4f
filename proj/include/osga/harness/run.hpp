#pragma once

// Benchmark runs: instance construction from a RunConfig, solver dispatch,
// reference minima, trace/summary output.

#include "osga/baselines.hpp"
#include "osga/core.hpp"
#include "osga/harness/pgm.hpp"
#include "osga/harness/trace_io.hpp"
#include "osga/problems/imaging.hpp"
#include "osga/problems/instance.hpp"
#include "osga/problems/metrics.hpp"
#include "osga/solver.hpp"
#include "osga/subproblem_exact.hpp"
#include "osga/subproblem_inexact.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace osga::harness {

class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTimeLimit = 3;

enum class SolverKind { osga_exact, osga_inexact, psga1, psga2 };

inline constexpr std::array<std::pair<SolverKind, std::string_view>, 4> kSolverNames{{
    {SolverKind::osga_exact, "osga-exact"},
    {SolverKind::osga_inexact, "osga-inexact"},
    {SolverKind::psga1, "psga1"},
    {SolverKind::psga2, "psga2"},
}};

inline std::string_view to_string(SolverKind s) {
  for (const auto& [kind, name] : kSolverNames) {
    if (kind == s) return name;
  }
  return "unknown";
}

inline std::optional<SolverKind> parse_solver(std::string_view name) {
  for (const auto& [kind, n] : kSolverNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

struct KernelSpec {
  enum class Kind { uniform, gaussian };
  Kind kind = Kind::uniform;
  int size = 9;
  double sigma = 0.0;

  problems::Matrix matrix() const {
    return kind == Kind::uniform ? problems::uniform_kernel(size)
                                 : problems::gaussian_kernel(size, sigma);
  }
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  while (true) {
    const auto at = s.find(sep);
    out.emplace_back(s.substr(0, at));
    if (at == std::string_view::npos) break;
    s.remove_prefix(at + 1);
  }
  return out;
}

inline double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("invalid number '") + s + "' for " + what);
}

inline int to_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("invalid integer '") + s + "' for " + what);
}

}  // namespace detail

/// "gaussian:SIGMA" or "saltpepper:LEVEL"
inline problems::NoiseSpec parse_noise(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() == 2 && parts[0] == "gaussian") {
    return problems::NoiseSpec::gaussian(detail::to_double(parts[1], "--noise"));
  }
  if (parts.size() == 2 && parts[0] == "saltpepper") {
    return problems::NoiseSpec::salt_pepper(detail::to_double(parts[1], "--noise"));
  }
  throw UsageError("--noise expects gaussian:SIGMA or saltpepper:LEVEL, got '" +
                   std::string(text) + "'");
}

/// "uniform:K" or "gaussian:K:SIGMA"
inline KernelSpec parse_kernel(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() == 2 && parts[0] == "uniform") {
    return {KernelSpec::Kind::uniform, detail::to_int(parts[1], "--kernel"), 0.0};
  }
  if (parts.size() == 3 && parts[0] == "gaussian") {
    return {KernelSpec::Kind::gaussian, detail::to_int(parts[1], "--kernel"),
            detail::to_double(parts[2], "--kernel")};
  }
  throw UsageError("--kernel expects uniform:K or gaussian:K:SIGMA, got '" + std::string(text) +
                   "'");
}

struct RunConfig {
  problems::ObjectiveKind problem = problems::ObjectiveKind::l22l22r;
  long n = 200;             ///< dimension, or image side for TV models without an image
  std::string image_path;   ///< graymap input for TV models
  std::uint64_t seed = 1;
  SolverKind solver = SolverKind::osga_exact;
  std::optional<double> lambda;  ///< regularizer weight; per-model default when unset
  double mu = 0.0;
  long max_iters = 100;
  double max_time = kInf;
  double f_target = -kInf;
  std::optional<double> q0;
  std::optional<problems::NoiseSpec> noise;
  std::optional<KernelSpec> kernel;
  std::string trace_path;
  std::string summary_path;
  std::string ref_min_path;     ///< reference-minimum cache; enables delta_k
  std::optional<double> f_hat;  ///< known minimum; enables delta_k
  std::string restored_path;    ///< TV models: write the recovered image
  long ref_multiplier = 50;
  bool timing = false;  ///< record wall-clock columns (makes outputs run-dependent)

  void validate() const {
    if (max_iters < 1) throw UsageError("--max-iters must be >= 1");
    if (!(max_time > 0.0)) throw UsageError("--max-time must be > 0");
    if (!(mu >= 0.0)) throw UsageError("--mu must be >= 0");
    if (q0 && !(*q0 > 0.0)) throw UsageError("--q0 must be > 0");
    if (lambda && !(*lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
    if (ref_multiplier < 1) throw UsageError("reference multiplier must be >= 1");
    if (problems::is_tv(problem)) {
      if (image_path.empty() && n < 2) throw UsageError("--n must be >= 2 (image side)");
    } else {
      if (!image_path.empty()) throw UsageError("--image only applies to TV models");
      if (n < 2) throw UsageError("--n must be >= 2");
    }
  }
};

/// Default regularizer weight, blur and noise per model family.
inline double default_lambda(problems::ObjectiveKind k) {
  if (!problems::is_tv(k)) return 1.0;
  return problems::has_l1_data(k) ? 8e-2 : 4e-3;
}

inline KernelSpec default_kernel(problems::ObjectiveKind k) {
  return problems::has_l1_data(k) ? KernelSpec{KernelSpec::Kind::gaussian, 7, 5.0}
                                  : KernelSpec{KernelSpec::Kind::uniform, 9, 0.0};
}

inline problems::NoiseSpec default_noise(problems::ObjectiveKind k) {
  return problems::has_l1_data(k) ? problems::NoiseSpec::salt_pepper(0.4)
                                  : problems::NoiseSpec::gaussian(problems::kDefaultGaussianSigma);
}

inline problems::ProblemInstance build_instance(const RunConfig& cfg) {
  cfg.validate();
  if (!problems::is_tv(cfg.problem)) {
    problems::ProblemInstance inst = problems::make_synthetic(cfg.problem, cfg.n, cfg.seed);
    if (cfg.lambda) inst.reg_weight = *cfg.lambda;
    return inst;
  }
  const problems::ImageBuffer truth = cfg.image_path.empty()
                                          ? problems::synthetic_phantom(cfg.n, cfg.n)
                                          : read_image(cfg.image_path);
  const KernelSpec kernel = cfg.kernel.value_or(default_kernel(cfg.problem));
  const problems::NoiseSpec noise = cfg.noise.value_or(default_noise(cfg.problem));
  return problems::make_deblur(cfg.problem, truth, kernel.matrix(), noise,
                               cfg.lambda.value_or(default_lambda(cfg.problem)), cfg.seed);
}

struct SolveOptions {
  long max_iters = 100;
  double max_time = kInf;
  double f_target = -kInf;
  double mu = 0.0;
  std::optional<double> q0;
};

inline SolveResult solve_instance(const problems::ProblemInstance& inst, SolverKind solver,
                                  const SolveOptions& opt, const TraceSink& sink = {}) {
  const FirstOrderOracle oracle = problems::objective_oracle(inst);
  if (solver == SolverKind::psga1 || solver == SolverKind::psga2) {
    PsgaParams p = solver == SolverKind::psga1 ? PsgaParams::psga1(opt.max_iters)
                                               : PsgaParams::psga2(opt.max_iters);
    p.max_time = opt.max_time;
    return psga_solve(oracle, inst.box, inst.x0, p, sink);
  }
  OsgaParams p;
  p.max_iters = opt.max_iters;
  p.max_time = opt.max_time;
  p.f_target = opt.f_target;
  p.mu = opt.mu;
  const ProxState prox(inst.x0, opt.q0.value_or(ProxState::default_q0(inst.x0)));
  if (solver == SolverKind::osga_exact) {
    return osga_solve(oracle, prox, inst.box, p, ExactSubsolver{}, sink);
  }
  return osga_solve(oracle, prox, inst.box, p, InexactSubsolver{}, sink);
}

// ---------------------------------------------------------------------------
// Reference minimum
// ---------------------------------------------------------------------------

/// FNV-1a over the instance data; the operator enters through its action on
/// two fixed probe vectors.
inline std::uint64_t instance_hash(const problems::ProblemInstance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&](const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_vec = [&](const Vector& v) {
    const auto n = static_cast<std::uint64_t>(v.size());
    mix_bytes(&n, sizeof n);
    mix_bytes(v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
  };
  const auto kind = problems::to_string(inst.kind);
  mix_bytes(kind.data(), kind.size());
  mix_bytes(&inst.reg_weight, sizeof inst.reg_weight);
  mix_vec(inst.b);
  mix_vec(inst.box.lower());
  mix_vec(inst.box.upper());
  mix_vec(inst.x0);
  const Eigen::Index n = inst.dimension();
  mix_vec(inst.op.apply(Vector::Ones(n)));
  mix_vec(inst.op.apply(Vector::LinSpaced(n, -1.0, 1.0)));
  return h;
}

/// Smallest f_best over all four solvers run for `iterations` steps each.
inline double reference_minimum(const problems::ProblemInstance& inst, long iterations) {
  double best = kInf;
  for (const auto& [solver, name] : kSolverNames) {
    SolveOptions opt;
    opt.max_iters = iterations;
    best = std::min(best, solve_instance(inst, solver, opt).f_best);
  }
  return best;
}

/// Cached variant. Cache lines are "<hash hex> <iterations> <f_hat>".
inline double reference_minimum(const problems::ProblemInstance& inst, long iterations,
                                const std::string& cache_path) {
  std::ostringstream key;
  key << std::hex << instance_hash(inst) << std::dec << ' ' << iterations;
  {
    std::ifstream in(cache_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind(key.str() + ' ', 0) == 0) {
        return parse_real(std::string_view(line).substr(key.str().size() + 1), 0);
      }
    }
  }
  const double f_hat = reference_minimum(inst, iterations);
  std::ofstream out(cache_path, std::ios::app);
  if (!out) throw IoError("cannot write reference cache " + cache_path);
  out << key.str() << ' ' << format_real(f_hat) << '\n';
  return f_hat;
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

struct RunOutcome {
  SolveResult result;
  std::optional<double> f_hat;
  std::optional<double> psnr;
  std::optional<double> isnr;
  nlohmann::ordered_json summary;
  int exit_code = kExitOk;
};

inline int exit_code_for(StopReason r) {
  return r == StopReason::max_time ? kExitTimeLimit : kExitOk;
}

/// Builds the instance, runs the configured solver, and writes the trace,
/// summary and restored image when the corresponding paths are set.
inline RunOutcome run(const RunConfig& cfg) {
  const problems::ProblemInstance inst = build_instance(cfg);

  RunOutcome out;
  SolveOptions opt{cfg.max_iters, cfg.max_time, cfg.f_target, cfg.mu, cfg.q0};
  out.result = solve_instance(inst, cfg.solver, opt);
  SolveResult& res = out.result;

  if (cfg.f_hat) {
    out.f_hat = cfg.f_hat;
  } else if (!cfg.ref_min_path.empty()) {
    out.f_hat = reference_minimum(inst, cfg.ref_multiplier * cfg.max_iters, cfg.ref_min_path);
  }
  // The reference can only be trusted as a lower bound of this run.
  if (out.f_hat) out.f_hat = std::min(*out.f_hat, res.f_best);

  for (auto& row : res.trace) {
    if (!cfg.timing) row.elapsed_ms.reset();
    if (out.f_hat && res.f_initial > *out.f_hat) {
      row.delta_k = problems::delta_rel(row.f_best, res.f_initial, *out.f_hat);
    }
  }

  if (inst.truth) {
    problems::ImageBuffer restored(inst.image_rows, inst.image_cols, res.x_best);
    out.psnr = problems::psnr(restored, *inst.truth);
    out.isnr = problems::isnr(restored, *inst.observed, *inst.truth);
    if (!cfg.restored_path.empty()) write_image(cfg.restored_path, restored);
  }

  out.exit_code = exit_code_for(res.stop);

  auto real = [](double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(format_real(v));
  };
  auto& s = out.summary;
  s["problem"] = std::string(problems::to_string(inst.kind));
  s["dimension"] = inst.dimension();
  if (inst.truth) {
    s["image_rows"] = inst.image_rows;
    s["image_cols"] = inst.image_cols;
  }
  s["solver"] = std::string(to_string(cfg.solver));
  s["seed"] = cfg.seed;
  s["lambda"] = inst.reg_weight;
  s["iterations"] = res.iterations;
  s["evaluations"] = res.evaluations;
  s["stop"] = std::string(to_string(res.stop));
  s["f_0"] = real(res.f_initial);
  s["f_b"] = real(res.f_best);
  if (out.f_hat) {
    s["f_hat"] = real(*out.f_hat);
    if (!res.trace.empty() && res.trace.back().delta_k) {
      s["delta"] = real(*res.trace.back().delta_k);
    }
  }
  if (cfg.timing) s["time_s"] = real(res.elapsed_ms / 1e3);
  if (out.psnr) s["psnr"] = real(*out.psnr);
  if (out.isnr) s["isnr"] = real(*out.isnr);
  s["exit_code"] = out.exit_code;

  if (!cfg.trace_path.empty()) write_file(cfg.trace_path, format_trace(res.trace));
  if (!cfg.summary_path.empty()) write_file(cfg.summary_path, s.dump(2) + "\n");
  return out;
}

/// Runs independent configurations on worker threads. Each run owns its
/// instance, solver state and output files; results keep the input order.
inline std::vector<RunOutcome> run_parallel(const std::vector<RunConfig>& configs) {
  std::vector<std::future<RunOutcome>> jobs;
  jobs.reserve(configs.size());
  for (const auto& cfg : configs) {
    jobs.push_back(std::async(std::launch::async, [cfg] { return run(cfg); }));
  }
  std::vector<RunOutcome> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace osga::harness
