#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string_view>

namespace osga {

/// One row of a convergence trace. Optional fields are serialized blank.
struct IterationTrace {
  long iter = 0;
  double f_best = 0.0;
  std::optional<double> eta;
  std::optional<double> alpha;
  std::optional<double> elapsed_ms;
  std::optional<double> delta_k;

  friend bool operator==(const IterationTrace&, const IterationTrace&) = default;
};

using TraceSink = std::function<void(const IterationTrace&)>;

enum class StopReason {
  max_iters,
  target_reached,
  max_time,
  eta_tolerance,
  nonpositive_eta,  // subproblem supremum <= 0: no further decrease certifiable
  stationary,       // zero subgradient (projected subgradient baselines)
};

constexpr std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::max_iters: return "max_iters";
    case StopReason::target_reached: return "target_reached";
    case StopReason::max_time: return "max_time";
    case StopReason::eta_tolerance: return "eta_tolerance";
    case StopReason::nonpositive_eta: return "nonpositive_eta";
    case StopReason::stationary: return "stationary";
  }
  return "unknown";
}

namespace detail {

/// Wall-clock stopwatch that can be paused while records are handed to a sink.
class Stopwatch {
 public:
  using clock = std::chrono::steady_clock;

  Stopwatch() : start_(clock::now()) {}

  double elapsed_ms() const {
    const auto now = paused_ ? pause_start_ : clock::now();
    return std::chrono::duration<double, std::milli>(now - start_ - paused_total_).count();
  }

  void pause() {
    if (!paused_) {
      paused_ = true;
      pause_start_ = clock::now();
    }
  }

  void resume() {
    if (paused_) {
      paused_total_ += clock::now() - pause_start_;
      paused_ = false;
    }
  }

 private:
  clock::time_point start_;
  clock::time_point pause_start_{};
  clock::duration paused_total_{};
  bool paused_ = false;
};

}  // namespace detail
}  // namespace osga
