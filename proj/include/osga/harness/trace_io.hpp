#pragma once

// Comma-separated convergence traces. Reals use 17 significant digits so a
// trace parses back to the same doubles; absent optional fields are blank.

#include "osga/harness/pgm.hpp"
#include "osga/trace.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace osga::harness {

inline constexpr std::string_view kTraceHeader = "iter,f_best,eta,alpha,elapsed_ms,delta_k";

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s, std::size_t line) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::nan("");
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + std::string(s) + "' on trace line " + std::to_string(line),
                     0);
  }
  return v;
}

inline void write_trace(std::ostream& out, const std::vector<IterationTrace>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  out << kTraceHeader << '\n';
  for (const auto& r : rows) {
    out << r.iter << ',' << format_real(r.f_best) << ',' << opt(r.eta) << ',' << opt(r.alpha)
        << ',' << opt(r.elapsed_ms) << ',' << opt(r.delta_k) << '\n';
  }
}

inline std::string format_trace(const std::vector<IterationTrace>& rows) {
  std::ostringstream out;
  write_trace(out, rows);
  return out.str();
}

inline std::vector<IterationTrace> read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw ParseError("trace: missing or unexpected header", 0);
  }
  std::vector<IterationTrace> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 6) {
      throw ParseError("trace: expected 6 fields on line " + std::to_string(lineno), 0);
    }
    auto opt = [&](std::string_view s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_real(s, lineno);
    };
    IterationTrace r;
    long iter = 0;
    const auto res = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), iter);
    if (res.ec != std::errc() || res.ptr != cells[0].data() + cells[0].size()) {
      throw ParseError("trace: bad iteration number on line " + std::to_string(lineno), 0);
    }
    r.iter = iter;
    r.f_best = parse_real(cells[1], lineno);
    r.eta = opt(cells[2]);
    r.alpha = opt(cells[3]);
    r.elapsed_ms = opt(cells[4]);
    r.delta_k = opt(cells[5]);
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<IterationTrace> parse_trace(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

}  // namespace osga::harness
