#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wlsmin/ensemble.hpp"

namespace wlsmin {

/// Inclusive uniform grid a:b:N (N points, N >= 2).
struct GridSpec {
  double a = 0.0;
  double b = 1.0;
  int points = 2;

  std::vector<double> nodes() const {
    std::vector<double> xs(static_cast<std::size_t>(points));
    const double h = (b - a) / (points - 1);
    for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = a + h * i;
    xs.back() = b;
    return xs;
  }

  static GridSpec parse(std::string_view text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw DomainError("grid must be written a:b:N, got '" + std::string(text) + "'");
    }
    GridSpec g;
    auto number = [&](std::string_view s, double& out) {
      // std::from_chars for double is not in libstdc++ 11 everywhere; strtod is.
      std::string tmp(s);
      char* end = nullptr;
      out = std::strtod(tmp.c_str(), &end);
      if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw DomainError("bad grid bound '" + tmp + "'");
    };
    number(text.substr(0, c1), g.a);
    number(text.substr(c1 + 1, c2 - c1 - 1), g.b);
    const auto count = text.substr(c2 + 1);
    auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), g.points);
    if (ec != std::errc() || ptr != count.data() + count.size()) throw DomainError("bad grid size in '" + std::string(text) + "'");
    if (g.points < 2) throw DomainError("grid needs at least 2 points");
    if (!(g.b > g.a)) throw DomainError("grid requires a < b");
    return g;
  }
};

/// Sampled density on a strictly increasing grid.
struct GridDensity {
  std::vector<double> xs;
  std::vector<double> ys;
  std::string kind;
  std::optional<EnsembleParams> params;

  double trapezoid() const {
    double s = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) s += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
    return s;
  }

  double max_abs_difference(const GridDensity& other) const {
    double d = 0.0;
    for (std::size_t i = 0; i < ys.size() && i < other.ys.size(); ++i) d = std::max(d, std::abs(ys[i] - other.ys[i]));
    return d;
  }
};

/// 17 significant digits, round-trippable.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const GridDensity& g) {
  std::ostringstream os;
  os << "x,density\n";
  for (std::size_t i = 0; i < g.xs.size(); ++i) os << format_double(g.xs[i]) << ',' << format_double(g.ys[i]) << '\n';
  return os.str();
}

}  // namespace wlsmin
