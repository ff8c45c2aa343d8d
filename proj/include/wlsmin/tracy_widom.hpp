#pragma once

// beta = 2 Tracy-Widom law from the Airy-kernel Fredholm determinant, and the
// soft-edge rescaling of the smallest-eigenvalue densities.

#include <Eigen/Dense>
#include <boost/math/special_functions/airy.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wlsmin/ensemble.hpp"
#include "wlsmin/exact_core.hpp"
#include "wlsmin/fixed_trace.hpp"
#include "wlsmin/grid.hpp"
#include "wlsmin/quadrature.hpp"

namespace wlsmin {

struct TWScaling {
  double eta_shift;
  double sigma;
};

/// eta = (sqrt n - sqrt m)^2, sigma = (sqrt n - sqrt m)(1/sqrt n - 1/sqrt m)^{1/3} < 0.
inline TWScaling tw_scaling(const EnsembleParams& p) {
  if (p.m() == p.n()) throw DomainError("Tracy-Widom scaling needs m > n (sigma vanishes at m = n)");
  const double rn = std::sqrt(static_cast<double>(p.n())), rm = std::sqrt(static_cast<double>(p.m()));
  const double d = rn - rm;
  return {d * d, d * std::cbrt(1.0 / rn - 1.0 / rm)};
}

struct TWOptions {
  int nodes = 64;
  double step = 1e-3;
  double tolerance = 1e-10;
  bool check_convergence = false;
};

namespace detail {
// Airy kernel lives on [s, inf); beyond s + 16 (s >= 0) the kernel is below e^-80.
inline double tw_upper(double s) { return std::max(s, 0.0) + 16.0; }
}  // namespace detail

/// F_2(s) = det(I - K_Airy) on L^2(s, inf), Nystrom with Gauss-Legendre nodes on [s, s_max].
inline double tw2_cdf(double s, int nodes = 64) {
  if (nodes < 2) throw DomainError("Tracy-Widom quadrature needs at least 2 nodes");
  const QuadratureRule& rule = [&]() -> const QuadratureRule& {
    static thread_local QuadratureRule cached;
    if (static_cast<int>(cached.nodes.size()) != nodes) cached = gauss_legendre(nodes);
    return cached;
  }();
  const double a = s, b = detail::tw_upper(s);
  const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
  std::vector<double> x(static_cast<std::size_t>(nodes)), sw(x.size()), ai(x.size()), aip(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = mid + half * rule.nodes[i];
    sw[i] = std::sqrt(half * rule.weights[i]);
    ai[i] = boost::math::airy_ai(x[i]);
    aip[i] = boost::math::airy_ai_prime(x[i]);
  }
  Eigen::MatrixXd m(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (int j = 0; j < nodes; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      double k;
      if (i == j) {
        k = aip[ui] * aip[ui] - x[ui] * ai[ui] * ai[ui];
      } else {
        k = (ai[ui] * aip[uj] - aip[ui] * ai[uj]) / (x[ui] - x[uj]);
      }
      m(i, j) = (i == j ? 1.0 : 0.0) - sw[ui] * k * sw[uj];
    }
  }
  return m.partialPivLu().determinant();
}

/// Density by Richardson-extrapolated central differences of F_2.
inline double tw2_pdf(double s, const TWOptions& opt = {}) {
  auto central = [&](double h, int nodes) { return (tw2_cdf(s + h, nodes) - tw2_cdf(s - h, nodes)) / (2.0 * h); };
  const double h = opt.step;
  const double d = (4.0 * central(0.5 * h, opt.nodes) - central(h, opt.nodes)) / 3.0;
  if (opt.check_convergence) {
    const double f1 = tw2_cdf(s, opt.nodes), f2 = tw2_cdf(s, 2 * opt.nodes);
    if (std::abs(f1 - f2) > opt.tolerance) {
      throw NumericalFailure("Tracy-Widom determinant changed by " + format_double(std::abs(f1 - f2)) +
                             " under node doubling at s = " + format_double(s));
    }
  }
  return d;
}

inline GridDensity tw2_density(const std::vector<double>& grid, const TWOptions& opt = {}) {
  GridDensity g;
  g.kind = "tracy-widom-2";
  for (double s : grid) {
    if (s < -10.0 || s > 6.0) throw DomainError("Tracy-Widom grid must lie within [-10, 6]");
    g.xs.push_back(s);
    g.ys.push_back(std::max(0.0, tw2_pdf(s, opt)));
  }
  return g;
}

struct TWMoments {
  double mass, mean, variance;
};

/// Mass, mean and variance of the density over [-10, 6] by composite Gauss-Legendre.
inline TWMoments tw2_moments(const TWOptions& opt = {}, int panels = 32, int order = 8) {
  // F_2(6) - F_2(-10) is the mass; the density itself is needed for the moments.
  const QuadratureRule rule = gauss_legendre(order);
  const double a = -10.0, b = 6.0, w = (b - a) / panels;
  double m0 = 0, m1 = 0, m2 = 0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = lo + 0.5 * w * (rule.nodes[k] + 1.0);
      const double f = tw2_pdf(s, opt) * 0.5 * w * rule.weights[k];
      m0 += f;
      m1 += f * s;
      m2 += f * s * s;
    }
  }
  const double mean = m1 / m0;
  return {m0, mean, m2 / m0 - mean * mean};
}

/// -sigma f(sigma x + eta): the regular density in Tracy-Widom coordinates.
inline double rescaled_smin(const SminClosedForm& form, const TWScaling& sc, double x) {
  const double lambda = sc.sigma * x + sc.eta_shift;
  if (lambda < 0) return 0.0;
  return -sc.sigma * form.eval(lambda);
}

/// -(sigma/mn) f_F((sigma x + eta)/mn).
inline double rescaled_ft_smin(const FTSminClosedForm& form, const TWScaling& sc, double x) {
  const double nm = static_cast<double>(form.params().nm());
  const double mu = (sc.sigma * x + sc.eta_shift) / nm;
  if (mu < 0 || mu > form.support_end()) return 0.0;
  return -sc.sigma / nm * form.eval(mu);
}

inline GridDensity rescaled_smin_density(const SminClosedForm& form, const TWScaling& sc,
                                         const std::vector<double>& grid) {
  if (form.params().m() == form.params().n()) throw DomainError("rescaling needs m > n");
  GridDensity g;
  g.kind = "rescaled-regular";
  g.params = form.params();
  for (double x : grid) {
    g.xs.push_back(x);
    g.ys.push_back(rescaled_smin(form, sc, x));
  }
  return g;
}

inline GridDensity rescaled_smin_density(const FTSminClosedForm& form, const TWScaling& sc,
                                         const std::vector<double>& grid) {
  if (form.params().m() == form.params().n()) throw DomainError("rescaling needs m > n");
  GridDensity g;
  g.kind = "rescaled-fixed-trace";
  g.params = form.params();
  for (double x : grid) {
    g.xs.push_back(x);
    g.ys.push_back(rescaled_ft_smin(form, sc, x));
  }
  return g;
}

}  // namespace wlsmin
