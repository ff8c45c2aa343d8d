#pragma once

// One-level (marginal) eigenvalue densities.

#include <cmath>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "wlsmin/ensemble.hpp"
#include "wlsmin/extended_float.hpp"
#include "wlsmin/rational_polynomial.hpp"

namespace wlsmin {

/// L_0^{(a)}(x) .. L_kmax^{(a)}(x) by the upward three-term recurrence.
inline std::vector<double> laguerre_values(int kmax, double a, double x) {
  std::vector<double> l(static_cast<std::size_t>(kmax + 1));
  l[0] = 1.0;
  if (kmax >= 1) l[1] = 1.0 + a - x;
  for (int k = 1; k < kmax; ++k) {
    l[static_cast<std::size_t>(k + 1)] =
        ((2.0 * k + 1.0 + a - x) * l[static_cast<std::size_t>(k)] - (k + a) * l[static_cast<std::size_t>(k - 1)]) / (k + 1.0);
  }
  return l;
}

namespace detail {
// ln(e^{-x} x^alpha), with 0^0 = 1.
inline double log_weight(double x, int alpha) { return alpha == 0 ? -x : -x + alpha * std::log(x); }
}  // namespace detail

/// p(lambda) = Gamma(n)/Gamma(m) e^{-lambda} lambda^alpha
///             [L_{n-1}^{(alpha)} L_n^{(alpha+1)} - L_n^{(alpha)} L_{n-1}^{(alpha+1)}].
inline double marginal_regular(const EnsembleParams& p, double lambda) {
  if (!(lambda >= 0)) throw DomainError("marginal_regular requires lambda >= 0");
  const int n = p.n(), alpha = p.alpha();
  if (lambda == 0 && alpha > 0) return 0.0;
  const auto la = laguerre_values(n, alpha, lambda);
  const auto lb = laguerre_values(n, alpha + 1, lambda);
  const double bracket = la[static_cast<std::size_t>(n - 1)] * lb[static_cast<std::size_t>(n)] -
                         la[static_cast<std::size_t>(n)] * lb[static_cast<std::size_t>(n - 1)];
  return std::exp(std::lgamma(n) - std::lgamma(p.m()) + detail::log_weight(lambda, alpha)) * bracket;
}

/// The same density as (1/n) e^{-lambda} lambda^alpha sum_j Gamma(j+1)/Gamma(j+alpha+1) (L_j^{(alpha)})^2.
inline double marginal_regular_sum(const EnsembleParams& p, double lambda) {
  if (!(lambda >= 0)) throw DomainError("marginal_regular_sum requires lambda >= 0");
  const int n = p.n(), alpha = p.alpha();
  if (lambda == 0 && alpha > 0) return 0.0;
  const auto l = laguerre_values(n - 1, alpha, lambda);
  const double lw = detail::log_weight(lambda, alpha);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double lj = l[static_cast<std::size_t>(j)];
    s += std::exp(std::lgamma(j + 1.0) - std::lgamma(j + alpha + 1.0) + lw) * lj * lj;
  }
  return s / n;
}

/// Fixed-trace one-level density from the terminating Gauss hypergeometric sum.
///
/// The argument is mu/(mu-1); with mu/(1-mu) the sum does not normalize.
/// Each 2F1(a, b; alpha+1; mu/(mu-1)) has a = 1-n or -n, so the whole density
/// collapses to sum_{s=0}^{2n-1} D_s mu^{alpha+s} (1-mu)^{nm-alpha-2-s} with
/// exact rational D_s, evaluated in extended precision.
class FixedTraceMarginal {
 public:
  explicit FixedTraceMarginal(const EnsembleParams& p) : params_(p) {
    const int n = p.n(), alpha = p.alpha(), m = p.m();
    const long nm = p.nm();
    std::vector<Rational> d(static_cast<std::size_t>(2 * n));
    const BigInt alpha_fact = factorial(static_cast<unsigned long>(alpha));
    for (int i = 0; i <= n - 1; ++i) {
      const long denom_arg = nm - alpha - i - 1;  // >= 1 for n >= 2
      if (denom_arg <= 0) continue;
      Rational k_i = ratio(factorial(m) * factorial(nm - 1),
                           BigInt(n) * factorial(i) * factorial(n - i - 1) * factorial(i + alpha + 1) *
                               factorial(denom_arg - 1));
      if (i % 2 == 1) k_i = -k_i;
      k_i /= Rational(alpha_fact);
      const long b = i - nm + alpha + 1;
      auto add_series = [&](long a_top, const Rational& scale) {
        // sum_k (a)_k (b)_k / ((alpha+1)_k k!) z^k, k = 0 .. -a_top, z^k = (-1)^k mu^k (1-mu)^-k
        Rational coef = 1;
        for (long k = 0; k <= -a_top; ++k) {
          if (k > 0) {
            coef *= ratio(-BigInt(a_top + k - 1) * (b + k - 1), BigInt(alpha + k) * k);
          }
          d[static_cast<std::size_t>(i + k)] += k_i * scale * coef;
        }
      };
      add_series(1 - n, Rational(n));
      add_series(-n, Rational(-(n - i - 1)));
    }
    coeffs_.reserve(d.size());
    for (auto& c : d) {
      c.canonicalize();
      exact_.push_back(c);
      coeffs_.push_back(to_ext(c));
    }
  }

  const EnsembleParams& params() const { return params_; }

  /// D_s in mu^{alpha+s} (1-mu)^{nm-alpha-2-s}.
  const std::vector<Rational>& exact_coefficients() const { return exact_; }

  ExtFloat eval_ext(const ExtFloat& mu) const {
    if (mu < 0 || mu >= 1) throw DomainError("marginal_ft requires 0 <= mu < 1");
    const int alpha = params_.alpha();
    const long nm = params_.nm();
    ExtFloat s = 0;
    if (mu == 0) return alpha == 0 ? coeffs_.front() : ExtFloat(0);
    const ExtFloat lmu = log(mu), lom = log(ExtFloat(1) - mu);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0) continue;
      const long sidx = static_cast<long>(k);
      s += coeffs_[k] * exp(ExtFloat(alpha + sidx) * lmu + ExtFloat(nm - alpha - 2 - sidx) * lom);
    }
    return s;
  }

  double operator()(double mu) const { return std::max(0.0, static_cast<double>(eval_ext(ExtFloat(mu)))); }

 private:
  EnsembleParams params_;
  std::vector<Rational> exact_;
  std::vector<ExtFloat> coeffs_;
};

inline double marginal_ft(const EnsembleParams& p, double mu) { return FixedTraceMarginal(p)(mu); }

/// p~(mu) = mn p(mn mu).
inline double marginal_scaled(const EnsembleParams& p, double mu) {
  if (!(mu >= 0)) throw DomainError("marginal_scaled requires mu >= 0");
  const double nm = static_cast<double>(p.nm());
  return nm * marginal_regular(p, nm * mu);
}

/// Marchenko-Pastur edges (1 -+ sqrt(n/m))^2 / n for the W/(mn) scaling.
inline std::pair<double, double> mp_edges(const EnsembleParams& p) {
  const double r = std::sqrt(static_cast<double>(p.n()) / p.m());
  return {(1.0 - r) * (1.0 - r) / p.n(), (1.0 + r) * (1.0 + r) / p.n()};
}

inline double marginal_mp(const EnsembleParams& p, double mu) {
  const auto [lo, hi] = mp_edges(p);
  if (!(mu > lo && mu < hi)) return 0.0;
  return p.m() / (2.0 * std::numbers::pi) * std::sqrt((hi - mu) * (mu - lo)) / mu;
}

}  // namespace wlsmin
