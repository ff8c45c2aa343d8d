#pragma once

// Smallest-eigenvalue statistics of the fixed-trace ensemble F = W / tr W.
//
// Term-wise Laplace inversion of the regular closed form gives
//   f_F(x) = Gamma(nm) sum_j h_j x^{j-1} (1-nx)^{nm-j-1} / Gamma(nm-j),  0 <= x <= 1/n,
// with the same h_j as the regular ensemble.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "wlsmin/exact_core.hpp"

namespace wlsmin {

class FTSminClosedForm {
 public:
  struct Term {
    int j;
    Rational h;
    int x_exponent;            // j - 1
    long one_minus_nx_exponent;  // nm - j - 1
  };

  explicit FTSminClosedForm(SminClosedForm regular) : regular_(std::move(regular)) { prepare(); }

  const EnsembleParams& params() const { return regular_.params(); }
  const SminClosedForm& regular() const { return regular_; }

  /// n = 1: the single eigenvalue is pinned at 1, so there is no density.
  bool degenerate() const { return params().n() == 1; }

  double support_end() const { return 1.0 / params().n(); }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    const long nm = params().nm();
    for (int j = regular_.j_min(); j <= regular_.j_max(); ++j) out.push_back({j, regular_.h(j), j - 1, nm - j - 1});
    return out;
  }

  /// Gamma(nm) h_j / Gamma(nm - j): the coefficient multiplying x^{j-1}(1-nx)^{nm-j-1}.
  Rational weight(int j) const {
    if (degenerate()) return 0;
    const long nm = params().nm();
    return regular_.h(j) * ratio(factorial(nm - 1), factorial(nm - j - 1));
  }

  /// Expanded density polynomial on the support (exact).
  RationalPolynomial polynomial() const {
    if (degenerate()) return {};
    const long nm = params().nm();
    const Rational minus_n(-params().n());
    RationalPolynomial acc;
    for (int j = regular_.j_min(); j <= regular_.j_max(); ++j) {
      auto term = RationalPolynomial::binomial_power(1, minus_n, static_cast<unsigned long>(nm - j - 1)).shifted(j - 1);
      acc += weight(j) * term;
    }
    return acc;
  }

  double eval(double x, const EvalOptions& opt = {}) const {
    if (degenerate() || !(x >= 0) || x > support_end()) return 0.0;
    const auto& d = *data_;
    const double one_minus = std::max(0.0, 1.0 - params().n() * x);
    if (params().nm() <= opt.extended_threshold && d.double_safe) {
      double s = 0.0;
      for (std::size_t i = 0; i < d.w_double.size(); ++i) {
        const int j = regular_.j_min() + static_cast<int>(i);
        s += d.w_double[i] * std::pow(x, j - 1) * std::pow(one_minus, static_cast<double>(params().nm() - j - 1));
      }
      return std::max(0.0, s);
    }
    return std::max(0.0, static_cast<double>(eval_ext(ExtFloat(x))));
  }

  ExtFloat eval_ext(const ExtFloat& x) const {
    if (degenerate() || x < 0 || x * params().n() > 1) return ExtFloat(0);
    const auto& d = *data_;
    const long nm = params().nm();
    const ExtFloat one_minus = ExtFloat(1) - ExtFloat(params().n()) * x;
    // Endpoints: 0^0 = 1, and zero factors kill the rest.
    if (x == 0 || one_minus == 0) {
      ExtFloat s = 0;
      for (std::size_t i = 0; i < d.w.size(); ++i) {
        const int j = regular_.j_min() + static_cast<int>(i);
        const long e2 = nm - j - 1;
        const bool x_ok = (x != 0) || j == 1;
        const bool om_ok = (one_minus != 0) || e2 == 0;
        if (x_ok && om_ok) s += to_ext(weight(j)) * (x == 0 ? ExtFloat(1) : pow(x, j - 1));
      }
      return s;
    }
    const ExtFloat lx = log(x), lom = log(one_minus);
    std::vector<ExtFloat> logs(d.w.size());
    ExtFloat lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.w.size(); ++i) {
      if (d.sign_w[i] == 0) continue;
      const int j = regular_.j_min() + static_cast<int>(i);
      logs[i] = d.log_abs_w[i] + ExtFloat(j - 1) * lx + ExtFloat(nm - j - 1) * lom;
      if (logs[i] > lmax) lmax = logs[i];
    }
    ExtFloat sum = 0;
    for (std::size_t i = 0; i < d.w.size(); ++i) {
      if (d.sign_w[i] == 0) continue;
      const ExtFloat rel = logs[i] - lmax;
      if (rel < -400) continue;
      sum += d.sign_w[i] > 0 ? exp(rel) : -exp(rel);
    }
    return sum * exp(lmax);
  }

  /// P(x_min > x) for z = n x in [0, 1]:
  ///   sum_{k=0}^{j_max-1} C(nm-1, k) z^k (1-z)^{nm-1-k} * sum_{j>k} c_j.
  /// Every term is non-negative when the c_j are, so tiny tails keep full
  /// relative precision.
  ExtFloat survival_scaled_ext(const ExtFloat& z) const {
    if (z <= 0) return ExtFloat(1);
    if (z >= 1) return ExtFloat(0);
    const auto& tail = regular_tail();
    const long big_n = params().nm() - 1;
    const ExtFloat one_minus = ExtFloat(1) - z;
    const ExtFloat ratio = z / one_minus;
    ExtFloat weight = pow(one_minus, big_n);
    ExtFloat sum = 0;
    for (std::size_t k = 0; k < tail.size(); ++k) {
      if (k > 0) weight *= ExtFloat(big_n - static_cast<long>(k) + 1) / ExtFloat(static_cast<long>(k)) * ratio;
      sum += weight * tail[k];
    }
    return sum;
  }

  ExtFloat survival_ext(const ExtFloat& x) const {
    if (degenerate()) return x < 1 ? ExtFloat(1) : ExtFloat(0);
    return survival_scaled_ext(ExtFloat(params().n()) * x);
  }

  double cdf(double x) const {
    if (degenerate()) return x >= 1.0 ? 1.0 : 0.0;
    if (!(x > 0)) return 0.0;
    if (x >= support_end()) return 1.0;
    return std::clamp(static_cast<double>(ExtFloat(1) - survival_ext(ExtFloat(x))), 0.0, 1.0);
  }

 private:
  struct Data {
    std::vector<Rational> w;
    std::vector<double> w_double;
    std::vector<ExtFloat> log_abs_w;
    std::vector<int> sign_w;
    std::vector<ExtFloat> tail;
    bool double_safe = true;
  };

  const std::vector<ExtFloat>& regular_tail() const { return data_->tail; }

  void prepare() {
    data_ = std::make_shared<Data>();
    auto& d = *data_;
    if (degenerate()) return;
    for (int j = regular_.j_min(); j <= regular_.j_max(); ++j) {
      d.w.push_back(weight(j));
      const int s = sgn(d.w.back());
      d.sign_w.push_back(s);
      d.log_abs_w.push_back(s == 0 ? ExtFloat(0) : log_abs(d.w.back()));
      d.w_double.push_back(d.w.back().get_d());
      const double la = static_cast<double>(d.log_abs_w.back());
      if (s != 0 && (la > 700.0 || la < -700.0)) d.double_safe = false;
    }
    Rational acc = 0;
    d.tail.assign(static_cast<std::size_t>(regular_.j_max()), ExtFloat(0));
    for (int k = regular_.j_max() - 1; k >= 0; --k) {
      acc += regular_.term_mass(k + 1);
      d.tail[static_cast<std::size_t>(k)] = to_ext(acc);
    }
  }

  SminClosedForm regular_;
  std::shared_ptr<Data> data_;
};

inline FTSminClosedForm ft_closed_form(const EnsembleParams& p) { return FTSminClosedForm(smin_closed_form(p)); }

inline double eval_ft_density(const FTSminClosedForm& form, double x, const EvalOptions& opt = {}) {
  return form.eval(x, opt);
}

inline double ft_cdf(const FTSminClosedForm& form, double x) { return form.cdf(x); }

/// Gamma(nm)/Gamma(nm+eta) for integer eta, exactly.
inline Rational gamma_ratio_exact(long nm, long eta) {
  Rational r = 1;
  if (eta >= 0) {
    for (long k = 0; k < eta; ++k) r /= Rational(nm + k);
  } else {
    for (long k = 1; k <= -eta; ++k) r *= Rational(nm - k);
  }
  return r;
}

/// <x^eta>_F = Gamma(nm)/Gamma(nm+eta) <x^eta>.
inline Rational ft_moment_exact(const FTSminClosedForm& form, long eta) {
  return gamma_ratio_exact(form.params().nm(), eta) * moment_exact(form.regular(), eta);
}

inline ExtFloat ft_moment_ext(const FTSminClosedForm& form, const MomentOrder& eta) {
  eta.check_admissible(form.params());
  if (eta.is_integer()) return to_ext(ft_moment_exact(form, static_cast<long>(eta.value())));
  const ExtFloat nm(form.params().nm());
  return exp(lgamma(nm) - lgamma(nm + ExtFloat(eta.value()))) * moment_ext(form.regular(), eta);
}

inline double ft_moment(const FTSminClosedForm& form, const MomentOrder& eta) {
  return static_cast<double>(ft_moment_ext(form, eta));
}

/// R(delta): probability that the smallest eigenvalue lies within delta of 1/n.
inline ExtFloat r_delta_ext(const FTSminClosedForm& form, double delta) {
  const int n = form.params().n();
  if (!(delta > 0) || delta > 1.0 / n) throw DomainError("r_delta requires 0 < delta <= 1/n");
  // z = n (1/n - delta) = 1 - n delta
  return form.survival_scaled_ext(ExtFloat(1) - ExtFloat(n) * ExtFloat(delta));
}

inline double r_delta(const FTSminClosedForm& form, double delta) { return static_cast<double>(r_delta_ext(form, delta)); }

/// f~(x) = mn f(mn x): the regular density of the rescaled ensemble W/(mn).
inline double scaled_approx_density(const SminClosedForm& regular, double x, const EvalOptions& opt = {}) {
  if (!(x >= 0)) throw DomainError("scaled_approx_density requires x >= 0");
  const double nm = static_cast<double>(regular.params().nm());
  return nm * regular.eval(nm * x, opt);
}

/// Fixed-trace alpha = 1 density from the closed-form binomial sum
///   Gamma(n^2+n) Gamma(n+2) sum_{j=2}^{n+1} x^{j-1}(1-nx)^{n^2+n-j-1}
///   / (Gamma(n-j+2) Gamma(j+1) Gamma(j-1) Gamma(n^2+n-j)),
/// returned as weights indexed by j. Empty when every term vanishes (n = 1).
inline std::vector<std::pair<int, Rational>> alpha1_ft_weights(int n) {
  std::vector<std::pair<int, Rational>> out;
  const long big = static_cast<long>(n) * n + n;
  for (int j = 2; j <= n + 1; ++j) {
    if (big - j <= 0) continue;  // 1/Gamma(0) = 0
    out.emplace_back(j, ratio(factorial(big - 1) * factorial(n + 1),
                              factorial(n - j + 1) * factorial(j) * factorial(j - 2) * factorial(big - j - 1)));
  }
  return out;
}

/// Density from the alpha = 1 survival function
///   Q(x) = Gamma(n+1) Gamma(n^2+n) sum_{j=0}^n x^j (1-nx)^{n^2+n-j-1}
///          / (Gamma(j+1)^2 Gamma(n-j+1) Gamma(n^2+n-j)),
/// as -dQ/dx expanded exactly.
inline RationalPolynomial alpha1_density_from_survival(int n) {
  const long big = static_cast<long>(n) * n + n;
  RationalPolynomial q;
  for (int j = 0; j <= n; ++j) {
    if (big - j - 1 < 0) continue;
    const Rational c = ratio(factorial(n) * factorial(big - 1),
                             factorial(j) * factorial(j) * factorial(n - j) * factorial(big - j - 1));
    q += c * RationalPolynomial::binomial_power(1, Rational(-n), static_cast<unsigned long>(big - j - 1)).shifted(j);
  }
  return Rational(-1) * q.derivative();
}

/// Cross-check of the recurrence-based fixed-trace form at alpha = 1 against
/// the two independent closed forms above.
inline bool clz_alpha1_check(int n) {
  if (n < 1) throw DomainError("clz_alpha1_check requires n >= 1");
  const FTSminClosedForm form = ft_closed_form(EnsembleParams(n, n + 1));
  const auto closed = alpha1_ft_weights(n);
  if (form.degenerate()) return closed.empty();
  if (static_cast<int>(closed.size()) != form.regular().j_max() - form.regular().j_min() + 1) return false;
  for (const auto& [j, w] : closed) {
    if (form.weight(j) != w) return false;
  }
  return form.polynomial() == alpha1_density_from_survival(n);
}

}  // namespace wlsmin
