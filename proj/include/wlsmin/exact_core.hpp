#pragma once

// Exact smallest-eigenvalue density of the complex Wishart-Laguerre ensemble.
//
// The density has the form f(x) = c_{n,m} e^{-nx} x^alpha g_{n,m}(x), where
// g_{n,m} is a polynomial of degree alpha(n-1) produced by a three-term
// recurrence that raises alpha by one per pass starting from g_{n,n} = 1.
// Expanding gives f(x) = sum_{j=alpha+1}^{alpha n+1} h_j x^{j-1} e^{-nx} with
// rational h_j. Everything up to the h_j is exact; floating point only enters
// at evaluation time.

#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "wlsmin/ensemble.hpp"
#include "wlsmin/extended_float.hpp"
#include "wlsmin/rational_polynomial.hpp"

namespace wlsmin {

/// c_{n,m} = 1/(Gamma(n) Gamma(m)) prod_{i=1}^{n-1} Gamma(i+2)/Gamma(i+alpha).
inline Rational norm_constant(const EnsembleParams& p) {
  const int n = p.n(), alpha = p.alpha();
  BigInt num = 1, den = factorial(n - 1) * factorial(p.m() - 1);
  for (int i = 1; i <= n - 1; ++i) {
    num *= factorial(i + 1);
    den *= factorial(i + alpha - 1);
  }
  return ratio(num, den);
}

namespace detail {

/// One outer pass: g_{n,m} from g_{n,m-1} = S_0.
///
/// S_i = (x+m-i+1) S_{i-1} - x/(n-i) S'_{i-1} + x (i-1)(m-i)/(n-i) S_{i-2}.
/// Each S_i is held as an integer polynomial P_i over a common denominator
/// D_i = D_0 (n-1)(n-2)...(n-i), so the inner loop is pure integer work.
inline RationalPolynomial recurrence_pass(int n, int m, const RationalPolynomial& s0) {
  BigInt d0 = 1;
  for (const auto& c : s0.coefficients()) mpz_lcm(d0.get_mpz_t(), d0.get_mpz_t(), c.get_den_mpz_t());

  std::vector<BigInt> prev2;
  std::vector<BigInt> prev1;
  prev1.reserve(s0.coefficients().size());
  for (const auto& c : s0.coefficients()) prev1.emplace_back(c.get_num() * (d0 / c.get_den()));
  BigInt den = d0;

  for (int i = 1; i <= n - 1; ++i) {
    const long k = n - i;
    const long shift = m - i + 1;
    // k * [(x + shift) S_{i-1} - x/k S'_{i-1}] over k * D_{i-1}.
    std::vector<BigInt> next(prev1.size() + 1);
    for (std::size_t d = 0; d < prev1.size(); ++d) {
      if (prev1[d] == 0) continue;
      next[d] += prev1[d] * (shift * k);
      next[d + 1] += prev1[d] * k;
    }
    for (std::size_t d = 1; d < prev1.size(); ++d) next[d] -= prev1[d] * static_cast<long>(d);
    if (i >= 2) {
      // D_i / D_{i-2} = k (k+1); the k cancels the 1/(n-i) of the coefficient.
      const BigInt factor = BigInt(i - 1) * (m - i) * (k + 1);
      for (std::size_t d = 0; d < prev2.size(); ++d) next[d + 1] += prev2[d] * factor;
    }
    prev2 = std::move(prev1);
    prev1 = std::move(next);
    den *= k;
  }

  std::vector<Rational> out;
  out.reserve(prev1.size());
  for (auto& c : prev1) out.emplace_back(c, den);
  return RationalPolynomial(std::move(out));
}

/// Approximate heap footprint of an exact polynomial.
inline std::size_t footprint(const RationalPolynomial& p) {
  std::size_t bytes = sizeof(RationalPolynomial);
  for (const auto& c : p.coefficients()) {
    bytes += sizeof(Rational) + sizeof(mp_limb_t) * (mpz_size(c.get_num_mpz_t()) + mpz_size(c.get_den_mpz_t()));
  }
  return bytes;
}

/// Process-wide cache of g_{n,n+alpha}: concurrent readers, exclusive inserts.
///
/// The highest alpha reached for each n is always kept, since later queries
/// resume the recurrence from it. Other intermediates are dropped, smallest n
/// and alpha first, once the cache exceeds its byte budget; at alpha in the
/// hundreds a single g runs to megabytes.
class GCache {
 public:
  static GCache& instance() {
    static GCache cache;
    return cache;
  }

  std::shared_ptr<const RationalPolynomial> get(const EnsembleParams& p) {
    const int n = p.n(), target = p.alpha();
    int start_alpha = 0;
    std::shared_ptr<const RationalPolynomial> cur;
    {
      std::shared_lock lock(mutex_);
      auto it = table_.upper_bound({n, target});
      if (it != table_.begin()) {
        --it;
        if (it->first.first == n) {
          start_alpha = it->first.second;
          cur = it->second;
        }
      }
    }
    if (!cur) {
      cur = std::make_shared<const RationalPolynomial>(RationalPolynomial{1});
      insert(n, 0, cur);
    }
    for (int a = start_alpha + 1; a <= target; ++a) {
      cur = std::make_shared<const RationalPolynomial>(recurrence_pass(n, n + a, *cur));
      insert(n, a, cur);
    }
    return cur;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    table_.clear();
    bytes_ = 0;
  }

  void set_budget(std::size_t bytes) {
    std::unique_lock lock(mutex_);
    budget_ = bytes;
    evict();
  }

  std::size_t bytes() const {
    std::shared_lock lock(mutex_);
    return bytes_;
  }

 private:
  void insert(int n, int alpha, std::shared_ptr<const RationalPolynomial> g) {
    std::unique_lock lock(mutex_);
    const std::size_t size = footprint(*g);
    if (table_.emplace(std::make_pair(n, alpha), std::move(g)).second) bytes_ += size;
    evict();
  }

  // Caller holds the unique lock.
  void evict() {
    for (auto it = table_.begin(); it != table_.end() && bytes_ > budget_;) {
      auto next = std::next(it);
      const bool newest_for_n = next == table_.end() || next->first.first != it->first.first;
      if (!newest_for_n) {
        bytes_ -= footprint(*it->second);
        table_.erase(it);
      }
      it = next;
    }
  }

  mutable std::shared_mutex mutex_;
  std::map<std::pair<int, int>, std::shared_ptr<const RationalPolynomial>> table_;
  std::size_t bytes_ = 0;
  std::size_t budget_ = std::size_t{256} << 20;
};

}  // namespace detail

/// g_{n,m}(x) by repeated application of the recurrence from the square case.
inline RationalPolynomial recurrence_g(const EnsembleParams& p) { return *detail::GCache::instance().get(p); }

/// Options for floating-point evaluation of closed forms.
struct EvalOptions {
  /// Above this n*m the extended-precision log-domain path is used.
  long extended_threshold = 400;
};

/// f(x) = sum_j h_j x^{j-1} e^{-nx}, j = alpha+1 .. alpha*n+1, with exact h_j.
class SminClosedForm {
 public:
  struct Term {
    int j;
    Rational h;
  };

  SminClosedForm(EnsembleParams params, std::vector<Rational> h) : data_(std::make_shared<Data>(params)) {
    const int jmin = params.alpha() + 1;
    const int jmax = params.alpha() * params.n() + 1;
    if (static_cast<int>(h.size()) != jmax - jmin + 1) {
      throw DomainError("coefficient count does not match the index range [alpha+1, alpha*n+1]");
    }
    data_->h = std::move(h);
    prepare();
  }

  const EnsembleParams& params() const { return data_->params; }
  int j_min() const { return data_->params.alpha() + 1; }
  int j_max() const { return data_->params.alpha() * data_->params.n() + 1; }

  /// h_j; zero outside [j_min, j_max].
  Rational h(int j) const {
    if (j < j_min() || j > j_max()) return 0;
    return data_->h[static_cast<std::size_t>(j - j_min())];
  }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    for (int j = j_min(); j <= j_max(); ++j) out.push_back({j, h(j)});
    return out;
  }

  /// c_j = h_j Gamma(j) / n^j, the probability mass carried by term j.
  Rational term_mass(int j) const { return h(j) * Rational(factorial(j - 1)) / Rational(ipow(data_->params.n(), j)); }

  /// sum_j c_j, which must equal 1.
  Rational total_mass() const {
    Rational s = 0;
    for (int j = j_min(); j <= j_max(); ++j) s += term_mass(j);
    return s;
  }

  /// The full density as an exact polynomial in x (without e^{-nx}).
  RationalPolynomial polynomial_part() const {
    std::vector<Rational> v(static_cast<std::size_t>(j_max()));
    for (int j = j_min(); j <= j_max(); ++j) v[static_cast<std::size_t>(j - 1)] = h(j);
    return RationalPolynomial(std::move(v));
  }

  double eval(double x, const EvalOptions& opt = {}) const;
  ExtFloat eval_ext(const ExtFloat& x) const;
  double cdf(double x) const;
  ExtFloat survival_ext(const ExtFloat& x) const;

 private:
  struct Data {
    explicit Data(EnsembleParams p) : params(p) {}
    EnsembleParams params;
    std::vector<Rational> h;
    std::vector<double> h_double;
    bool double_safe = true;
    std::vector<ExtFloat> log_abs_h;
    std::vector<int> sign_h;
    // tail_mass[k] = sum_{j > k} c_j for k = 0 .. j_max-1.
    std::vector<ExtFloat> tail_mass;
  };

  void prepare() {
    auto& d = *data_;
    const std::size_t count = d.h.size();
    d.h_double.resize(count);
    d.log_abs_h.resize(count);
    d.sign_h.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      d.sign_h[i] = sgn(d.h[i]);
      d.log_abs_h[i] = d.sign_h[i] == 0 ? ExtFloat(0) : log_abs(d.h[i]);
      d.h_double[i] = d.h[i].get_d();
      const double la = static_cast<double>(d.log_abs_h[i]);
      if (d.sign_h[i] != 0 && (la > 700.0 || la < -700.0)) d.double_safe = false;
    }
    const int jmax = j_max();
    d.tail_mass.assign(static_cast<std::size_t>(jmax), ExtFloat(0));
    Rational acc = 0;
    for (int k = jmax - 1; k >= 0; --k) {
      acc += term_mass(k + 1);
      d.tail_mass[static_cast<std::size_t>(k)] = to_ext(acc);
    }
  }

  std::shared_ptr<Data> data_;
};

namespace detail {
inline SminClosedForm assemble(const EnsembleParams& p, const RationalPolynomial& g) {
  if (g.degree() != static_cast<long>(p.alpha()) * (p.n() - 1)) {
    throw NumericalFailure("recurrence produced degree " + std::to_string(g.degree()) + ", expected alpha(n-1)");
  }
  const Rational c = norm_constant(p);
  std::vector<Rational> h;
  h.reserve(static_cast<std::size_t>(g.degree() + 1));
  for (const auto& coeff : g.coefficients()) h.push_back(c * coeff);
  SminClosedForm form(p, std::move(h));
  const Rational mass = form.total_mass();
  if (mass != 1) {
    throw NumericalFailure("normalization identity failed for n=" + std::to_string(p.n()) +
                           " m=" + std::to_string(p.m()) + ": sum h_j Gamma(j)/n^j = " + mass.get_str());
  }
  return form;
}
}  // namespace detail

/// Exact closed form; the unit-mass identity is checked before returning.
inline SminClosedForm smin_closed_form(const EnsembleParams& p) { return detail::assemble(p, recurrence_g(p)); }

/// Calls visit(form) for m = n, n+1, .., n+alpha_max in order, running the
/// recurrence once and bypassing the shared cache.
template <class Visitor>
void for_each_alpha(int n, int alpha_max, Visitor&& visit) {
  RationalPolynomial g{1};
  for (int a = 0; a <= alpha_max; ++a) {
    const EnsembleParams p(n, n + a);
    if (a > 0) g = detail::recurrence_pass(n, n + a, g);
    visit(detail::assemble(p, g));
  }
}

inline ExtFloat SminClosedForm::eval_ext(const ExtFloat& x) const {
  if (x < 0) throw DomainError("smallest-eigenvalue density requires x >= 0");
  const auto& d = *data_;
  const int n = d.params.n();
  if (x == 0) return j_min() == 1 ? to_ext(d.h.front()) : ExtFloat(0);
  const ExtFloat lx = log(x);
  const ExtFloat base = -ExtFloat(n) * x;
  std::vector<ExtFloat> logs(d.h.size());
  ExtFloat lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.h.size(); ++i) {
    if (d.sign_h[i] == 0) continue;
    logs[i] = ExtFloat(j_min() + static_cast<int>(i) - 1) * lx + base + d.log_abs_h[i];
    if (logs[i] > lmax) lmax = logs[i];
  }
  // Terms more than e^-400 below the largest cannot reach the 266-bit significand.
  ExtFloat sum = 0;
  for (std::size_t i = 0; i < d.h.size(); ++i) {
    if (d.sign_h[i] == 0) continue;
    const ExtFloat rel = logs[i] - lmax;
    if (rel < -400) continue;
    sum += d.sign_h[i] > 0 ? exp(rel) : -exp(rel);
  }
  return sum * exp(lmax);
}

inline double SminClosedForm::eval(double x, const EvalOptions& opt) const {
  if (!(x >= 0)) throw DomainError("smallest-eigenvalue density requires x >= 0");
  const auto& d = *data_;
  if (std::isinf(x)) return 0.0;
  if (d.params.nm() <= opt.extended_threshold && d.double_safe) {
    double poly = 0.0;
    for (auto it = d.h_double.rbegin(); it != d.h_double.rend(); ++it) poly = poly * x + *it;
    return std::exp(-d.params.n() * x) * std::pow(x, d.params.alpha()) * poly;
  }
  return static_cast<double>(eval_ext(ExtFloat(x)));
}

/// 1 - F(x) = sum_{k=0}^{j_max-1} e^{-nx} (nx)^k / k! * sum_{j>k} c_j.
inline ExtFloat SminClosedForm::survival_ext(const ExtFloat& x) const {
  if (x < 0) throw DomainError("cdf requires x >= 0");
  const auto& d = *data_;
  if (x == 0) return ExtFloat(1);
  const ExtFloat y = ExtFloat(d.params.n()) * x;
  ExtFloat weight = exp(-y);
  ExtFloat sum = 0;
  for (std::size_t k = 0; k < d.tail_mass.size(); ++k) {
    if (k > 0) weight *= y / ExtFloat(static_cast<long>(k));
    sum += weight * d.tail_mass[k];
  }
  return sum;
}

inline double SminClosedForm::cdf(double x) const {
  if (!(x >= 0)) throw DomainError("cdf requires x >= 0");
  if (std::isinf(x)) return 1.0;
  const double f = static_cast<double>(ExtFloat(1) - survival_ext(ExtFloat(x)));
  return std::clamp(f, 0.0, 1.0);
}

inline double eval_density(const SminClosedForm& form, double x, const EvalOptions& opt = {}) {
  return form.eval(x, opt);
}

inline double cdf(const SminClosedForm& form, double x) { return form.cdf(x); }

/// <x^eta> = sum_j h_j Gamma(j+eta)/n^{j+eta}, exact for integer eta.
inline Rational moment_exact(const SminClosedForm& form, long eta) {
  const auto& p = form.params();
  MomentOrder(static_cast<double>(eta)).check_admissible(p);
  Rational s = 0;
  for (int j = form.j_min(); j <= form.j_max(); ++j) {
    const long arg = j + eta;  // >= 1 by admissibility
    s += form.h(j) * Rational(factorial(static_cast<unsigned long>(arg - 1))) / rpow(p.n(), arg);
  }
  s.canonicalize();
  return s;
}

inline ExtFloat moment_ext(const SminClosedForm& form, const MomentOrder& eta) {
  const auto& p = form.params();
  eta.check_admissible(p);
  if (eta.is_integer()) return to_ext(moment_exact(form, static_cast<long>(eta.value())));
  const ExtFloat e(eta.value());
  const ExtFloat ln_n = log(ExtFloat(p.n()));
  ExtFloat s = 0;
  for (int j = form.j_min(); j <= form.j_max(); ++j) {
    const Rational hj = form.h(j);
    const int sign = sgn(hj);
    if (sign == 0) continue;
    const ExtFloat arg = ExtFloat(j) + e;
    const ExtFloat term = exp(log_abs(hj) + lgamma(arg) - arg * ln_n);
    s += sign > 0 ? term : -term;
  }
  return s;
}

inline double moment(const SminClosedForm& form, const MomentOrder& eta) {
  return static_cast<double>(moment_ext(form, eta));
}

/// L_k^{(a)}(x) as an exact polynomial: sum_i (-1)^i C(k+a, k-i) x^i / i!.
inline RationalPolynomial laguerre_polynomial(unsigned long k, unsigned long a) {
  std::vector<Rational> v(k + 1);
  for (unsigned long i = 0; i <= k; ++i) {
    const Rational c = ratio(binomial(k + a, k - i), factorial(i));
    v[i] = (i % 2 == 0) ? c : Rational(-c);
  }
  return RationalPolynomial(std::move(v));
}

/// p(x) -> p(-x).
inline RationalPolynomial reflect(const RationalPolynomial& p) {
  std::vector<Rational> v = p.coefficients();
  for (std::size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
  return RationalPolynomial(std::move(v));
}

/// g_{n,n+1}(x) == Gamma(n) L_{n-1}^{(2)}(-x).
inline bool laguerre_identity_check(int n) {
  if (n < 1) throw DomainError("laguerre_identity_check requires n >= 1");
  const RationalPolynomial lhs = recurrence_g(EnsembleParams(n, n + 1));
  const RationalPolynomial rhs = Rational(factorial(static_cast<unsigned long>(n - 1))) *
                                 reflect(laguerre_polynomial(static_cast<unsigned long>(n - 1), 2));
  return lhs == rhs;
}

}  // namespace wlsmin
