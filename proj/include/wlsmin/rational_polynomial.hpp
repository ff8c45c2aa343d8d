#pragma once

// Dense univariate polynomials over exact rationals (GMP).

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace wlsmin {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt factorial(unsigned long k) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt ipow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// num/den in canonical form; mpq arithmetic requires canonical operands.
inline Rational ratio(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Exact rational power b^e for a signed exponent (b != 0 when e < 0).
inline Rational rpow(long base, long e) {
  BigInt p = ipow(BigInt(base), static_cast<unsigned long>(e < 0 ? -e : e));
  Rational r = e < 0 ? Rational(BigInt(1), p) : Rational(p);
  r.canonicalize();
  return r;
}

class RationalPolynomial {
 public:
  RationalPolynomial() = default;

  explicit RationalPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    for (auto& c : coeffs_) c.canonicalize();
    trim();
  }

  RationalPolynomial(std::initializer_list<long> coeffs) {
    coeffs_.reserve(coeffs.size());
    for (long c : coeffs) coeffs_.emplace_back(c);
    trim();
  }

  static RationalPolynomial constant(const Rational& c) { return RationalPolynomial(std::vector<Rational>{c}); }

  static RationalPolynomial monomial(const Rational& c, std::size_t degree) {
    std::vector<Rational> v(degree + 1);
    v[degree] = c;
    return RationalPolynomial(std::move(v));
  }

  /// (a + b x)^k expanded with exact binomials.
  static RationalPolynomial binomial_power(const Rational& a, const Rational& b, unsigned long k) {
    std::vector<Rational> v(k + 1);
    for (unsigned long i = 0; i <= k; ++i) {
      Rational ai = 1, bi = 1;
      mpz_pow_ui(ai.get_num_mpz_t(), a.get_num_mpz_t(), k - i);
      mpz_pow_ui(ai.get_den_mpz_t(), a.get_den_mpz_t(), k - i);
      mpz_pow_ui(bi.get_num_mpz_t(), b.get_num_mpz_t(), i);
      mpz_pow_ui(bi.get_den_mpz_t(), b.get_den_mpz_t(), i);
      v[i] = Rational(binomial(k, i)) * ai * bi;
    }
    return RationalPolynomial(std::move(v));
  }

  bool is_zero() const { return coeffs_.empty(); }

  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }

  const std::vector<Rational>& coefficients() const { return coeffs_; }

  Rational coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

  RationalPolynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> v(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) v[k - 1] = coeffs_[k] * static_cast<unsigned long>(k);
    return RationalPolynomial(std::move(v));
  }

  /// Multiplication by x^k.
  RationalPolynomial shifted(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<Rational> v(coeffs_.size() + k);
    std::copy(coeffs_.begin(), coeffs_.end(), v.begin() + static_cast<std::ptrdiff_t>(k));
    return RationalPolynomial(std::move(v));
  }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Horner evaluation in any numeric type constructible from double.
  template <class T>
  T evaluate(const T& x) const {
    T acc = T(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + T(it->get_d());
    return acc;
  }

  RationalPolynomial& operator+=(const RationalPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }

  RationalPolynomial& operator-=(const RationalPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }

  RationalPolynomial& operator*=(const Rational& s) {
    if (s == 0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& s) { return a *= s; }
  friend RationalPolynomial operator*(const Rational& s, RationalPolynomial a) { return a *= s; }

  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return RationalPolynomial(std::move(v));
  }

  RationalPolynomial& operator*=(const RationalPolynomial& o) { return *this = *this * o; }

  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Human-readable form, ascending powers: "12 + 8*x + x^2".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << coeffs_[k].get_str();
      if (k >= 1) os << "*x";
      if (k >= 2) os << '^' << k;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

}  // namespace wlsmin
