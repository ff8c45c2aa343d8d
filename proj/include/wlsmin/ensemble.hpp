#pragma once

#include <stdexcept>
#include <string>

namespace wlsmin {

/// Thrown when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a numerical procedure fails to converge or loses an invariant.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complex Wishart-Laguerre parameters: W = A A^dagger with A of size n x m, n <= m.
class EnsembleParams {
 public:
  EnsembleParams(int n, int m) : n_(n), m_(m) {
    if (n < 1) throw DomainError("ensemble dimension n must be >= 1, got " + std::to_string(n));
    if (m < n) {
      throw DomainError("degrees of freedom m must satisfy m >= n, got n=" + std::to_string(n) +
                        " m=" + std::to_string(m));
    }
  }

  int n() const { return n_; }
  int m() const { return m_; }
  int alpha() const { return m_ - n_; }
  long nm() const { return static_cast<long>(n_) * m_; }

  friend bool operator==(const EnsembleParams&, const EnsembleParams&) = default;

 private:
  int n_;
  int m_;
};

/// Real moment order; admissible when eta > -alpha - 1.
class MomentOrder {
 public:
  explicit MomentOrder(double eta) : eta_(eta) {}

  double value() const { return eta_; }

  bool is_integer() const { return eta_ == static_cast<double>(static_cast<long>(eta_)); }

  void check_admissible(const EnsembleParams& p) const {
    if (!(eta_ > -static_cast<double>(p.alpha()) - 1.0)) {
      throw DomainError("moment order eta=" + std::to_string(eta_) + " must exceed -alpha-1=" +
                        std::to_string(-p.alpha() - 1));
    }
  }

 private:
  double eta_;
};

}  // namespace wlsmin
