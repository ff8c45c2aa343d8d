#pragma once

// Coupled kicked tops: Floquet evolution of an N1 x N2 state matrix and the
// Schmidt spectra of the evolved states.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "wlsmin/ensemble.hpp"
#include "wlsmin/extended_float.hpp"
#include "wlsmin/rational_polynomial.hpp"

namespace wlsmin {

using cplx = std::complex<double>;
using StateMatrix = Eigen::MatrixXcd;

/// Spin quantum number stored as 2j.
struct Spin {
  int twice;
  double value() const { return 0.5 * twice; }
  int dim() const { return twice + 1; }
  static Spin from_dim(int dim) {
    if (dim < 2) throw DomainError("top dimension 2j+1 must be at least 2");
    return {dim - 1};
  }
};

struct TopParams {
  Spin j1{1}, j2{1};
  double k1 = 0, k2 = 0;
  double eps = 0;

  int n1() const { return j1.dim(); }
  int n2() const { return j2.dim(); }

  void validate() const {
    if (j1.twice < 1 || j2.twice < 1) throw DomainError("spins must be >= 1/2");
    if (n1() > n2()) throw DomainError("reduced-density convention needs N1 <= N2");
  }
};

struct CoherentAngles {
  double theta0 = 0;
  double phi0 = 0;

  void validate() const {
    if (!(theta0 >= 0 && theta0 <= std::numbers::pi)) throw DomainError("theta0 must lie in [0, pi]");
    if (!(phi0 >= 0 && phi0 < 2 * std::numbers::pi)) throw DomainError("phi0 must lie in [0, 2 pi)");
  }
};

/// d^j_{a,b}(pi/2) = <j,a| exp(-i pi/2 J_y) |j,b>, rows and columns a, b = -j .. j.
///
/// d = 2^{-j} sqrt((j+a)!(j-a)!/((j+b)!(j-b)!)) sum_s (-1)^{a-b+s} C(j+b, s) C(j-b, j-a-s);
/// the sum is an exact integer.
inline Eigen::MatrixXd wigner_d_half_pi(Spin j) {
  if (j.twice < 0) throw DomainError("2j must be a non-negative integer");
  const int n = j.dim(), tj = j.twice;
  Eigen::MatrixXd d(n, n);
  // Work with jp = j + a, jm = j - a (integers).
  for (int ra = 0; ra < n; ++ra) {
    const int jpa = ra, jma = tj - ra;
    for (int cb = 0; cb < n; ++cb) {
      const int jpb = cb, jmb = tj - cb;
      BigInt sum = 0;
      // a - b + s = ra - cb + s, j - a - s = jma - s.
      for (int s = std::max(0, cb - ra); s <= std::min(jpb, jma); ++s) {
        BigInt t = binomial(static_cast<unsigned long>(jpb), static_cast<unsigned long>(s)) *
                   binomial(static_cast<unsigned long>(jmb), static_cast<unsigned long>(jma - s));
        if ((ra - cb + s) % 2 != 0) t = -t;
        sum += t;
      }
      const Rational r = ratio(factorial(jpa) * factorial(jma), factorial(jpb) * factorial(jmb));
      const ExtFloat v = to_ext(sum) * sqrt(to_ext(r)) / pow(ExtFloat(2), ExtFloat(tj) / 2);
      d(ra, cb) = static_cast<double>(v);
    }
  }
  return d;
}

struct FloquetFactors {
  Eigen::MatrixXcd u1, u2, v;
};

/// U_r = diag(exp(-i k_r a^2 / 2 j_r)) d(pi/2), V_ab = exp(-i eps a b / sqrt(j1 j2)).
inline FloquetFactors floquet_factors(const TopParams& p) {
  p.validate();
  auto top = [](Spin j, double k) {
    const Eigen::MatrixXd d = wigner_d_half_pi(j);
    Eigen::MatrixXcd u(j.dim(), j.dim());
    for (int r = 0; r < j.dim(); ++r) {
      const double a = r - j.value();
      const cplx phase = std::exp(cplx(0, -k * a * a / (2.0 * j.value())));
      for (int c = 0; c < j.dim(); ++c) u(r, c) = phase * d(r, c);
    }
    return u;
  };
  FloquetFactors f{top(p.j1, p.k1), top(p.j2, p.k2), Eigen::MatrixXcd(p.n1(), p.n2())};
  const double scale = p.eps / std::sqrt(p.j1.value() * p.j2.value());
  for (int r = 0; r < p.n1(); ++r) {
    for (int c = 0; c < p.n2(); ++c) {
      const double a = r - p.j1.value(), b = c - p.j2.value();
      f.v(r, c) = std::exp(cplx(0, -scale * a * b));
    }
  }
  return f;
}

/// <j,m|theta,phi> = (1+|g|^2)^{-j} g^{j-m} sqrt(C(2j, j+m)), g = e^{i phi} tan(theta/2), m = -j .. j.
inline Eigen::VectorXcd coherent_state(Spin j, const CoherentAngles& ang) {
  ang.validate();
  const cplx g = std::polar(std::tan(0.5 * ang.theta0), ang.phi0);
  const double pref = std::pow(1.0 + std::norm(g), -j.value());
  Eigen::VectorXcd chi(j.dim());
  for (int r = 0; r < j.dim(); ++r) {
    const int power = j.twice - r;  // j - m
    const cplx gp = power == 0 ? cplx(1, 0) : std::pow(g, power);
    const double c = binomial(static_cast<unsigned long>(j.twice), static_cast<unsigned long>(r)).get_d();
    chi(r) = pref * gp * std::sqrt(c);
  }
  // The closed form is exactly unit norm; strip rounding.
  return chi / chi.norm();
}

/// Psi' = V o (U1 Psi U2^T).
inline StateMatrix step(const StateMatrix& psi, const FloquetFactors& f) {
  if (psi.rows() != f.u1.rows() || psi.cols() != f.u2.rows()) {
    throw DomainError("state matrix is " + std::to_string(psi.rows()) + "x" + std::to_string(psi.cols()) +
                      ", Floquet factors expect " + std::to_string(f.u1.rows()) + "x" + std::to_string(f.u2.rows()));
  }
  return f.v.cwiseProduct(f.u1 * psi * f.u2.transpose());
}

struct SchmidtSpectrum {
  std::vector<double> mu;  // descending
  double smallest() const { return mu.back(); }
};

/// Eigenvalues of Psi Psi^dagger, clamped to [0, 1] and sorted descending.
inline SchmidtSpectrum schmidt_spectrum(const StateMatrix& psi) {
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigensolver failed on the reduced density matrix");
  SchmidtSpectrum s;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s.mu.push_back(std::clamp(es.eigenvalues()(i), 0.0, 1.0));
  std::sort(s.mu.begin(), s.mu.end(), std::greater<>());
  double total = 0;
  for (double m : s.mu) total += m;
  if (std::abs(total - 1.0) <= 1e-10) {
    for (double& m : s.mu) m /= total;
  }
  return s;
}

struct EnsembleRun {
  std::vector<SchmidtSpectrum> spectra;
  long renormalizations = 0;
  double max_norm_drift = 0;
};

struct RunProtocol {
  long skip = 500;
  long stride = 20;
  long count = 2000;
};

/// Evolve chi1 chi2^T, drop `skip` periods, then keep every `stride`-th state.
inline EnsembleRun run_ensemble(const TopParams& p, const CoherentAngles& top1, const CoherentAngles& top2,
                                const RunProtocol& proto = {}) {
  if (proto.skip < 0 || proto.stride < 1 || proto.count < 1) {
    throw DomainError("need skip >= 0, stride >= 1, count >= 1");
  }
  const FloquetFactors f = floquet_factors(p);
  StateMatrix psi = coherent_state(p.j1, top1) * coherent_state(p.j2, top2).transpose();
  EnsembleRun run;
  run.spectra.reserve(static_cast<std::size_t>(proto.count));
  long period = 0;
  auto advance = [&]() {
    psi = step(psi, f);
    ++period;
    if (period % 100 == 0) {
      const double norm = psi.norm();
      run.max_norm_drift = std::max(run.max_norm_drift, std::abs(norm - 1.0));
      if (std::abs(norm - 1.0) > 1e-12) {
        psi /= norm;
        ++run.renormalizations;
      }
    }
  };
  for (long t = 0; t < proto.skip; ++t) advance();
  while (static_cast<long>(run.spectra.size()) < proto.count) {
    for (long t = 0; t < proto.stride; ++t) advance();
    try {
      run.spectra.push_back(schmidt_spectrum(psi));
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("period " + std::to_string(period) + ": " + e.what());
    }
  }
  return run;
}

/// Two initial-condition sets per top, used as defaults for the regime comparisons.
inline std::pair<CoherentAngles, CoherentAngles> default_angles(int set) {
  if (set == 0) return {{0.89, 0.63}, {0.89, 0.63}};
  return {{2.25, 1.31}, {0.40, 3.50}};
}

}  // namespace wlsmin
