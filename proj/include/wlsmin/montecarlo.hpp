#pragma once

// Seeded sampling of the complex Wishart and fixed-trace ensembles.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wlsmin/ensemble.hpp"
#include "wlsmin/grid.hpp"

namespace wlsmin {

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// SplitMix64 stream keyed by (seed, draw index). Streams for distinct
/// indices are independent, so draws can run in any order on any thread.
class DrawRng {
 public:
  DrawRng(std::uint64_t seed, std::uint64_t index) : state_(mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Marsaglia polar method; the spare deviate is kept.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

using ComplexMatrix = Eigen::MatrixXcd;

/// n x m matrix with real and imaginary parts N(0, 1/2), density prop. to exp(-tr AA^dagger).
inline ComplexMatrix sample_ginibre(const EnsembleParams& p, DrawRng& rng) {
  const double s = std::sqrt(0.5);
  ComplexMatrix a(p.n(), p.m());
  for (int j = 0; j < p.m(); ++j) {
    for (int i = 0; i < p.n(); ++i) {
      const double re = rng.gaussian();
      const double im = rng.gaussian();
      a(i, j) = {s * re, s * im};
    }
  }
  return a;
}

struct SampleSet {
  std::vector<double> values;
  EnsembleParams params;
  bool fixed_trace = false;
  std::uint64_t seed = 0;
  long count = 0;
};

class SamplingError : public NumericalFailure {
 public:
  SamplingError(long draw, const std::string& what)
      : NumericalFailure("draw " + std::to_string(draw) + ": " + what), draw_(draw) {}
  long draw() const { return draw_; }

 private:
  long draw_;
};

namespace detail {
inline double smallest_eig_one(const EnsembleParams& p, std::uint64_t seed, long draw, bool fixed_trace) {
  DrawRng rng(seed, static_cast<std::uint64_t>(draw));
  const ComplexMatrix a = sample_ginibre(p, rng);
  const ComplexMatrix w = a * a.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(w, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SamplingError(draw, "Hermitian eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  const double trace = ev.sum();
  double lo = ev.minCoeff();
  // Backward-stable solver: anything above -c eps ||W|| is a rounded zero.
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, ev.maxCoeff());
  if (lo < 0) {
    if (lo < -tol) throw SamplingError(draw, "negative eigenvalue of a Gram matrix");
    lo = 0.0;
  }
  if (!fixed_trace) return lo;
  return std::min(lo / trace, 1.0 / p.n());
}
}  // namespace detail

/// Smallest eigenvalue of W = AA^dagger (or of W / tr W) for draws 0 .. count-1.
inline SampleSet smallest_eig_samples(const EnsembleParams& p, long count, std::uint64_t seed, bool fixed_trace,
                                      unsigned threads = 0) {
  if (count < 1) throw DomainError("sample count must be >= 1");
  SampleSet out{std::vector<double>(static_cast<std::size_t>(count)), p, fixed_trace, seed, count};
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, count));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      for (long d = t; d < count; d += threads) {
        out.values[static_cast<std::size_t>(d)] = detail::smallest_eig_one(p, seed, d, fixed_trace);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// sup_i max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|) over the sorted sample.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw DomainError("KS statistic needs at least one sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
  }
  return d;
}

inline double ks_statistic(const SampleSet& s, const std::function<double(double)>& cdf) {
  return ks_statistic(s.values, cdf);
}

/// Area-normalized histogram on [lo, hi]; xs holds the bin centres.
inline GridDensity histogram(const std::vector<double>& values, int bins, double lo, double hi) {
  if (bins < 2) throw DomainError("histogram needs at least 2 bins");
  if (values.empty()) throw DomainError("histogram of an empty sample");
  if (!(hi > lo)) throw DomainError("histogram range must satisfy lo < hi");
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  const double w = (hi - lo) / bins;
  for (double v : values) {
    if (v < lo || v > hi) continue;
    auto b = static_cast<long>((v - lo) / w);
    b = std::clamp<long>(b, 0, bins - 1);
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  GridDensity g;
  g.kind = "histogram";
  double total = 0.0;
  for (double c : counts) total += c;
  if (total == 0) throw DomainError("no samples fall inside the histogram range");
  for (int b = 0; b < bins; ++b) {
    g.xs.push_back(lo + (b + 0.5) * w);
    g.ys.push_back(counts[static_cast<std::size_t>(b)] / (total * w));
  }
  return g;
}

inline GridDensity histogram(const SampleSet& s, int bins) {
  const auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
  const double lo = *mn;
  const double hi = *mx > lo ? *mx : lo + 1.0;
  GridDensity g = histogram(s.values, bins, lo, hi);
  g.params = s.params;
  return g;
}

/// Area of a histogram (bin width times the sum of heights).
inline double histogram_area(const GridDensity& g) {
  if (g.xs.size() < 2) return 0.0;
  const double w = g.xs[1] - g.xs[0];
  double s = 0.0;
  for (double y : g.ys) s += y * w;
  return s;
}

inline std::string to_csv(const SampleSet& s) {
  std::ostringstream os;
  os << "# n=" << s.params.n() << '\n'
     << "# m=" << s.params.m() << '\n'
     << "# fixed_trace=" << (s.fixed_trace ? "true" : "false") << '\n'
     << "# seed=" << s.seed << '\n'
     << "# count=" << s.count << '\n'
     << "smallest_eigenvalue\n";
  for (double v : s.values) os << format_double(v) << '\n';
  return os.str();
}

inline double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double mu = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace wlsmin
