#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "wlsmin/fixed_trace.hpp"
#include "wlsmin/montecarlo.hpp"
#include "wlsmin/quadrature.hpp"
#include "wlsmin/spectral_densities.hpp"

using namespace wlsmin;

TEST(Rng, DeterministicPerSeedAndIndex) {
  DrawRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
}

TEST(Rng, GaussianMoments) {
  DrawRng r(11, 0);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = r.gaussian();
    s += g;
    s2 += g * g;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(Ginibre, SameSeedSameMatrix) {
  const EnsembleParams p(3, 5);
  DrawRng a(42, 9), b(42, 9);
  const auto x = sample_ginibre(p, a), y = sample_ginibre(p, b);
  EXPECT_EQ(x.rows(), 3);
  EXPECT_EQ(x.cols(), 5);
  EXPECT_TRUE((x.array() == y.array()).all());
}

TEST(Ginibre, TraceMeanAndVariance) {
  // tr AA^dagger is Gamma(nm, 1): mean and variance both nm.
  const EnsembleParams p(4, 4);
  const int draws = 100000;
  std::vector<double> tr(draws);
  for (int d = 0; d < draws; ++d) {
    DrawRng r(5, static_cast<std::uint64_t>(d));
    tr[static_cast<std::size_t>(d)] = sample_ginibre(p, r).squaredNorm();
  }
  const double mean = sample_mean(tr), var = sample_variance(tr);
  EXPECT_NEAR(mean, 16.0, 3.0 * std::sqrt(16.0 / draws));
  EXPECT_NEAR(var, 16.0, 0.05 * 16.0);
}

TEST(Samples, ReproducibleAndThreadIndependent) {
  const EnsembleParams p(5, 7);
  const auto a = smallest_eig_samples(p, 500, 99, false, 1);
  const auto b = smallest_eig_samples(p, 500, 99, false, 3);
  EXPECT_EQ(a.values, b.values);
  const auto c = smallest_eig_samples(p, 500, 100, false, 1);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.count, 500);
}

TEST(Samples, SingleEigenvalueFixedTrace) {
  const auto s = smallest_eig_samples(EnsembleParams(1, 1), 50, 1, true);
  for (double v : s.values) EXPECT_EQ(v, 1.0);
}

TEST(Samples, FixedTraceWithinSupport) {
  const auto s = smallest_eig_samples(EnsembleParams(4, 6), 2000, 3, true);
  for (double v : s.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 0.25);
  }
  EXPECT_THROW(smallest_eig_samples(EnsembleParams(4, 6), 0, 3, true), DomainError);
}

TEST(Samples, RegularKsAndMean) {
  const EnsembleParams p(8, 8);
  const auto form = smin_closed_form(p);
  const auto s = smallest_eig_samples(p, 20000, 2024, false);
  EXPECT_LT(ks_statistic(s, [&](double x) { return form.cdf(x); }), 0.015);
  const double mean = sample_mean(s.values);
  const double se = std::sqrt(sample_variance(s.values) / s.values.size());
  EXPECT_NEAR(mean, moment_exact(form, 1).get_d(), 3 * se);
}

TEST(Samples, FixedTraceKs) {
  const EnsembleParams p(6, 9);
  const auto form = ft_closed_form(p);
  const auto s = smallest_eig_samples(p, 20000, 77, true);
  EXPECT_LT(ks_statistic(s, [&](double x) { return form.cdf(x); }), 0.015);
}

TEST(Ks, InverseCdfSyntheticAndDegenerate) {
  // Exponential samples by inversion of a uniform stream.
  DrawRng r(1, 0);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = -std::log1p(-r.uniform()) / 3.0;
  const double d = ks_statistic(xs, [](double x) { return 1 - std::exp(-3 * x); });
  EXPECT_LT(d, 1.63 / std::sqrt(10000.0));
  const std::vector<double> constant(100, 0.2);
  const auto cdf = [](double x) { return 1 - std::exp(-x); };
  EXPECT_GE(ks_statistic(constant, cdf), 1 - cdf(0.2));
  EXPECT_THROW(ks_statistic(std::vector<double>{}, cdf), DomainError);
}

TEST(Histogram, AreaAndFlatness) {
  DrawRng r(9, 0);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = r.uniform();
  const int bins = 20;
  const auto h = histogram(xs, bins, 0.0, 1.0);
  EXPECT_NEAR(histogram_area(h), 1.0, 1e-12);
  const double tol = 4.0 / std::sqrt(100000.0 / bins);
  for (double y : h.ys) EXPECT_NEAR(y, 1.0, tol);
  EXPECT_THROW(histogram(xs, 1, 0.0, 1.0), DomainError);
}

TEST(Histogram, SquareEnsembleTracksExponential) {
  const EnsembleParams p(8, 8);
  const long count = 50000;
  const auto s = smallest_eig_samples(p, count, 31, false);
  const int bins = 25;
  const auto h = histogram(s.values, bins, 0.0, 0.5);
  const double w = 0.5 / bins;
  long inside = 0;
  for (double v : s.values) inside += v <= 0.5;
  for (std::size_t b = 0; b < h.xs.size(); ++b) {
    // Exact bin probability of 8 e^{-8x}, conditioned on x <= 0.5.
    const double lo = h.xs[b] - w / 2, hi = h.xs[b] + w / 2;
    const double pb = (std::exp(-8 * lo) - std::exp(-8 * hi)) / (1 - std::exp(-4.0));
    const double se = std::sqrt(pb * (1 - pb) / inside) / w;
    EXPECT_NEAR(h.ys[b], pb / w, 3.5 * se) << "bin " << b;
  }
}

TEST(Histogram, FixedTraceMarginalMatchesPooledEigenvalues) {
  // Pooled eigenvalues of F = W / tr W against the one-level density.
  const EnsembleParams p(8, 12);
  std::vector<double> pooled;
  const long draws = 20000;
  for (long d = 0; d < draws; ++d) {
    DrawRng r(123, static_cast<std::uint64_t>(d));
    const auto a = sample_ginibre(p, r);
    const Eigen::MatrixXcd w = a * a.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w, Eigen::EigenvaluesOnly);
    const double tr = es.eigenvalues().sum();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) pooled.push_back(es.eigenvalues()(i) / tr);
  }
  const FixedTraceMarginal pf(p);
  const int bins = 30;
  const double hi = 0.4, w = hi / bins;
  const auto h = histogram(pooled, bins, 0.0, hi);
  long inside = 0;
  for (double v : pooled) inside += v <= hi;
  const double frac = static_cast<double>(inside) / pooled.size();
  int bad = 0;
  std::string log;
  for (std::size_t b = 0; b < h.xs.size(); ++b) {
    const double lo = h.xs[b] - w / 2;
    const double pb = integrate([&](double x) { return pf(x); }, lo, lo + w, 1, 16) / frac;
    const double se = std::sqrt(pb * (1 - pb) / inside) / w;
    if (std::abs(h.ys[b] - pb / w) > 3 * se) {
      ++bad;
      log += "bin " + std::to_string(b) + ": " + std::to_string(h.ys[b]) + " vs " + std::to_string(pb / w) + "; ";
    }
  }
  EXPECT_LE(bad, 1) << log;
}

TEST(Export, CsvHasMetadataHeader) {
  const auto s = smallest_eig_samples(EnsembleParams(2, 3), 3, 5, false);
  const auto text = to_csv(s);
  EXPECT_EQ(text.rfind("# n=2\n# m=3\n# fixed_trace=false\n# seed=5\n# count=3\nsmallest_eigenvalue\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 9);
}
