#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/laguerre.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

#include "wlsmin/exact_core.hpp"
#include "wlsmin/spectral_densities.hpp"

using namespace wlsmin;

namespace {

template <class F>
double gk(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Fixed-trace marginal by term-wise Laplace inversion of the regular
// marginal: p(l) = sum_k a_k l^k e^{-l} gives
//   p_F(mu) = Gamma(nm) sum_k a_k mu^k (1-mu)^{nm-k-2} / Gamma(nm-k-1).
// The a_k come from the exact Laguerre sum form.
class LaplaceMarginal {
 public:
  explicit LaplaceMarginal(const EnsembleParams& p) : nm_(p.nm()) {
    const int n = p.n(), alpha = p.alpha();
    RationalPolynomial acc;
    for (int j = 0; j < n; ++j) {
      const auto l = laguerre_polynomial(static_cast<unsigned long>(j), static_cast<unsigned long>(alpha));
      acc += ratio(factorial(j), factorial(j + alpha)) * (l * l);
    }
    poly_ = acc.shifted(static_cast<std::size_t>(alpha)) * Rational(1, n);
  }

  // Exact Gamma ratios, 100-digit powers: no cancellation left in double.
  double operator()(double mu) const {
    using Big = boost::multiprecision::cpp_bin_float_100;
    const auto& c = poly_.coefficients();
    const Big x(mu);
    Big s = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] == 0) continue;
      const long k_l = static_cast<long>(k);
      Rational w = c[k];
      for (long t = nm_ - k_l - 1; t <= nm_ - 1; ++t) w *= t;
      s += Big(w.get_num().get_str()) / Big(w.get_den().get_str()) * pow(x, k_l) * pow(1 - x, nm_ - k_l - 2);
    }
    return static_cast<double>(s);
  }

 private:
  long nm_;
  RationalPolynomial poly_;
};

}  // namespace

TEST(LaguerreValues, MatchBoost) {
  for (int a : {0, 3}) {
    const auto l = laguerre_values(10, a, 2.7);
    for (unsigned k = 0; k <= 10; ++k) EXPECT_NEAR(l[k], boost::math::laguerre(k, static_cast<unsigned>(a), 2.7), 1e-12);
  }
}

TEST(MarginalRegular, SingleEigenvalue) {
  const EnsembleParams p(1, 1);
  for (double l : {0.0, 0.4, 3.0}) EXPECT_NEAR(marginal_regular(p, l), std::exp(-l), 1e-15);
  EXPECT_EQ(marginal_regular(EnsembleParams(3, 5), 0.0), 0.0);
  EXPECT_THROW(marginal_regular(p, -1.0), DomainError);
}

TEST(MarginalRegular, TwoFormsAgree) {
  for (int n = 1; n <= 15; n += 2) {
    for (int a = 0; a <= 8; a += 2) {
      const EnsembleParams p(n, n + a);
      for (int i = 0; i < 100; ++i) {
        const double l = 0.01 + i * (4.0 * (n + a) + 10) / 100.0;
        EXPECT_NEAR(marginal_regular(p, l), marginal_regular_sum(p, l), 1e-10) << n << "," << n + a << " l=" << l;
      }
    }
  }
}

TEST(MarginalRegular, Normalized) {
  for (auto [n, m] : {std::pair{3, 5}, {8, 8}, {10, 14}}) {
    const EnsembleParams p(n, m);
    EXPECT_NEAR(gk([&](double l) { return marginal_regular(p, l); }, 0.0, 200.0), 1.0, 1e-10);
  }
}

TEST(MarginalFixedTrace, LaplaceOracle) {
  for (auto [n, m] : {std::pair{2, 2}, {2, 3}, {3, 5}, {6, 9}, {8, 12}}) {
    const EnsembleParams p(n, m);
    const FixedTraceMarginal pf(p);
    const LaplaceMarginal oracle(p);
    for (double mu : {0.01, 0.05, 0.1, 0.3, 0.6}) {
      const double want = oracle(mu);
      EXPECT_NEAR(pf(mu), want, 1e-9 * std::max(1.0, want)) << n << "," << m << " mu=" << mu;
    }
  }
}

TEST(MarginalFixedTrace, SmallCaseClosedForm) {
  // n = m = 2: p_F(mu) = 3 (1 - 2 mu)^2.
  const FixedTraceMarginal pf(EnsembleParams(2, 2));
  for (double mu : {0.0, 0.2, 0.5, 0.9}) EXPECT_NEAR(pf(mu), 3 * (1 - 2 * mu) * (1 - 2 * mu), 1e-14);
}

TEST(MarginalFixedTrace, NormalizationAndMean) {
  for (auto [n, m] : {std::pair{8, 8}, {8, 12}, {15, 15}, {25, 75}}) {
    const EnsembleParams p(n, m);
    const FixedTraceMarginal pf(p);
    const double mass = gk([&](double mu) { return pf(mu); }, 0.0, 1.0);
    const double mean = gk([&](double mu) { return mu * pf(mu); }, 0.0, 1.0);
    EXPECT_NEAR(mass, 1.0, 1e-6) << n << "," << m;
    EXPECT_NEAR(mean, 1.0 / n, 1e-8) << n << "," << m;
  }
}

TEST(MarginalFixedTrace, EdgeBehaviour) {
  EXPECT_EQ(FixedTraceMarginal(EnsembleParams(4, 7))(0.0), 0.0);
  EXPECT_THROW(FixedTraceMarginal(EnsembleParams(4, 7)).eval_ext(ExtFloat(1)), DomainError);
  EXPECT_THROW(FixedTraceMarginal(EnsembleParams(4, 7)).eval_ext(ExtFloat(-0.1)), DomainError);
}

TEST(MarginalScaled, NormalizedAndTrendTowardFixedTrace) {
  const EnsembleParams p(6, 9);
  EXPECT_NEAR(gk([&](double mu) { return marginal_scaled(p, mu); }, 0.0, 3.0), 1.0, 1e-6);
  auto l1_gap = [](int n, int m) {
    const EnsembleParams q(n, m);
    const FixedTraceMarginal pf(q);
    return gk([&](double mu) { return std::abs(pf(mu) - marginal_scaled(q, mu)); }, 0.0, 0.999);
  };
  EXPECT_LT(l1_gap(25, 75), l1_gap(15, 15));
}

TEST(MarchenkoPastur, SquaredEdgesNormalize) {
  for (auto [n, m] : {std::pair{15, 15}, {25, 75}, {10, 40}}) {
    const EnsembleParams p(n, m);
    const auto [lo, hi] = mp_edges(p);
    EXPECT_NEAR(gk([&](double mu) { return marginal_mp(p, mu); }, lo, hi), 1.0, 1e-4);
    EXPECT_EQ(marginal_mp(p, hi + 1e-3), 0.0);
    EXPECT_EQ(marginal_mp(p, -1.0), 0.0);
  }
}

TEST(MarchenkoPastur, CloserForLargerEnsemble) {
  auto l1_gap = [](int n, int m) {
    const EnsembleParams q(n, m);
    const FixedTraceMarginal pf(q);
    return gk([&](double mu) { return std::abs(pf(mu) - marginal_mp(q, mu)); }, 0.0, 0.999);
  };
  EXPECT_LT(l1_gap(25, 75), l1_gap(15, 15));
}
