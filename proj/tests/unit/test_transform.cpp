#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pathqv/error.hpp"
#include "pathqv/transform.hpp"

using namespace pathqv;

TEST(Transform, BuiltinValuesAndDerivatives) {
  const auto sq = Transform::square();
  EXPECT_EQ(sq(3.0), 9.0);
  EXPECT_EQ(sq.d(3.0), 6.0);
  EXPECT_EQ(sq.d2(-1.0), 2.0);
  const auto ab = Transform::abs();
  EXPECT_EQ(ab(-2.0), 2.0);
  EXPECT_EQ(ab.d(0.0), 1.0);
  EXPECT_EQ(ab.d(-0.5), -1.0);
  EXPECT_FALSE(ab.has_second());
  EXPECT_THROW((void)ab.d2(1.0), ConfigError);
  EXPECT_EQ(ab.kinks(), std::vector<double>{0.0});
  const auto re = Transform::relu();
  EXPECT_EQ(re(-1.0), 0.0);
  EXPECT_EQ(re.d(0.0), 1.0);
  const auto af = make_transform("affine", {{"slope", 2.0}, {"intercept", -1.0}});
  EXPECT_EQ(af(3.0), 5.0);
  EXPECT_EQ(af.d(10.0), 2.0);
  EXPECT_EQ(make_transform("exp").d2(0.0), 1.0);
  EXPECT_THROW(make_transform("cube"), ConfigError);
}

TEST(Transform, LipschitzAndFiniteDifferenceSpotChecks) {
  for (const char* name : {"identity", "square", "exp", "abs", "relu", "sin"}) {
    const auto f = make_transform(name);
    for (double r : {1.0, 5.0, 10.0}) {
      const auto c = check_transform(f, r, 2000, 7);
      EXPECT_LE(c.max_lipschitz_ratio, 1.0 + 1e-12) << name << " R=" << r;
      if (f.has_second()) EXPECT_LE(c.max_derivative_error, 1e-3) << name << " R=" << r;
    }
  }
}

TEST(TransformSequence, BuiltinExamples) {
  const auto ma = builtin_sequence("mollified_abs");
  EXPECT_NEAR(ma.at(1000000)(1.0), 1.0 + 5e-7, 1e-12);
  EXPECT_EQ(ma.limit()(-3.0), 3.0);
  const auto pf = builtin_sequence("polynomial_family");
  EXPECT_DOUBLE_EQ(pf.at(4)(2.0), 4.5);
  EXPECT_DOUBLE_EQ(pf.at(4).d(2.0), 4.25);
  EXPECT_EQ(pf.at(TransformSequence::kInfinity)(2.0), 4.0);
  // (x + sqrt(x² + 1/n²))/2 has derivative (1 + x/sqrt(x² + 1/n²))/2 = 1/2 at 0.
  const auto sr = builtin_sequence("shifted_relu_smooth");
  for (int n : {1, 10, 1000}) EXPECT_DOUBLE_EQ(sr.at(n).d(0.0), 0.5);
  EXPECT_EQ(sr.limit().d(0.0), 1.0);
  const auto cs = builtin_sequence("constant_sin");
  EXPECT_EQ(cs.at(3)(0.4), std::sin(0.4));
  EXPECT_THROW(builtin_sequence("mystery"), ConfigError);
}

TEST(TransformSequence, DerivativesConvergeUniformlyOnCompacts) {
  const std::vector<int> ns{1, 2, 4, 8, 16, 32, 64};
  for (double r : {1.0, 5.0, 10.0}) {
    for (const char* name : {"polynomial_family", "constant_exp"}) {
      const auto c = check_sequence(builtin_sequence(name), ns, r);
      EXPECT_TRUE(c.decreasing) << name << " R=" << r;
      EXPECT_LE(c.derivative_sup.back(), c.derivative_sup.front());
    }
    // Limits with kinks: uniform convergence away from the kink.
    for (const char* name : {"mollified_abs", "shifted_relu_smooth"}) {
      // mollified_abs smooths on the scale 1/sqrt(n), so go further out in n.
      const std::vector<int> far{1, 4, 16, 64, 256, 1024, 10000};
      const auto c = check_sequence(builtin_sequence(name), far, r, 0.1);
      EXPECT_TRUE(c.decreasing) << name << " R=" << r;
      EXPECT_LT(c.derivative_sup.back(), 0.05) << name;
      EXPECT_LE(c.anchor_error.back(), c.anchor_error.front());
    }
  }
}

TEST(PolynomialApprox, RecoversPolynomials) {
  const auto p = polynomial_derivative_approx(Transform::square(), 2.0, 3);
  for (double x = -2.0; x <= 2.0; x += 0.125) {
    EXPECT_NEAR(p.transform(x), x * x, 1e-12);
    EXPECT_NEAR(p.transform.d(x), 2.0 * x, 1e-12);
  }
  EXPECT_LE(p.derivative_sup_error, 1e-12);
  EXPECT_EQ(p.transform(-2.0), 4.0);
}

TEST(PolynomialApprox, AbsAgainstAnalyticChebyshevSeries) {
  // Oracle: the continuous Chebyshev projection of sign(x) on [-1, 1] has
  // coefficients 4/(πk)·(-1)^{(k-1)/2} for odd k. Its truncation at degree 50
  // is evaluated directly and integrated with Simpson's rule for values.
  const int degree = 50;
  auto oracle_d = [&](double x) {
    const double th = std::acos(std::clamp(x, -1.0, 1.0));
    double s = 0.0;
    for (int k = 1; k <= degree; k += 2) {
      s += 4.0 / (std::numbers::pi * k) * (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * std::cos(k * th);
    }
    return s;
  };
  const auto approx = polynomial_derivative_approx(Transform::abs(), 1.0, degree);
  EXPECT_EQ(approx.transform(-1.0), 1.0);

  double oracle_sup = 0.0, impl_sup = 0.0, pointwise = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double x = -1.0 + i * 1e-4;
    pointwise = std::max(pointwise, std::abs(approx.transform.d(x) - oracle_d(x)));
    if (std::abs(x) < 0.05) continue;
    const double sgn = x > 0 ? 1.0 : -1.0;
    oracle_sup = std::max(oracle_sup, std::abs(oracle_d(x) - sgn));
    impl_sup = std::max(impl_sup, std::abs(approx.transform.d(x) - sgn));
  }
  // The discrete projection tracks the analytic one up to aliasing.
  EXPECT_LE(pointwise, 1e-2);
  // Gibbs overshoot of an L² projection of a unit-height sign jump: the
  // computed oracle is 0.179, frozen here.
  EXPECT_NEAR(oracle_sup, 0.179, 0.002);
  EXPECT_NEAR(impl_sup, oracle_sup, 0.01);

  double value_err = 0.0, acc = 1.0, prev = oracle_d(-1.0);
  const double h = 1e-4;
  for (int i = 1; i <= 20000; ++i) {
    const double x = -1.0 + i * h;
    const double mid = oracle_d(x - h / 2), cur = oracle_d(x);
    acc += h / 6.0 * (prev + 4.0 * mid + cur);
    prev = cur;
    EXPECT_NEAR(approx.transform(x), acc, 1e-3);
    value_err = std::max(value_err, std::abs(approx.transform(x) - std::abs(x)));
  }
  EXPECT_LE(value_err, 0.02);
}
