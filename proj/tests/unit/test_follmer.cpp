#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "pathqv/config.hpp"
#include "pathqv/error.hpp"
#include "pathqv/follmer.hpp"
#include "pathqv/models.hpp"
#include "pathqv/qv.hpp"
#include "pathqv/stats.hpp"

using namespace pathqv;

namespace {
const RefiningSequence kDyadic = RefiningSequence::dyadic(1.0);
}

TEST(FoellmerIntegral, ConstantIntegrandTelescopes) {
  gen::for_all(200, 71, [](gen::Rng& r, std::size_t) {
    const auto x = gen::path(r);
    const auto one = CadlagPath::constant(1.0, 1.0);
    const int k = gen::integer(r, 0, 12);
    const double s = gen::uniform(r, 0.01, 1.0);
    ASSERT_NEAR(foellmer_integral(one, x, kDyadic, k, s), x.eval(s) - x.eval(0.0), 1e-12);
  });
}

TEST(FoellmerIntegral, SelfIntegralIdentityOnBrownian) {
  const auto bm = preset_model("brownian");
  for (std::uint32_t r = 0; r < 10; ++r) {
    const auto x = sample_path(bm, {31, r}, 16).path;
    const double lhs = foellmer_integral(x, x, kDyadic, 16);
    const double x1 = x.eval(1.0), x0 = x.eval(0.0);
    const double rhs = (x1 * x1 - x0 * x0) / 2.0 - partial_qv(x, kDyadic, 16) / 2.0;
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(FoellmerIntegral, LeftPointRuleAtCoincidentJump) {
  // Hand evaluation: Y_{t_i} = 0 on every cell up to the jump at 0.5, and X is
  // constant afterwards, so every term vanishes.
  const auto y = CadlagPath::step(1.0, {{0.5, 1.0, false}});
  const auto x = CadlagPath::step(1.0, {{0.5, 2.0, false}});
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(foellmer_integral(y, x, kDyadic, k), 0.0);
  EXPECT_THROW((void)foellmer_integral(y, CadlagPath::zero(2.0), kDyadic, 1), ConfigError);
}

TEST(IntegrationByParts, ExactAtEveryLevel) {
  gen::for_all(1000, 73, [](gen::Rng& r, std::size_t) {
    const auto x = gen::path(r);
    const auto y = gen::path(r);
    const double scale = 1.0 + std::abs(x.eval(1.0) * y.eval(1.0));
    for (int k : {0, 3, 7, 10}) {
      ASSERT_LE(integration_by_parts_residual(x, y, kDyadic, k), 1e-12 * scale) << "k=" << k;
    }
    ASSERT_LE(integration_by_parts_residual(x, x, kDyadic, 8), 1e-12 * scale);
  });
}

TEST(IntegrationByParts, JumpDiffusionPairs) {
  const auto jd = preset_model("jump_diffusion");
  double worst = 0.0;
  for (std::uint32_t r = 0; r < 200; ++r) {
    const auto x = sample_path(jd, {41, r}, 10).path;
    const auto y = sample_path(jd, {42, r}, 10).path;
    worst = std::max(worst, integration_by_parts_residual(x, y, kDyadic, 10));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(IntegralTrace, JumpChecksExactOnJumpAdaptedPartitions) {
  gen::for_all(100, 79, [](gen::Rng& r, std::size_t) {
    const auto y = gen::path(r, 1.0, 0, 4);
    const auto x = gen::path(r, 1.0, 0, 4).continuous_component().with_jumps(
        {{gen::uniform(r, 0.1, 0.9), 1.5, false}});
    // Piecewise-constant integrand: the covering increment equals Y_{s-}ΔX.
    const auto yc = CadlagPath::step(1.0, y.jumps(), y.eval(0.0));
    auto times = merge_times(x.jump_times(), yc.jump_times());
    const auto seq = RefiningSequence::jump_adapted(1.0, times);
    const auto tr = integral_trace(yc, x.jump_component(), seq, 6);
    ASSERT_EQ(tr.jump_checks.size(), 1u);
    ASSERT_NEAR(tr.jump_checks[0].error, 0.0, 1e-14);
  });
  std::ostringstream os;
  write_integral_trace_csv(os, integral_trace(CadlagPath::constant(1.0, 2.0),
                                              CadlagPath::linear(1.0, 0.0, 1.0), kDyadic, 1));
  EXPECT_EQ(os.str(), "s,I_k\n0,0\n0.5,1\n1,2\n\njump_time,increment,target,jump_check\n");
}

TEST(IntegralPath, JumpsCarryLeftLimitTimesJump) {
  const auto y = CadlagPath::linear(1.0, 1.0, 3.0);
  const auto x = CadlagPath::linear(1.0, 0.0, 1.0).with_jumps({{0.25, 2.0, false}});
  const auto ip = integral_path(y, x, kDyadic, 4);
  ASSERT_EQ(ip.jumps().size(), 1u);
  EXPECT_DOUBLE_EQ(ip.jumps()[0].size, 1.5 * 2.0);
}

TEST(ItoFormula, LinearTransformIsExact) {
  gen::for_all(200, 83, [](gen::Rng& r, std::size_t) {
    const auto x = gen::path(r);
    for (int k : {0, 4, 9}) ASSERT_LE(ito_formula_residual(Transform::identity(), x, kDyadic, k), 1e-12);
  });
}

TEST(ItoFormula, SquareOnPureJumpPathsIsExact) {
  const auto cp = preset_model("compound_poisson");
  for (std::uint32_t r = 0; r < 200; ++r) {
    const auto x = sample_path(cp, {47, r}, 4).path;
    const auto seq = RefiningSequence::jump_adapted(1.0, x.jump_times());
    for (int k : {2, 6, 10}) {
      ASSERT_LE(ito_formula_residual(Transform::square(), x, seq, k), 1e-12) << r << " k=" << k;
    }
  }
}

TEST(ItoFormula, MissingSecondDerivativeRejected) {
  EXPECT_THROW((void)ito_formula_residual(Transform::abs(), CadlagPath::zero(1.0), kDyadic, 3),
               ConfigError);
}

TEST(ItoFormula, ExpOnBrownianWithDriftConverges) {
  // Oracle: the same discrete Itô expansion with the exact Brownian
  // quadratic variation d[X]^c = dt in place of the partial sums.
  const auto model = preset_model("brownian_drift");
  const auto f = Transform::exp();
  const std::size_t seeds = 200;
  const std::vector<int> levels{10, 12, 14, 16};
  std::vector<std::vector<double>> res(levels.size());
  std::size_t ok = 0, oracle_ok = 0;
  for (std::size_t r = 0; r < seeds; ++r) {
    const auto x = sample_path(model, {53, static_cast<std::uint32_t>(r)}, 16).path;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      res[i].push_back(ito_formula_residual(f, x, kDyadic, levels[i]));
    }
    const auto pts = kDyadic.level(16);
    const auto v = x.eval_sorted(pts);
    long double acc = std::exp(v.back()) - std::exp(v.front());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      acc -= std::exp(v[i]) * (v[i + 1] - v[i]) + 0.5 * std::exp(v[i]) * (pts[i + 1] - pts[i]);
    }
    const double oracle = std::abs(static_cast<double>(acc));
    if (res.back().back() <= 0.02) ++ok;
    if (oracle <= 0.02) ++oracle_ok;
    EXPECT_NEAR(res.back().back(), oracle, 0.05);
  }
  EXPECT_GE(ok, seeds * 9 / 10);
  EXPECT_GE(oracle_ok, seeds * 9 / 10);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    EXPECT_LT(median(res[i]), median(res[i - 1])) << "k=" << levels[i];
  }
}

TEST(TransformQv, ExactCases) {
  const auto cp = preset_model("compound_poisson");
  for (std::uint32_t r = 0; r < 100; ++r) {
    const auto x = sample_path(cp, {59, r}, 4).path;
    const auto seq = RefiningSequence::jump_adapted(1.0, x.jump_times());
    const auto c = transform_qv_check(Transform::abs(), x, seq, 8);
    double expect = 0.0;
    for (const auto& j : x.jumps()) {
      const double d = std::abs(x.eval(j.time)) - std::abs(x.left_limit(j.time));
      expect += d * d;
    }
    ASSERT_NEAR(c.rhs, expect, 1e-12);
    ASSERT_NEAR(c.lhs, c.rhs, 1e-12);
  }
  gen::for_all(50, 61, [](gen::Rng& r, std::size_t) {
    const auto x = gen::path(r);
    const auto c = transform_qv_check(Transform::identity(), x, kDyadic, 8);
    ASSERT_NEAR(c.lhs, partial_qv(x, kDyadic, 8), 1e-12);
    ASSERT_NEAR(c.rhs, c.lhs, 1e-12);
  });
}

TEST(TransformQv, AbsOnBrownian) {
  const auto bm = preset_model("brownian");
  const std::size_t seeds = 200;
  std::size_t ok = 0;
  for (std::size_t r = 0; r < seeds; ++r) {
    const auto x = sample_path(bm, {67, static_cast<std::uint32_t>(r)}, 16).path;
    const auto c = transform_qv_check(Transform::abs(), x, kDyadic, 16);
    if (std::abs(c.lhs - c.rhs) <= 0.05) ++ok;
  }
  EXPECT_GE(ok, seeds * 9 / 10);
  // Oracle: lhs at k = 20 on the same path.
  for (std::uint32_t r = 0; r < 10; ++r) {
    const auto x = sample_path(bm, {68, r}, 20).path;
    const auto c16 = transform_qv_check(Transform::abs(), x, kDyadic, 16);
    const auto c20 = transform_qv_check(Transform::abs(), x, kDyadic, 20);
    EXPECT_NEAR(c16.rhs, c20.lhs, 0.05);
  }
}

TEST(TransformPath, Examples) {
  gen::for_all(50, 89, [](gen::Rng& r, std::size_t) {
    const auto x = gen::path(r);
    ASSERT_EQ(max_abs_difference(transform_path(Transform::identity(), x), x), 0.0);
  });
  const auto sq = transform_path(Transform::square(), CadlagPath::step(1.0, {{0.5, 2.0, false}}));
  ASSERT_EQ(sq.jumps().size(), 1u);
  EXPECT_EQ(sq.jumps()[0].size, 4.0);
}

TEST(TransformPath, KinksSurviveAgainstDenseReevaluation) {
  gen::for_all(100, 97, [](gen::Rng& r, std::size_t) {
    const auto x = gen::path(r);
    for (const auto& f : {Transform::abs(), Transform::relu(), Transform::square(), Transform::exp()}) {
      const auto fx = transform_path(f, x);
      for (int i = 0; i <= 4000; ++i) {
        const double s = i / 4000.0;
        const double v = f(x.eval(s));
        ASSERT_NEAR(fx.eval(s), v, 1e-6 * std::max(1.0, std::abs(v))) << f.name() << " s=" << s;
      }
      for (const auto& j : x.jumps()) {
        ASSERT_NEAR(fx.jump_at(j.time), f(x.eval(j.time)) - f(x.left_limit(j.time)), 1e-12);
      }
    }
  });
}
