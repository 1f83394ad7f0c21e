#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "pathqv/config.hpp"
#include "pathqv/error.hpp"
#include "pathqv/jumps.hpp"
#include "pathqv/qv.hpp"

using namespace pathqv;

TEST(TruncatePlain, KeepsLargeJumpsOnly) {
  gen::for_all(300, 101, [](gen::Rng& r, std::size_t) {
    const auto x = gen::path(r);
    const double a = gen::uniform(r, 0.05, 1.5);
    const auto t = truncate_plain(x, a);
    ASSERT_EQ(t.cont_values(), x.cont_values());
    std::size_t kept = 0;
    double running = 0.0, sup = 0.0;
    for (const auto& j : x.jumps()) {
      if (std::abs(j.size) >= a) {
        ++kept;
        ASSERT_EQ(t.jump_at(j.time), j.size);
      } else {
        ASSERT_EQ(t.jump_at(j.time), 0.0);
        running += j.size;
        sup = std::max(sup, std::abs(running));
      }
    }
    ASSERT_EQ(t.jumps().size(), kept);
    ASSERT_NEAR((t - x).sup_process(), sup, 1e-12);
  });
  EXPECT_THROW((void)truncate_plain(CadlagPath::zero(1.0), 0.0), DomainError);
}

TEST(TruncatePlain, PoissonScaleAtUnitLevelErasesEveryJump) {
  const auto ce = counterexample("poisson_scale");
  ASSERT_TRUE(ce.sequence.has_value());
  for (std::uint32_t r = 0; r < 100; ++r) {
    for (int n : {1, 2, 8, 64}) {
      const auto [xn, x] = sample_coupled(*ce.sequence, n, {103, r}, 0);
      ASSERT_EQ(max_abs_difference(truncate_plain(xn.path, 1.0), CadlagPath::zero(1.0)), 0.0);
      ASSERT_EQ(max_abs_difference(truncate_plain(x.path, 1.0), x.path), 0.0);
    }
  }
}

TEST(TruncateCompensated, AddsTheSmallJumpCompensator) {
  // λ = 2, U(0, 1): s·λ E[J 1{J < a}] = s·a².
  ProcessModel m;
  m.sigma = 0.3;
  m.compound_poisson = {{2.0, JumpLaw::uniform(0.0, 1.0)}};
  for (std::uint32_t r = 0; r < 100; ++r) {
    const auto x = sample_path(m, {107, r}, 8);
    for (double a : {0.1, 0.5, 0.9}) {
      const auto t = truncate_compensated(x, &m, a);
      for (int i = 0; i <= 64; ++i) {
        const double s = i / 64.0;
        double small = 0.0;
        for (const auto& j : x.path.jumps()) {
          if (j.time <= s && std::abs(j.size) < a) small += j.size;
        }
        ASSERT_NEAR(t.eval(s), x.path.eval(s) - small + a * a * s, 1e-12);
      }
    }
  }
  const auto x = sample_path(m, {1, 0}, 4);
  EXPECT_THROW((void)truncate_compensated(x, nullptr, 0.5), UnsupportedModelError);
  EXPECT_THROW((void)truncate_compensated(x, &m, 1.0), DomainError);
  auto custom = m;
  custom.compound_poisson[0].law = JumpLaw::custom("c", [](RngStream& g) { return g.uniform(); });
  EXPECT_THROW((void)truncate_compensated(x, &custom, 0.5), UnsupportedModelError);
}

TEST(TruncationReport, DistancesOnJumpAdaptedPartition) {
  const auto m = preset_model("compound_poisson");
  const std::vector<double> as{0.8, 0.4, 0.1};
  for (std::uint32_t r = 0; r < 100; ++r) {
    const auto x = sample_path(m, {109, r}, 0);
    const auto seq = RefiningSequence::jump_adapted(1.0, x.path.jumps().empty()
                                                              ? std::vector<double>{}
                                                              : x.path.jump_times());
    const auto rep = truncation_report(x, &m, as, TruncationMode::Plain, seq, 3);
    ASSERT_EQ(rep.sup_dist.size(), as.size());
    for (std::size_t i = 0; i < as.size(); ++i) {
      double sq = 0.0;
      for (const auto& j : x.path.jumps()) {
        if (std::abs(j.size) < as[i]) sq += j.size * j.size;
      }
      ASSERT_NEAR(rep.qv_dist[i], sq, 1e-12);
      if (i > 0) ASSERT_LE(rep.qv_dist[i], rep.qv_dist[i - 1] + 1e-15);
    }
  }
  TruncationReport rep{TruncationMode::Compensated, {0.5}, {0.25}, {0.125}};
  std::ostringstream os;
  write_truncation_report_csv(os, rep);
  EXPECT_EQ(os.str(), "mode,a,sup_dist,qv_dist\ncompensated,0.5,0.25,0.125\n");
}

TEST(TroubleSet, AtomsAreHitAndContinuousLawsAreNot) {
  ProcessModel poisson = preset_model("poisson");
  const auto est = trouble_set_probe(poisson, {1.0, 0.5}, 2000, 113);
  ASSERT_EQ(est.size(), 2u);
  // P(N_1 >= 1) = 1 - e^{-1}.
  const double p = 1.0 - std::exp(-1.0);
  EXPECT_LE(est[0].probability.lo, p);
  EXPECT_GE(est[0].probability.hi, p);
  EXPECT_EQ(est[1].hits, 0u);
  const auto cont = trouble_set_probe(preset_model("compound_poisson"), {0.5, 0.25}, 500, 113);
  for (const auto& e : cont) EXPECT_EQ(e.hits, 0u);
  // Replica-level oracle from the jump counts.
  std::size_t hits = 0;
  for (std::uint32_t r = 0; r < 2000; ++r) {
    hits += sample_path(poisson, {113, r}, 0).path.has_jumps();
  }
  EXPECT_EQ(est[0].hits, hits);
}

TEST(SmallJumps, StatisticExamples) {
  const auto x = CadlagPath::step(1.0, {{0.2, 0.3, false}, {0.4, -0.5, false}, {0.6, 2.0, false},
                                        {0.8, -0.4, false}});
  EXPECT_DOUBLE_EQ(small_jump_statistic(x, 0.5, VMode::V2), 1.2);
  // Running sums of the small jumps: 0.3, -0.2, -0.6.
  EXPECT_DOUBLE_EQ(small_jump_statistic(x, 0.5, VMode::V1), 0.6);
  EXPECT_DOUBLE_EQ(small_jump_statistic(x, 0.1, VMode::V2), 0.0);
  EXPECT_DOUBLE_EQ(small_jump_statistic(x, 3.0, VMode::V2), 3.2);
}

TEST(SmallJumps, ProbeMatchesCountOracle) {
  const auto seq = *counterexample("poisson_scale").sequence;
  const std::vector<double> as{1.0, 0.5};
  const std::vector<int> ns{2, 4, 16};
  const double c = 0.5;
  const std::size_t reps = 400;
  const auto cells = v_condition_probe(seq, VMode::V2, as, ns, c, reps, 127);
  ASSERT_EQ(cells.size(), 6u);
  std::vector<std::size_t> counts(reps);
  for (std::uint32_t r = 0; r < reps; ++r) {
    counts[r] = sample_path(seq.base, {127, r}, 0).path.jumps().size();
  }
  for (std::size_t i = 0; i < as.size(); ++i) {
    for (std::size_t j = 0; j < ns.size(); ++j) {
      const double size = 1.0 - 1.0 / ns[j];
      std::size_t hits = 0;
      for (auto k : counts) hits += size <= as[i] && k * size >= c;
      const auto& cell = cells[i * ns.size() + j];
      EXPECT_EQ(cell.a, as[i]);
      EXPECT_EQ(cell.n, ns[j]);
      EXPECT_DOUBLE_EQ(cell.probability.estimate, static_cast<double>(hits) / reps) << "a=" << as[i] << " n=" << ns[j];
    }
  }
  // a = 1 keeps every scaled jump: the probability stays at P(N >= 1).
  EXPECT_GT(cells[2].probability.estimate, 0.5);
}

TEST(Counterexamples, OscillatorValues) {
  const auto ce = counterexample("oscillator");
  const auto seq = RefiningSequence::dyadic(1.0);
  for (int n = 1; n <= 12; ++n) {
    const auto x = ce.path_at(n);
    const int k = ce.natural_level(n);
    EXPECT_EQ(k, n + 1);
    EXPECT_DOUBLE_EQ(partial_qv(x, seq, k), 1.0 - std::ldexp(1.0, -(n + 1)));
    EXPECT_DOUBLE_EQ(x.sup_process(), std::pow(2.0, -(n + 1) / 2.0));
  }
  EXPECT_DOUBLE_EQ(partial_qv(ce.path_at(5), seq, 6), 0.984375);
  EXPECT_THROW((void)ce.path_at(21), DomainError);
}

TEST(Counterexamples, LayeredAndUnknown) {
  const auto ce = counterexample("layered_poisson", 5);
  ASSERT_EQ(ce.sequence->base.compound_poisson.size(), 5u);
  EXPECT_EQ(ce.sequence->base.compound_poisson[2].law.p0(), 1.0 / 9.0);
  EXPECT_EQ(counterexample("layered_poisson").sequence->base.compound_poisson.size(),
            static_cast<std::size_t>(kDefaultLayers));
  EXPECT_THROW((void)counterexample("layered_poisson", 0), ConfigError);
  EXPECT_THROW((void)counterexample("nope"), ConfigError);
}
