#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "pathqv/error.hpp"
#include "pathqv/stats.hpp"

using namespace pathqv;

TEST(Wilson, MatchesReferenceValues) {
  auto ci = wilson_interval(5, 10);
  EXPECT_DOUBLE_EQ(ci.estimate, 0.5);
  EXPECT_NEAR(ci.lo, 0.23659309051256394, 1e-12);
  EXPECT_NEAR(ci.hi, 0.7634069094874361, 1e-12);
  ci = wilson_interval(0, 20);
  EXPECT_EQ(ci.lo, 0.0);
  EXPECT_NEAR(ci.hi, 0.1611251580528194, 1e-12);
  ci = wilson_interval(37, 500);
  EXPECT_NEAR(ci.lo, 0.05416118475101196, 1e-12);
  EXPECT_NEAR(ci.hi, 0.10033475332223056, 1e-12);
  ci = wilson_interval(20, 20);
  EXPECT_EQ(ci.hi, 1.0);
}

TEST(Wilson, ZeroTrialsRejected) { EXPECT_THROW(wilson_interval(0, 0), DomainError); }

TEST(Wilson, IntervalContainsEstimateAndStaysInUnitInterval) {
  for (std::size_t n : {1u, 2u, 7u, 100u, 501u}) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto ci = wilson_interval(k, n);
      ASSERT_LE(0.0, ci.lo);
      ASSERT_LE(ci.lo, ci.estimate);
      ASSERT_LE(ci.estimate, ci.hi);
      ASSERT_LE(ci.hi, 1.0);
    }
  }
}

TEST(Quantile, TypeSevenReference) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 0.9), 9.1);
  EXPECT_DOUBLE_EQ(quantile({3.5, 1, 2, 8}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(quantile({4.0}, 0.3), 4.0);
}

TEST(Mean, CompensatedAndHalfWidth) {
  EXPECT_DOUBLE_EQ(mean({1, 2, 3, 4}), 2.5);
  EXPECT_DOUBLE_EQ(mean_half_width({2, 2, 2}), 0.0);
}

TEST(ParallelFor, ResultsIndependentOfWorkerCount) {
  std::vector<double> a(1000), b(1000);
  setenv("QV_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1u);
  parallel_for(a.size(), [&](std::size_t i) { a[i] = static_cast<double>(i * i) / 7.0; });
  setenv("QV_THREADS", "4", 1);
  EXPECT_EQ(worker_count(), 4u);
  parallel_for(b.size(), [&](std::size_t i) { b[i] = static_cast<double>(i * i) / 7.0; });
  unsetenv("QV_THREADS");
  EXPECT_EQ(a, b);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  setenv("QV_THREADS", "3", 1);
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  unsetenv("QV_THREADS");
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsWorkerException) {
  setenv("QV_THREADS", "2", 1);
  EXPECT_THROW(parallel_for(10,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  unsetenv("QV_THREADS");
}
