#include <gtest/gtest.h>

#include <cmath>

#include "adsub/error.hpp"
#include "adsub/expectation.hpp"
#include "adsub/instance.hpp"
#include "adsub/oracle.hpp"
#include "adsub/verify.hpp"
#include "support.hpp"

namespace adsub {
namespace {

Observation obs(std::size_t e, std::size_t o) { return {ItemId{e}, StateId{o}}; }

// f(∅)=1, f({a})=0 on a single realization.
struct Decreasing {
  Prior prior = Prior::explicit_support({{Realization{0}, 1.0}}, 1);
  TabularUtility f{{Realization{0}}, 1, {{1.0}, {0.0}}};
};

TEST(Monotone, CoveragePasses) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance inst = testing::small_coverage(seed, 6, 2);
    const auto r = check_adaptive_monotone(*inst.utility, inst.prior);
    EXPECT_TRUE(r.passed);
    EXPECT_FALSE(r.counterexample);
  }
}

TEST(Monotone, DecreasingTableFails) {
  Decreasing d;
  const auto r = check_adaptive_monotone(d.f, d.prior);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample);
  EXPECT_TRUE(r.counterexample->psi.empty());
  EXPECT_EQ(r.counterexample->item, ItemId{0});
  EXPECT_DOUBLE_EQ(r.counterexample->lhs, -1.0);
  EXPECT_EQ(r.pairs_checked, 1u);
}

TEST(Submodular, InstanceAPassesAndReflexivePairsNeverFail) {
  const Instance inst = instance_a();
  const auto r = check_adaptive_submodular(*inst.utility, inst.prior);
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.pairs_checked, 0u);
}

TEST(Submodular, ComplementarityFailsWithWitness) {
  const Instance c = complementarity_instance();
  const auto r = check_adaptive_submodular(*c.utility, c.prior);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample);
  const Witness& w = *r.counterexample;
  EXPECT_TRUE(w.psi.empty());
  EXPECT_EQ(w.psi_prime, (PartialRealization{obs(0, 0)}));
  EXPECT_EQ(w.item, ItemId{1});
  EXPECT_DOUBLE_EQ(w.lhs, 0.0);
  EXPECT_DOUBLE_EQ(w.rhs, 1.0);
  // Re-evaluate both sides from scratch.
  EXPECT_DOUBLE_EQ(testing::brute_delta(*c.utility, c.prior, w.psi, *w.item), w.lhs);
  EXPECT_DOUBLE_EQ(testing::brute_delta(*c.utility, c.prior, w.psi_prime, *w.item), w.rhs);
  EXPECT_GT(w.rhs - w.lhs, kCheckTolerance);
  const std::string json = r.to_json();
  EXPECT_NE(json.find("psi_prime"), std::string::npos);
  EXPECT_EQ(json, check_adaptive_submodular(*c.utility, c.prior).to_json());
}

TEST(FullyAdaptive, InstanceAPasses) {
  const Instance inst = instance_a();
  const auto r = check_fully_adaptive_submodular(*inst.utility, inst.prior);
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.pairs_checked, 0u);
}

TEST(FullyAdaptive, ComplementarityFailsOnSingleton) {
  const Instance c = complementarity_instance();
  const auto r = check_fully_adaptive_submodular(*c.utility, c.prior);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample);
  const Witness& w = *r.counterexample;
  ASSERT_EQ(w.allowed.size(), 1u);
  EXPECT_EQ(w.budget, 1u);
  EXPECT_EQ(w.item, w.allowed[0]);
  EXPECT_DOUBLE_EQ(restricted_optimal(*c.utility, c.prior, w.psi, w.allowed, w.budget), w.lhs);
  EXPECT_DOUBLE_EQ(restricted_optimal(*c.utility, c.prior, w.psi_prime, w.allowed, w.budget), w.rhs);
}

TEST(FullyAdaptive, HierarchyOnGeneratedInstances) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Instance inst = testing::small_coverage(seed, 4, 2);
    const auto full = check_fully_adaptive_submodular(*inst.utility, inst.prior);
    if (full.passed) EXPECT_TRUE(check_adaptive_submodular(*inst.utility, inst.prior).passed);
  }
}

TEST(Checks, CapsRaiseInstanceTooLarge) {
  const Instance nine = testing::small_coverage(0, 9, 2);
  EXPECT_THROW(check_adaptive_monotone(*nine.utility, nine.prior), InstanceTooLarge);
  EXPECT_THROW(check_adaptive_submodular(*nine.utility, nine.prior), InstanceTooLarge);
  const Instance six = testing::small_coverage(0, 6, 2);
  EXPECT_THROW(check_fully_adaptive_submodular(*six.utility, six.prior), InstanceTooLarge);
}

TEST(Checks, SingleItemChecksOnlyEmptyHistory) {
  const Prior p = Prior::independent({{0.5, 0.5}});
  const CoverageUtility f({1.0}, {{{0}, {}}});
  const auto r = check_adaptive_monotone(f, p);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.pairs_checked, 1u);
}

TEST(PositivePartialRealizations, SkipsZeroProbability) {
  const Prior p = Prior::independent({{1.0, 0.0}, {0.5, 0.5}});
  // item 0: unobserved or state 0; item 1: unobserved, 0 or 1.
  EXPECT_EQ(positive_partial_realizations(p).size(), 6u);
}

// 1 - C(n-k, s)/C(n, s) via log-gamma.
double lgamma_hit(std::size_t n, std::size_t k, std::size_t s) {
  if (s > n - k) return 1.0;
  auto lc = [](double x, double y) { return std::lgamma(x + 1) - std::lgamma(y + 1) - std::lgamma(x - y + 1); };
  return 1.0 - std::exp(lc(double(n - k), double(s)) - lc(double(n), double(s)));
}

TEST(Lemma1, ExactMatchesLogGammaOracle) {
  for (std::size_t n : {50, 100, 200})
    for (std::size_t k : {5, 10, 20})
      for (double eps : {0.3, 0.1, 0.05}) {
        const auto r = lemma1_check(n, k, eps, 10, 1);
        EXPECT_NEAR(r.exact, lgamma_hit(n, k, r.sample_size), 1e-10);
        EXPECT_GE(r.exact, r.with_replacement - 1e-15);
        EXPECT_GE(r.with_replacement, r.bound - 1e-15);
      }
}

TEST(Lemma1, Examples) {
  const auto r = lemma1_check(100, 10, 0.05, 1000, 3);
  EXPECT_EQ(r.sample_size, 30u);
  EXPECT_GE(r.exact, 0.95);
  EXPECT_EQ(lemma1_check(10, 10, 0.5, 100, 0).exact, 1.0);
  const auto single = lemma1_check(20, 3, 0.999, 20000, 4);
  EXPECT_EQ(single.sample_size, 1u);
  EXPECT_DOUBLE_EQ(single.exact, 3.0 / 20.0);
  EXPECT_LE(std::abs(single.empirical - single.exact), 4 * single.std_error);
  EXPECT_THROW(lemma1_check(10, 0, 0.1, 10, 0), std::invalid_argument);
  EXPECT_THROW(lemma1_check(10, 2, 1.0, 10, 0), std::invalid_argument);
}

}  // namespace
}  // namespace adsub
