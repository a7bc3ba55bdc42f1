#include <gtest/gtest.h>

#include <cmath>

#include "adsub/error.hpp"
#include "adsub/expectation.hpp"
#include "adsub/instance.hpp"
#include "adsub/oracle.hpp"
#include "adsub/policy.hpp"
#include "support.hpp"

namespace adsub {
namespace {

Observation obs(std::size_t e, std::size_t o) { return {ItemId{e}, StateId{o}}; }
const ItemId a{0}, b{1};

TEST(Oracle, InstanceAValues) {
  const Instance inst = instance_a();
  const auto& f = *inst.utility;
  EXPECT_DOUBLE_EQ(optimal_value(f, inst.prior, ConstraintState::cardinality(2)).value, 1.75);
  const auto one = optimal_value(f, inst.prior, ConstraintState::cardinality(1));
  EXPECT_DOUBLE_EQ(one.value, 1.5);
  EXPECT_EQ(one.optimal_first_actions, (std::vector<ItemId>{a}));
  EXPECT_GE(one.nodes_expanded, 1u);
  EXPECT_EQ(optimal_value(f, inst.prior, ConstraintState::cardinality(0)).value, 0.0);
  EXPECT_DOUBLE_EQ(optimal_value(f, inst.prior, ConstraintState::cardinality(0), {obs(0, 1)}).value, 2.0);
}

TEST(Oracle, RestrictedExamples) {
  const Instance inst = instance_a();
  const auto& f = *inst.utility;
  const std::vector<ItemId> both{a, b}, only_b{b};
  EXPECT_DOUBLE_EQ(restricted_optimal(f, inst.prior, {}, both, 2), 1.75);
  EXPECT_EQ(restricted_optimal(f, inst.prior, {obs(0, 1)}, only_b, 1), 0.0);
  EXPECT_DOUBLE_EQ(restricted_optimal(f, inst.prior, {obs(0, 0)}, only_b, 1), 0.5);
}

TEST(Oracle, SingletonRestrictionIsClippedMarginal) {
  const Prior p = Prior::explicit_support({{Realization{0}, 1.0}}, 1);
  const TabularUtility dec({Realization{0}}, 1, {{1.0}, {0.0}});
  const std::vector<ItemId> only_a{a};
  EXPECT_DOUBLE_EQ(marginal_utility(dec, p, {}, a).value, -1.0);
  EXPECT_EQ(restricted_optimal(dec, p, {}, only_a, 1), 0.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance inst = testing::small_coverage(seed, 5, 2);
    for (std::size_t e = 0; e < 5; ++e) {
      const std::vector<ItemId> v{ItemId{e}};
      EXPECT_NEAR(restricted_optimal(*inst.utility, inst.prior, {}, v, 1),
                  std::max(0.0, marginal_utility(*inst.utility, inst.prior, {}, ItemId{e}).value), 1e-12);
    }
  }
}

TEST(Oracle, MatchesUnmemoizedBruteForce) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Instance inst = seed % 2 ? testing::small_coverage(seed, 5, 2 + seed % 2, 2 + seed % 3 / 2)
                                   : testing::small_partition(seed, 6, 2, 3);
    const testing::BruteOracle brute(*inst.utility, inst.prior);
    EXPECT_NEAR(optimal_value(*inst.utility, inst.prior, inst.constraint).value, brute.value({}, inst.constraint), 1e-12);
  }
  const Instance c = complementarity_instance();
  const testing::BruteOracle brute(*c.utility, c.prior);
  EXPECT_DOUBLE_EQ(optimal_value(*c.utility, c.prior, ConstraintState::cardinality(1)).value, 0.0);
  EXPECT_DOUBLE_EQ(optimal_value(*c.utility, c.prior, ConstraintState::cardinality(2)).value, 1.0);
  EXPECT_DOUBLE_EQ(brute.value({}, ConstraintState::cardinality(2)), 1.0);
}

TEST(Oracle, MemoizationSoundness) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = testing::small_coverage(seed, 6, 2 + seed % 3);
    OracleOptions off;
    off.memoize = false;
    const auto with = optimal_value(*inst.utility, inst.prior, inst.constraint);
    const auto without = optimal_value(*inst.utility, inst.prior, inst.constraint, {}, off);
    EXPECT_EQ(with.value, without.value);
    EXPECT_EQ(with.optimal_first_actions, without.optimal_first_actions);
    EXPECT_GT(with.cache_hits, 0u);
    EXPECT_EQ(without.cache_hits, 0u);
  }
}

TEST(Oracle, StopBranchNeutralOnMonotone) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = testing::small_coverage(seed, 6, 3);
    OracleOptions no_stop;
    no_stop.allow_stop = false;
    EXPECT_NEAR(optimal_value(*inst.utility, inst.prior, inst.constraint).value,
                optimal_value(*inst.utility, inst.prior, inst.constraint, {}, no_stop).value, 1e-12);
  }
}

TEST(Oracle, RestrictedConsistentWithOptimal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = testing::small_coverage(seed, 6, 3);
    std::vector<ItemId> all;
    for (std::size_t e = 0; e < 6; ++e) all.emplace_back(e);
    const double restricted = restricted_optimal(*inst.utility, inst.prior, {}, all, 3);
    const double expected_empty = conditional_value(*inst.utility, condition(inst.prior, {}));
    EXPECT_NEAR(restricted, optimal_value(*inst.utility, inst.prior, inst.constraint).value - expected_empty, 1e-9);
  }
}

TEST(Oracle, DominatesEveryPolicy) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = testing::small_partition(seed, 7, 2 + seed % 2, 4);
    const auto& f = *inst.utility;
    const double opt = optimal_value(f, inst.prior, inst.constraint).value;
    const auto& spec = inst.constraint.partition_spec();
    std::vector<std::size_t> order(spec.groups.size());
    std::iota(order.begin(), order.end(), 0);
    for (const auto& pi : {locally_greedy(spec, order), generalized_asg(spec, order, 0.1)})
      for (double v : exact_replicate_values(f, inst.prior, *pi, ExactMode{20, seed}, inst.constraint))
        EXPECT_LE(v, opt + 1e-9);
    const double card_opt = optimal_value(f, inst.prior, ConstraintState::cardinality(3)).value;
    for (const auto& pi : {adaptive_greedy(3), adaptive_stochastic_greedy(3, 0.3), random_policy(3)})
      for (double v : exact_replicate_values(f, inst.prior, *pi, ExactMode{20, seed}, ConstraintState::cardinality(3)))
        EXPECT_LE(v, card_opt + 1e-9);
  }
}

TEST(Oracle, CapsFailLoudly) {
  const Instance big = testing::small_coverage(0, 11, 2);
  EXPECT_THROW(optimal_value(*big.utility, big.prior, big.constraint), InstanceTooLarge);
  const Instance deep = testing::small_coverage(0, 8, 7);
  EXPECT_THROW(optimal_value(*deep.utility, deep.prior, deep.constraint), InstanceTooLarge);
  const Instance wide = testing::small_coverage(0, 4, 2, 4);
  EXPECT_THROW(optimal_value(*wide.utility, wide.prior, wide.constraint), InstanceTooLarge);
}

}  // namespace
}  // namespace adsub
