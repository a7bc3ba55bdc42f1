#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "adsub/constraint.hpp"
#include "adsub/prior.hpp"
#include "adsub/random.hpp"
#include "adsub/utility.hpp"

namespace adsub {

struct Instance {
  std::size_t n = 0;
  std::size_t m = 0;
  Prior prior;
  std::shared_ptr<const UtilityFunction> utility;
  ConstraintState constraint = ConstraintState::cardinality(0);
  std::string name;
  std::optional<std::uint64_t> seed;

  // Throws ValidationError naming the violated invariant.
  void validate() const;
};

struct CoverageConfig {
  std::size_t n = 6;
  std::size_t m = 2;
  std::size_t universe = 8;
  double density = 0.3;
  double weight_min = 0.5;
  double weight_max = 2.0;
  std::uint64_t seed = 0;
};

// Weights are rounded to multiples of 1/256 so that coverage values are
// exact sums in double precision.
Instance generate_coverage(const CoverageConfig& config, ConstraintState constraint);

// Splits a random permutation of [0, n) into `groups` nonempty groups (all
// items covered) and distributes `total_limit` across them with each limit
// in [1, |B_i|].
PartitionSpec random_partition(std::size_t n, std::size_t groups, std::size_t total_limit, Rng& rng);

// Two items a=0, b=1, two states, Pr[state 1] = 0.5 each; coverage over
// {u1, u2}: a: {u1} | {u1,u2}, b: {} | {u2}.
Instance instance_a(std::size_t k = 2);

// Single state, f(∅)=f({a})=f({b})=0, f({a,b})=1: not adaptive submodular.
Instance complementarity_instance();

std::string to_json(const Instance& inst);
Instance from_json(const std::string& text);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace adsub
