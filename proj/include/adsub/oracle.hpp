#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adsub/constraint.hpp"
#include "adsub/prior.hpp"
#include "adsub/types.hpp"
#include "adsub/utility.hpp"

namespace adsub {

struct OracleCaps {
  std::size_t max_items = 10;
  std::size_t max_states = 3;
  std::size_t max_budget = 6;
};

struct OracleOptions {
  OracleCaps caps;
  bool memoize = true;
  // Allows stopping before the budget is spent; needed for non-monotone f.
  bool allow_stop = true;
};

struct OracleResult {
  double value = 0.0;
  std::vector<ItemId> optimal_first_actions;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t cache_hits = 0;
};

// Value of the best feasible adaptive policy started from `base`, by
// exhaustive memoized recursion over partial realizations:
//   V(psi) = max(E[f(dom psi)|psi], max_e sum_o Pr[o|psi] V(psi + (e,o))).
// Returns the absolute value V(base).
OracleResult optimal_value(const UtilityFunction& f, const Prior& prior, const ConstraintState& constraint,
                           const PartialRealization& base = {}, const OracleOptions& options = {});

// max over policies choosing at most `budget` items from `allowed` of
// Delta(pi | psi), i.e. V(psi) - E[f(dom psi)|psi] with selection
// restricted to allowed \ dom(psi).
double restricted_optimal(const UtilityFunction& f, const Prior& prior, const PartialRealization& psi,
                          std::span<const ItemId> allowed, std::size_t budget,
                          const OracleOptions& options = {});

}  // namespace adsub
