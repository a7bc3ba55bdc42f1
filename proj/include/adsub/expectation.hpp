#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>

#include "adsub/constraint.hpp"
#include "adsub/prior.hpp"
#include "adsub/types.hpp"
#include "adsub/utility.hpp"

namespace adsub {

class Policy;

struct ExactMode {
  // Internal-randomness replicates for randomized policies; each replicate
  // gets an exact outer expectation over realizations.
  std::size_t replicates = 200;
  std::uint64_t seed = 0;
};

struct MonteCarloMode {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

using EvalMode = std::variant<ExactMode, MonteCarloMode>;

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Delta(e | psi) = E[f(dom psi + e, Phi) - f(dom psi, Phi) | Phi ~ psi].
Estimate marginal_utility(const UtilityFunction& f, const Prior& prior, const PartialRealization& psi,
                          ItemId e, const EvalMode& mode = ExactMode{});

// Delta(pi | psi): pi runs from an empty history on Phi ~ p(.|psi) and its
// selections are unioned with dom(psi).
Estimate policy_marginal(const UtilityFunction& f, const Prior& prior, const PartialRealization& psi,
                         const Policy& pi, const EvalMode& mode = ExactMode{},
                         const std::optional<ConstraintState>& constraint = std::nullopt);

// f_avg(pi) = E[f(E(pi, Phi), Phi)].
Estimate expected_utility(const UtilityFunction& f, const Prior& prior, const Policy& pi,
                          const EvalMode& mode = ExactMode{},
                          const std::optional<ConstraintState>& constraint = std::nullopt);

// E[f(dom psi, Phi) | Phi ~ psi], exact.
double conditional_value(const UtilityFunction& f, const ConditionedPrior& posterior);

// Per-replicate exact values of a policy (one entry for deterministic
// policies). Lets callers check each fixed-randomness policy individually.
std::vector<double> exact_replicate_values(const UtilityFunction& f, const Prior& prior, const Policy& pi,
                                           const ExactMode& mode,
                                           const std::optional<ConstraintState>& constraint = std::nullopt);

}  // namespace adsub
