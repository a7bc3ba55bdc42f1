#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adsub/prior.hpp"
#include "adsub/types.hpp"
#include "adsub/utility.hpp"

namespace adsub {

inline constexpr double kCheckTolerance = 1e-9;

struct CheckCaps {
  std::size_t max_items = 8;
  std::size_t max_states = 3;
};

inline constexpr CheckCaps kFullyAdaptiveCaps{5, 2};

// Violation of lhs >= rhs (within tolerance). For monotonicity rhs is 0 and
// psi_prime is unused; for the fully adaptive check `allowed`/`budget`
// describe Omega(V, a).
struct Witness {
  PartialRealization psi;
  PartialRealization psi_prime;
  std::optional<ItemId> item;
  std::vector<ItemId> allowed;
  std::size_t budget = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct CheckReport {
  std::string check;
  bool passed = true;
  std::optional<Witness> counterexample;
  std::uint64_t pairs_checked = 0;

  std::string to_json() const;
};

// Delta(e|psi) >= 0 for every positive-probability psi and e outside dom(psi).
CheckReport check_adaptive_monotone(const UtilityFunction& f, const Prior& prior, const CheckCaps& caps = {});

// Delta(e|psi) >= Delta(e|psi') for all psi subrealization of psi' and e outside dom(psi').
CheckReport check_adaptive_submodular(const UtilityFunction& f, const Prior& prior, const CheckCaps& caps = {});

// Same diminishing-returns inequality on max over Omega(V, a) of Delta(pi|.)
// for every V subset of E and a in 1..|V|. V is visited by increasing size,
// so singleton witnesses are reported first.
CheckReport check_fully_adaptive_submodular(const UtilityFunction& f, const Prior& prior,
                                            const CheckCaps& caps = kFullyAdaptiveCaps);

struct SamplingHitResult {
  std::size_t sample_size = 0;
  double exact = 0.0;              // 1 - C(n-k, s) / C(n, s)
  double empirical = 0.0;
  double bound = 0.0;              // 1 - epsilon
  double with_replacement = 0.0;   // 1 - exp(-s k / n)
  double std_error = 0.0;          // sqrt(exact (1 - exact) / trials)
};

// Probability that a uniform s-subset of n items, s = ceil((n/k) ln(1/eps))
// clamped to [1, n], hits a fixed k-subset; exact and simulated.
SamplingHitResult lemma1_check(std::size_t n, std::size_t k, double epsilon, std::size_t trials,
                               std::uint64_t seed);

// Enumerates every partial realization with positive evidence probability,
// in a fixed order (by base-(m+1) code).
std::vector<PartialRealization> positive_partial_realizations(const Prior& prior);

}  // namespace adsub
