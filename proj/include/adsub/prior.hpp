#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "adsub/random.hpp"
#include "adsub/types.hpp"

namespace adsub {

inline constexpr double kNormalizationTolerance = 1e-9;

// Largest support an exact expectation will enumerate.
inline constexpr std::size_t kMaxEnumerableSupport = std::size_t{1} << 20;

struct WeightedRealization {
  Realization realization;
  double probability = 0.0;
};

// Distribution over realizations: either independent per-item categorical
// marginals or an explicit weighted list of realizations. Cheap to copy.
class Prior {
 public:
  enum class Kind { Independent, Explicit };

  // probs[e][o] = Pr[Phi_e = o]; every row has the same length m.
  static Prior independent(std::vector<std::vector<double>> probs);
  static Prior explicit_support(std::vector<WeightedRealization> support, std::size_t num_states);

  Kind kind() const { return kind_; }
  std::size_t num_items() const { return n_; }
  std::size_t num_states() const { return m_; }

  // Independent only.
  const std::vector<std::vector<double>>& marginals() const { return *probs_; }
  // Explicit only.
  const std::vector<WeightedRealization>& support() const { return *support_; }

  // Pr[psi ~ Phi].
  double evidence_probability(const PartialRealization& psi) const;

 private:
  Kind kind_ = Kind::Independent;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::shared_ptr<const std::vector<std::vector<double>>> probs_;
  std::shared_ptr<const std::vector<WeightedRealization>> support_;
};

// p(phi | psi). Construction fails with ZeroProbabilityEvidence when
// Pr[psi ~ Phi] = 0.
class ConditionedPrior {
 public:
  ConditionedPrior(Prior base, PartialRealization evidence);

  const Prior& base() const { return base_; }
  const PartialRealization& evidence() const { return evidence_; }

  // Pr[Phi_e = o | psi] for every state o.
  std::vector<double> state_distribution(ItemId e) const;

  // Number of realizations with positive posterior mass (saturates at
  // kMaxEnumerableSupport + 1 for large independent priors).
  std::size_t support_size() const;

  // Posterior support with normalized weights; throws ExactModeUnavailable
  // above kMaxEnumerableSupport.
  std::vector<WeightedRealization> enumerate() const;

  // Posterior over the states of `items` only (independent priors): each
  // returned realization fixes the evidence and the listed items, and sets
  // every other item to state 0. Used by utilities whose value only depends
  // on the states of selected items.
  std::vector<WeightedRealization> enumerate_items(std::span<const ItemId> items) const;

  Realization sample(Rng& rng) const;

 private:
  Prior base_;
  PartialRealization evidence_;
  // Explicit: indices into base support and normalized weights.
  std::vector<std::size_t> indices_;
  std::vector<double> weights_;
};

ConditionedPrior condition(const Prior& prior, const PartialRealization& psi);

Realization sample_realization(const Prior& prior, Rng& rng);
Realization sample_realization(const ConditionedPrior& prior, Rng& rng);

}  // namespace adsub
