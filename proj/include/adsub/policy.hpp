#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adsub/constraint.hpp"
#include "adsub/prior.hpp"
#include "adsub/random.hpp"
#include "adsub/types.hpp"
#include "adsub/utility.hpp"

namespace adsub {

// Structured text form of a policy: `name` or `name(key=value,...,child)`.
// List values use ':' as separator, e.g. `local(order=1:0)`.
struct PolicySpec {
  std::string name;
  std::map<std::string, std::string> params;
  std::vector<PolicySpec> children;

  std::string to_string() const;
  static PolicySpec parse(const std::string& text);

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct Decision {
  ItemId item;
  std::vector<ItemId> candidates;
  double delta = 0.0;
};

// Mutable per-rollout state of a policy. A rollout sees only its own
// observations; clone() snapshots it so exact evaluation can branch.
class Rollout {
 public:
  virtual ~Rollout() = default;
  // Next item to select, or nullopt to stop.
  virtual std::optional<Decision> next(Rng& rng) = 0;
  virtual void observe(ItemId item, StateId state) = 0;
  virtual std::unique_ptr<Rollout> clone() const = 0;
};

// Immutable policy descriptor. The utility and prior passed to start() must
// outlive the rollout.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::unique_ptr<Rollout> start(const UtilityFunction& f, const Prior& prior) const = 0;
  virtual PolicySpec descriptor() const = 0;
  virtual bool randomized() const { return false; }
};

using PolicyPtr = std::shared_ptr<const Policy>;

struct TraceStep {
  std::size_t round = 0;
  std::vector<ItemId> candidates;
  ItemId chosen;
  StateId observed;
  double delta = 0.0;
};

struct PolicyTrace {
  std::vector<TraceStep> steps;
  std::vector<ItemId> selected;
  double utility = 0.0;
};

// Select-observe loop on a fixed realization. Stops when the policy stops
// or the constraint is exhausted; throws PolicyViolation on an infeasible
// or repeated item. The final utility costs one extra f call unless
// compute_utility is false.
PolicyTrace run_policy(const Policy& pi, const UtilityFunction& f, const Prior& prior, const Realization& phi,
                       const ConstraintState& constraint, Rng& rng, bool compute_utility = true);

enum class GreedyVariant { Naive, Lazy };

PolicyPtr empty_policy();
// Selects the listed items in order (skipping repeats), ignoring states.
PolicyPtr fixed_policy(std::vector<ItemId> items);
PolicyPtr adaptive_greedy(std::size_t k, GreedyVariant variant = GreedyVariant::Naive);
PolicyPtr adaptive_stochastic_greedy(std::size_t k, double epsilon);
PolicyPtr locally_greedy(PartitionSpec groups, std::vector<std::size_t> order);
PolicyPtr generalized_asg(PartitionSpec groups, std::vector<std::size_t> order, double epsilon);
PolicyPtr concat(PolicyPtr first, PolicyPtr second);
PolicyPtr random_policy(std::size_t k);

// ceil((pool / budget) * ln(1/epsilon)), clamped to [1, available].
std::size_t stochastic_sample_size(std::size_t pool, std::size_t budget, double epsilon, std::size_t available);

// Builds a policy from its descriptor. Missing k / groups default to the
// instance constraint. Throws std::invalid_argument naming the descriptor.
PolicyPtr make_policy(const PolicySpec& spec, const ConstraintState& instance_constraint);

}  // namespace adsub
