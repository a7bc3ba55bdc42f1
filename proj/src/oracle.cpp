#include "adsub/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "adsub/error.hpp"
#include "adsub/expectation.hpp"

namespace adsub {

namespace {

struct KeyHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ull ^ k.second);
  }
};

// Budget bookkeeping: one counter per group, or a single counter with an
// optional whitelist of selectable items.
struct Budget {
  std::vector<std::size_t> remaining;
  std::vector<int> group;  // item -> counter index, -1 if unselectable
};

class OracleSolver {
 public:
  OracleSolver(const UtilityFunction& f, const Prior& prior, Budget budget, const OracleOptions& options)
      : f_(f), prior_(prior), budget_(std::move(budget)), options_(options) {
    const std::size_t n = prior.num_items();
    const std::size_t m = prior.num_states();
    if (n > options.caps.max_items || m > options.caps.max_states)
      throw InstanceTooLarge("oracle caps exceeded: n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                             " (limits " + std::to_string(options.caps.max_items) + ", " +
                             std::to_string(options.caps.max_states) + ")");
    // Budgets above the number of selectable items cannot be spent.
    std::vector<std::size_t> members(budget_.remaining.size(), 0);
    for (int g : budget_.group)
      if (g >= 0) ++members[static_cast<std::size_t>(g)];
    std::size_t total = 0;
    for (std::size_t g = 0; g < members.size(); ++g) {
      budget_.remaining[g] = std::min(budget_.remaining[g], members[g]);
      total += budget_.remaining[g];
    }
    if (total > options.caps.max_budget)
      throw InstanceTooLarge("oracle caps exceeded: total budget " + std::to_string(total) + " > " +
                             std::to_string(options.caps.max_budget));
    radix_ = options.caps.max_budget + 1;
  }

  OracleResult solve(const PartialRealization& root) {
    OracleResult result;
    const double stop = conditional_value(f_, condition(prior_, root));
    double best = options_.allow_stop ? stop : -std::numeric_limits<double>::infinity();
    std::vector<std::pair<ItemId, double>> actions;
    ++nodes_;
    for (std::size_t i = 0; i < prior_.num_items(); ++i) {
      const ItemId e{i};
      if (!feasible(root, budget_.remaining, e)) continue;
      const double v = action_value(root, budget_.remaining, e);
      actions.emplace_back(e, v);
      best = std::max(best, v);
    }
    if (actions.empty()) best = stop;
    const double tol = 1e-12 * std::max(1.0, std::abs(best));
    for (const auto& [e, v] : actions)
      if (v >= best - tol) result.optimal_first_actions.push_back(e);
    result.value = best;
    result.nodes_expanded = nodes_;
    result.cache_hits = hits_;
    return result;
  }

 private:
  bool feasible(const PartialRealization& psi, const std::vector<std::size_t>& remaining, ItemId e) const {
    const int g = budget_.group[e.index];
    return g >= 0 && remaining[static_cast<std::size_t>(g)] > 0 && !psi.contains(e);
  }

  double action_value(const PartialRealization& psi, std::vector<std::size_t> remaining, ItemId e) {
    --remaining[static_cast<std::size_t>(budget_.group[e.index])];
    const auto dist = condition(prior_, psi).state_distribution(e);
    double v = 0.0;
    for (std::size_t o = 0; o < dist.size(); ++o)
      if (dist[o] > 0.0) v += dist[o] * value(psi.with(e, StateId{o}), remaining);
    return v;
  }

  double value(const PartialRealization& psi, const std::vector<std::size_t>& remaining) {
    const auto key = encode(psi, remaining);
    if (options_.memoize) {
      if (auto it = memo_.find(key); it != memo_.end()) {
        ++hits_;
        return it->second;
      }
    }
    ++nodes_;
    const double stop = conditional_value(f_, condition(prior_, psi));
    double best = options_.allow_stop ? stop : -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < prior_.num_items(); ++i) {
      const ItemId e{i};
      if (!feasible(psi, remaining, e)) continue;
      any = true;
      best = std::max(best, action_value(psi, remaining, e));
    }
    if (!any) best = stop;
    if (options_.memoize) memo_.emplace(key, best);
    return best;
  }

  std::pair<std::uint64_t, std::uint64_t> encode(const PartialRealization& psi,
                                                 const std::vector<std::size_t>& remaining) const {
    const std::uint64_t base = prior_.num_states() + 1;
    std::uint64_t code = 0;
    std::uint64_t place = 1;
    std::size_t next = 0;
    const auto obs = psi.observations();
    for (std::size_t e = 0; e < prior_.num_items(); ++e, place *= base) {
      if (next < obs.size() && obs[next].item.index == e) code += place * (obs[next++].state.index + 1);
    }
    std::uint64_t budget_code = 0;
    for (std::size_t r : remaining) budget_code = budget_code * radix_ + r;
    return {code, budget_code};
  }

  const UtilityFunction& f_;
  const Prior& prior_;
  Budget budget_;
  OracleOptions options_;
  std::uint64_t radix_ = 7;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double, KeyHash> memo_;
  std::uint64_t nodes_ = 0;
  std::uint64_t hits_ = 0;
};

}  // namespace

OracleResult optimal_value(const UtilityFunction& f, const Prior& prior, const ConstraintState& constraint,
                           const PartialRealization& base, const OracleOptions& options) {
  Budget budget;
  budget.group.assign(prior.num_items(), 0);
  if (constraint.is_partition()) {
    for (std::size_t e = 0; e < prior.num_items(); ++e) {
      auto g = constraint.group_of(ItemId{e});
      budget.group[e] = g ? static_cast<int>(*g) : -1;
    }
  }
  budget.remaining = constraint.remaining();
  return OracleSolver(f, prior, std::move(budget), options).solve(base);
}

double restricted_optimal(const UtilityFunction& f, const Prior& prior, const PartialRealization& psi,
                          std::span<const ItemId> allowed, std::size_t budget, const OracleOptions& options) {
  Budget b;
  b.group.assign(prior.num_items(), -1);
  for (ItemId e : allowed) {
    if (e.index >= prior.num_items()) throw std::out_of_range("restricted_optimal: item out of range");
    b.group[e.index] = 0;
  }
  b.remaining = {budget};
  const OracleResult r = OracleSolver(f, prior, std::move(b), options).solve(psi);
  return r.value - conditional_value(f, condition(prior, psi));
}

}  // namespace adsub
