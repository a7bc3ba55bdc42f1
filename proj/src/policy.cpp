#include "adsub/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "adsub/error.hpp"
#include "adsub/expectation.hpp"

namespace adsub {

namespace {

constexpr double kNotEvaluated = std::numeric_limits<double>::quiet_NaN();

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join_ids(const std::vector<std::size_t>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ":" : "") + std::to_string(ids[i]);
  return out;
}

// Rollout that tracks its own observations and evaluates exact Delta(e|psi).
class ObservingRollout : public Rollout {
 public:
  ObservingRollout(const UtilityFunction& f, const Prior& prior) : f_(&f), prior_(&prior) {}

  void observe(ItemId item, StateId state) override { psi_.insert(item, state); }

 protected:
  double delta(ItemId e) const { return marginal_utility(*f_, *prior_, psi_, e).value; }

  // argmax of Delta over ascending candidates; ties go to the smallest id.
  Decision best_of(std::vector<ItemId> candidates) const {
    Decision d;
    d.delta = -std::numeric_limits<double>::infinity();
    for (ItemId e : candidates) {
      const double v = delta(e);
      if (v > d.delta) {
        d.delta = v;
        d.item = e;
      }
    }
    d.candidates = std::move(candidates);
    return d;
  }

  std::vector<ItemId> unselected_all() const {
    std::vector<ItemId> out;
    for (std::size_t e = 0; e < prior_->num_items(); ++e)
      if (!psi_.contains(ItemId{e})) out.emplace_back(e);
    return out;
  }

  std::vector<ItemId> unselected_of(const std::vector<ItemId>& group) const {
    std::vector<ItemId> out;
    for (ItemId e : group)
      if (!psi_.contains(e)) out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
  }

  const UtilityFunction* f_;
  const Prior* prior_;
  PartialRealization psi_;
};

template <class Derived>
class ClonableRollout : public ObservingRollout {
 public:
  using ObservingRollout::ObservingRollout;
  std::unique_ptr<Rollout> clone() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
};

class EmptyPolicy final : public Policy {
  struct Run final : ClonableRollout<Run> {
    using ClonableRollout::ClonableRollout;
    std::optional<Decision> next(Rng&) override { return std::nullopt; }
  };

 public:
  std::unique_ptr<Rollout> start(const UtilityFunction& f, const Prior& prior) const override {
    return std::make_unique<Run>(f, prior);
  }
  PolicySpec descriptor() const override { return {"empty", {}, {}}; }
};

class FixedPolicy final : public Policy {
  struct Run final : ClonableRollout<Run> {
    Run(const UtilityFunction& f, const Prior& prior, const std::vector<ItemId>* items)
        : ClonableRollout(f, prior), items(items) {}
    std::optional<Decision> next(Rng&) override {
      while (pos < items->size() && psi_.contains((*items)[pos])) ++pos;
      if (pos == items->size()) return std::nullopt;
      const ItemId e = (*items)[pos++];
      return Decision{e, {e}, kNotEvaluated};
    }
    const std::vector<ItemId>* items;
    std::size_t pos = 0;
  };

 public:
  explicit FixedPolicy(std::vector<ItemId> items) : items_(std::move(items)) {}
  std::unique_ptr<Rollout> start(const UtilityFunction& f, const Prior& prior) const override {
    for (ItemId e : items_)
      if (e.index >= prior.num_items()) throw std::invalid_argument("fixed policy: item out of range");
    return std::make_unique<Run>(f, prior, &items_);
  }
  PolicySpec descriptor() const override {
    std::vector<std::size_t> ids;
    for (ItemId e : items_) ids.push_back(e.index);
    PolicySpec spec{"fixed", {}, {}};
    if (!ids.empty()) spec.params["items"] = join_ids(ids);
    return spec;
  }

 private:
  std::vector<ItemId> items_;
};

class GreedyPolicy final : public Policy {
  struct Naive final : ClonableRollout<Naive> {
    Naive(const UtilityFunction& f, const Prior& prior, std::size_t k) : ClonableRollout(f, prior), k(k) {}
    std::optional<Decision> next(Rng&) override {
      if (psi_.size() >= k) return std::nullopt;
      auto pool = unselected_all();
      if (pool.empty()) return std::nullopt;
      return best_of(std::move(pool));
    }
    std::size_t k;
  };

  // Max-heap of stale upper bounds. Under adaptive submodularity a fresh
  // value never exceeds the stale key, so a top entry refreshed in the
  // current round is the argmax.
  struct Lazy final : ClonableRollout<Lazy> {
    struct Entry {
      double bound;
      ItemId item;
      std::size_t round;
    };
    static bool lower(const Entry& a, const Entry& b) {
      if (a.bound != b.bound) return a.bound < b.bound;
      return a.item > b.item;
    }

    Lazy(const UtilityFunction& f, const Prior& prior, std::size_t k) : ClonableRollout(f, prior), k(k) {
      constexpr auto inf = std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e < prior.num_items(); ++e) heap.push_back({inf, ItemId{e}, kNever});
      std::make_heap(heap.begin(), heap.end(), lower);
    }

    std::optional<Decision> next(Rng&) override {
      if (psi_.size() >= k) return std::nullopt;
      const std::size_t round = psi_.size();
      std::vector<ItemId> evaluated;
      while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), lower);
        Entry top = heap.back();
        heap.pop_back();
        if (psi_.contains(top.item)) continue;
        if (top.round == round) {
          std::sort(evaluated.begin(), evaluated.end());
          return Decision{top.item, std::move(evaluated), top.bound};
        }
        top.bound = delta(top.item);
        top.round = round;
        evaluated.push_back(top.item);
        heap.push_back(top);
        std::push_heap(heap.begin(), heap.end(), lower);
      }
      return std::nullopt;
    }

    static constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
    std::size_t k;
    std::vector<Entry> heap;
  };

 public:
  GreedyPolicy(std::size_t k, GreedyVariant variant) : k_(k), variant_(variant) {}
  std::unique_ptr<Rollout> start(const UtilityFunction& f, const Prior& prior) const override {
    if (variant_ == GreedyVariant::Lazy) return std::make_unique<Lazy>(f, prior, k_);
    return std::make_unique<Naive>(f, prior, k_);
  }
  PolicySpec descriptor() const override {
    return {variant_ == GreedyVariant::Lazy ? "lazy_greedy" : "greedy", {{"k", std::to_string(k_)}}, {}};
  }

 private:
  std::size_t k_;
  GreedyVariant variant_;
};

class StochasticGreedyPolicy final : public Policy {
  struct Run final : ClonableRollout<Run> {
    Run(const UtilityFunction& f, const Prior& prior, std::size_t k, double eps)
        : ClonableRollout(f, prior), k(k), eps(eps) {}
    std::optional<Decision> next(Rng& rng) override {
      if (psi_.size() >= k) return std::nullopt;
      auto pool = unselected_all();
      if (pool.empty()) return std::nullopt;
      const std::size_t s = stochastic_sample_size(prior_->num_items(), k, eps, pool.size());
      return best_of(sample_without_replacement(pool, s, rng));
    }
    std::size_t k;
    double eps;
  };

 public:
  StochasticGreedyPolicy(std::size_t k, double eps) : k_(k), eps_(eps) {}
  std::unique_ptr<Rollout> start(const UtilityFunction& f, const Prior& prior) const override {
    return std::make_unique<Run>(f, prior, k_, eps_);
  }
  PolicySpec descriptor() const override {
    return {"asg", {{"k", std::to_string(k_)}, {"eps", format_real(eps_)}}, {}};
  }
  bool randomized() const override { return true; }

 private:
  std::size_t k_;
  double eps_;
};

// Processes groups in `order`; within each group makes up to d_i
// selections, either over all unselected group items (locally greedy) or
// over a fresh uniform sample of them (generalized stochastic greedy).
class GroupwisePolicy final : public Policy {
  struct Run final : ClonableRollout<Run> {
    Run(const UtilityFunction& f, const Prior& prior, const GroupwisePolicy* owner)
        : ClonableRollout(f, prior), owner(owner) {}

    std::optional<Decision> next(Rng& rng) override {
      const auto& spec = owner->groups_;
      for (; pos < owner->order_.size(); ++pos, taken = 0) {
        const std::size_t g = owner->order_[pos];
        const auto& group = spec.groups[g];
        const std::size_t limit = spec.limits[g];
        if (taken >= limit) continue;
        auto pool = unselected_of(group);
        if (pool.empty()) continue;
        ++taken;
        if (!owner->epsilon_) return best_of(std::move(pool));
        const std::size_t s = stochastic_sample_size(group.size(), limit, *owner->epsilon_, pool.size());
        return best_of(sample_without_replacement(pool, s, rng));
      }
      return std::nullopt;
    }

    const GroupwisePolicy* owner;
    std::size_t pos = 0;
    std::size_t taken = 0;
  };

 public:
  GroupwisePolicy(PartitionSpec groups, std::vector<std::size_t> order, std::optional<double> epsilon)
      : groups_(std::move(groups)), order_(std::move(order)), epsilon_(epsilon) {
    if (groups_.limits.size() != groups_.groups.size())
      throw std::invalid_argument("partition policy: one limit per group required");
    std::vector<std::size_t> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i || sorted.size() != groups_.groups.size())
        throw std::invalid_argument("partition policy: order must be a permutation of the groups");
  }

  std::unique_ptr<Rollout> start(const UtilityFunction& f, const Prior& prior) const override {
    groups_.validate(prior.num_items());
    return std::make_unique<Run>(f, prior, this);
  }
  PolicySpec descriptor() const override {
    PolicySpec spec{epsilon_ ? "gasg" : "local", {{"order", join_ids(order_)}}, {}};
    if (epsilon_) spec.params["eps"] = format_real(*epsilon_);
    return spec;
  }
  bool randomized() const override { return epsilon_.has_value(); }

 private:
  PartitionSpec groups_;
  std::vector<std::size_t> order_;
  std::optional<double> epsilon_;
};

class ConcatPolicy final : public Policy {
  // Runs the first policy to completion, then the second from an empty
  // history on the same realization. Items the second one re-selects are
  // answered from what is already known instead of being emitted again.
  struct Run final : Rollout {
    Run(std::unique_ptr<Rollout> a, std::unique_ptr<Rollout> b) : first(std::move(a)), second(std::move(b)) {}
    Run(const Run& o)
        : first(o.first->clone()), second(o.second->clone()), known(o.known), in_second(o.in_second),
          pending_second(o.pending_second) {}

    std::optional<Decision> next(Rng& rng) override {
      if (!in_second) {
        if (auto d = first->next(rng)) {
          pending_second = false;
          return d;
        }
        in_second = true;
      }
      while (auto d = second->next(rng)) {
        if (auto s = known.state_of(d->item)) {
          second->observe(d->item, *s);
          continue;
        }
        pending_second = true;
        return d;
      }
      return std::nullopt;
    }

    void observe(ItemId item, StateId state) override {
      known.insert(item, state);
      (pending_second ? second : first)->observe(item, state);
    }

    std::unique_ptr<Rollout> clone() const override { return std::make_unique<Run>(*this); }

    std::unique_ptr<Rollout> first;
    std::unique_ptr<Rollout> second;
    PartialRealization known;
    bool in_second = false;
    bool pending_second = false;
  };

 public:
  ConcatPolicy(PolicyPtr a, PolicyPtr b) : first_(std::move(a)), second_(std::move(b)) {}
  std::unique_ptr<Rollout> start(const UtilityFunction& f, const Prior& prior) const override {
    return std::make_unique<Run>(first_->start(f, prior), second_->start(f, prior));
  }
  PolicySpec descriptor() const override { return {"concat", {}, {first_->descriptor(), second_->descriptor()}}; }
  bool randomized() const override { return first_->randomized() || second_->randomized(); }

 private:
  PolicyPtr first_;
  PolicyPtr second_;
};

class RandomPolicy final : public Policy {
  struct Run final : ClonableRollout<Run> {
    Run(const UtilityFunction& f, const Prior& prior, std::size_t k) : ClonableRollout(f, prior), k(k) {}
    std::optional<Decision> next(Rng& rng) override {
      if (psi_.size() >= k) return std::nullopt;
      auto pool = unselected_all();
      if (pool.empty()) return std::nullopt;
      const ItemId e = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
      return Decision{e, {e}, kNotEvaluated};
    }
    std::size_t k;
  };

 public:
  explicit RandomPolicy(std::size_t k) : k_(k) {}
  std::unique_ptr<Rollout> start(const UtilityFunction& f, const Prior& prior) const override {
    return std::make_unique<Run>(f, prior, k_);
  }
  PolicySpec descriptor() const override { return {"random", {{"k", std::to_string(k_)}}, {}}; }
  bool randomized() const override { return true; }

 private:
  std::size_t k_;
};

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1), got " + format_real(eps));
}

}  // namespace

std::size_t stochastic_sample_size(std::size_t pool, std::size_t budget, double epsilon, std::size_t available) {
  if (available == 0) return 0;
  const double raw = std::ceil(static_cast<double>(pool) / static_cast<double>(budget) * std::log(1.0 / epsilon));
  if (!(raw < static_cast<double>(available))) return available;
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

PolicyTrace run_policy(const Policy& pi, const UtilityFunction& f, const Prior& prior, const Realization& phi,
                       const ConstraintState& constraint, Rng& rng, bool compute_utility) {
  auto rollout = pi.start(f, prior);
  ConstraintState c = constraint;
  PolicyTrace trace;
  while (!c.exhausted()) {
    auto d = rollout->next(rng);
    if (!d) break;
    const ItemId e = d->item;
    const std::string who = pi.descriptor().to_string();
    if (e.index >= phi.size()) throw PolicyViolation(who + " selected out-of-range item " + std::to_string(e.index));
    if (std::find(trace.selected.begin(), trace.selected.end(), e) != trace.selected.end())
      throw PolicyViolation(who + " selected item " + std::to_string(e.index) + " twice");
    if (!c.can_select(e)) throw PolicyViolation(who + " selected infeasible item " + std::to_string(e.index));
    c.record(e);
    const StateId o = phi[e];
    rollout->observe(e, o);
    trace.steps.push_back({trace.steps.size(), std::move(d->candidates), e, o, d->delta});
    trace.selected.push_back(e);
  }
  if (compute_utility) trace.utility = f.evaluate(trace.selected, phi);
  return trace;
}

PolicyPtr empty_policy() { return std::make_shared<EmptyPolicy>(); }

PolicyPtr fixed_policy(std::vector<ItemId> items) { return std::make_shared<FixedPolicy>(std::move(items)); }

PolicyPtr adaptive_greedy(std::size_t k, GreedyVariant variant) { return std::make_shared<GreedyPolicy>(k, variant); }

PolicyPtr adaptive_stochastic_greedy(std::size_t k, double epsilon) {
  if (k == 0) throw std::invalid_argument("asg requires k >= 1");
  check_epsilon(epsilon);
  return std::make_shared<StochasticGreedyPolicy>(k, epsilon);
}

PolicyPtr locally_greedy(PartitionSpec groups, std::vector<std::size_t> order) {
  return std::make_shared<GroupwisePolicy>(std::move(groups), std::move(order), std::nullopt);
}

PolicyPtr generalized_asg(PartitionSpec groups, std::vector<std::size_t> order, double epsilon) {
  check_epsilon(epsilon);
  return std::make_shared<GroupwisePolicy>(std::move(groups), std::move(order), epsilon);
}

PolicyPtr concat(PolicyPtr first, PolicyPtr second) {
  return std::make_shared<ConcatPolicy>(std::move(first), std::move(second));
}

PolicyPtr random_policy(std::size_t k) { return std::make_shared<RandomPolicy>(k); }

namespace {

std::size_t parse_count(const PolicySpec& spec, const std::string& key, std::size_t fallback) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(it->second, &used);
    if (used != it->second.size() || it->second.front() == '-') throw std::invalid_argument("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("policy descriptor '" + spec.to_string() + "': bad integer for " + key);
  }
}

std::vector<std::size_t> parse_list(const PolicySpec& spec, const std::string& key) {
  std::vector<std::size_t> out;
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return out;
  std::stringstream ss(it->second);
  std::string part;
  while (std::getline(ss, part, ':')) {
    PolicySpec single{spec.name, {{key, part}}, {}};
    out.push_back(parse_count(single, key, 0));
  }
  return out;
}

double parse_eps(const PolicySpec& spec) {
  auto it = spec.params.find("eps");
  if (it == spec.params.end())
    throw std::invalid_argument("policy descriptor '" + spec.to_string() + "': missing eps");
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("policy descriptor '" + spec.to_string() + "': bad eps");
  }
}

void allow_only(const PolicySpec& spec, std::initializer_list<const char*> keys, std::size_t children = 0) {
  for (const auto& [key, value] : spec.params)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      throw std::invalid_argument("policy descriptor '" + spec.to_string() + "': unknown parameter " + key);
  if (spec.children.size() != children)
    throw std::invalid_argument("policy descriptor '" + spec.to_string() + "': wrong number of sub-policies");
}

const PartitionSpec& require_partition(const PolicySpec& spec, const ConstraintState& c) {
  if (!c.is_partition())
    throw std::invalid_argument("policy descriptor '" + spec.to_string() + "' needs a partition constraint");
  return c.partition_spec();
}

std::vector<std::size_t> group_order(const PolicySpec& spec, const PartitionSpec& groups) {
  auto order = parse_list(spec, "order");
  if (order.empty()) {
    order.resize(groups.groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  return order;
}

}  // namespace

PolicyPtr make_policy(const PolicySpec& spec, const ConstraintState& instance_constraint) {
  const std::size_t default_k = instance_constraint.k();
  const std::string& name = spec.name;
  if (name == "empty") {
    allow_only(spec, {});
    return empty_policy();
  }
  if (name == "fixed") {
    allow_only(spec, {"items"});
    std::vector<ItemId> items;
    for (auto i : parse_list(spec, "items")) items.emplace_back(i);
    return fixed_policy(std::move(items));
  }
  if (name == "greedy" || name == "lazy_greedy") {
    allow_only(spec, {"k"});
    return adaptive_greedy(parse_count(spec, "k", default_k),
                           name == "greedy" ? GreedyVariant::Naive : GreedyVariant::Lazy);
  }
  if (name == "asg") {
    allow_only(spec, {"k", "eps"});
    return adaptive_stochastic_greedy(parse_count(spec, "k", default_k), parse_eps(spec));
  }
  if (name == "random") {
    allow_only(spec, {"k"});
    return random_policy(parse_count(spec, "k", default_k));
  }
  if (name == "local") {
    allow_only(spec, {"order"});
    const auto& groups = require_partition(spec, instance_constraint);
    return locally_greedy(groups, group_order(spec, groups));
  }
  if (name == "gasg") {
    allow_only(spec, {"order", "eps"});
    const auto& groups = require_partition(spec, instance_constraint);
    return generalized_asg(groups, group_order(spec, groups), parse_eps(spec));
  }
  if (name == "concat") {
    allow_only(spec, {}, 2);
    return concat(make_policy(spec.children[0], instance_constraint), make_policy(spec.children[1], instance_constraint));
  }
  throw std::invalid_argument("unknown policy descriptor '" + spec.to_string() + "'");
}

}  // namespace adsub
