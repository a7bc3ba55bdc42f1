#include "adsub/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "adsub/error.hpp"
#include "adsub/policy.hpp"

namespace adsub {

namespace {

Realization realization_from(const PartialRealization& psi, std::size_t n) {
  Realization r(std::vector<StateId>(n, StateId{0}));
  for (const auto& o : psi) r[o.item] = o.state;
  return r;
}

std::vector<ItemId> union_of(std::vector<ItemId> a, std::span<const ItemId> b) {
  for (ItemId e : b)
    if (std::find(a.begin(), a.end(), e) == a.end()) a.push_back(e);
  std::sort(a.begin(), a.end());
  return a;
}

Estimate summarize(const std::vector<double>& values) {
  Estimate est;
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.value = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.value) * (v - est.value);
    const double var = ss / static_cast<double>(values.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return est;
}

// Runs fn(i) for i in [0, count) over `workers` threads. Results are
// written by index, so the outcome does not depend on the schedule.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Exact expectation of a single fixed-randomness rollout: walks the policy
// tree, branching on the state of every selected item.
class PolicyTreeWalk {
 public:
  PolicyTreeWalk(const UtilityFunction& f, const Prior& prior, const PartialRealization& base, bool subtract_base,
                 const std::optional<ConstraintState>& constraint)
      : f_(f), prior_(prior), base_(base), base_domain_(base.domain()), subtract_base_(subtract_base),
        constraint_(constraint) {}

  double run(const Policy& pi, Rng rng) {
    auto rollout = pi.start(f_, prior_);
    return node(base_, {}, *rollout, rng, constraint_);
  }

 private:
  double node(const PartialRealization& total, const std::vector<ItemId>& selected, Rollout& rollout, Rng& rng,
              std::optional<ConstraintState> c) {
    if (c && c->exhausted()) return leaf(total, selected);
    auto decision = rollout.next(rng);
    if (!decision) return leaf(total, selected);
    const ItemId e = decision->item;
    if (e.index >= prior_.num_items() || std::find(selected.begin(), selected.end(), e) != selected.end())
      throw PolicyViolation("policy " + std::string("selected item ") + std::to_string(e.index) + " twice");
    if (c) {
      if (!c->can_select(e)) throw PolicyViolation("item " + std::to_string(e.index) + " violates the constraint");
      c->record(e);
    }
    std::vector<ItemId> next_selected = selected;
    next_selected.push_back(e);
    const auto dist = condition(prior_, total).state_distribution(e);
    double value = 0.0;
    for (std::size_t o = 0; o < dist.size(); ++o) {
      if (dist[o] <= 0.0) continue;
      auto child = rollout.clone();
      child->observe(e, StateId{o});
      Rng child_rng = rng;
      const PartialRealization child_total = total.contains(e) ? total : total.with(e, StateId{o});
      value += dist[o] * node(child_total, next_selected, *child, child_rng, c);
    }
    return value;
  }

  double leaf(const PartialRealization& total, const std::vector<ItemId>& selected) {
    const auto chosen = union_of(base_domain_, selected);
    if (f_.local()) {
      const Realization r = realization_from(total, prior_.num_items());
      double v = f_.evaluate(chosen, r);
      if (subtract_base_) v -= f_.evaluate(base_domain_, r);
      return v;
    }
    double value = 0.0;
    for (const auto& wr : condition(prior_, total).enumerate()) {
      double v = f_.evaluate(chosen, wr.realization);
      if (subtract_base_) v -= f_.evaluate(base_domain_, wr.realization);
      value += wr.probability * v;
    }
    return value;
  }

  const UtilityFunction& f_;
  const Prior& prior_;
  const PartialRealization& base_;
  std::vector<ItemId> base_domain_;
  bool subtract_base_;
  const std::optional<ConstraintState>& constraint_;
};

std::vector<double> exact_values(const UtilityFunction& f, const Prior& prior, const PartialRealization& base,
                                 bool subtract_base, const Policy& pi, const ExactMode& mode,
                                 const std::optional<ConstraintState>& constraint) {
  condition(prior, base);  // surfaces ZeroProbabilityEvidence
  PolicyTreeWalk walk(f, prior, base, subtract_base, constraint);
  const std::size_t replicates = pi.randomized() ? std::max<std::size_t>(1, mode.replicates) : 1;
  std::vector<double> values(replicates);
  for (std::size_t r = 0; r < replicates; ++r) values[r] = walk.run(pi, make_stream(mode.seed, r));
  return values;
}

Estimate monte_carlo_policy(const UtilityFunction& f, const Prior& prior, const PartialRealization& base,
                            bool subtract_base, const Policy& pi, const MonteCarloMode& mode,
                            const std::optional<ConstraintState>& constraint) {
  const ConditionedPrior posterior = condition(prior, base);
  const auto base_domain = base.domain();
  const ConstraintState limits = constraint.value_or(ConstraintState::cardinality(prior.num_items()));
  std::vector<double> values(mode.samples);
  parallel_for(mode.samples, mode.workers, [&](std::size_t i) {
    Rng world = make_stream(mode.seed, 2 * i);
    Rng internal = make_stream(mode.seed, 2 * i + 1);
    const Realization phi = posterior.sample(world);
    const PolicyTrace trace = run_policy(pi, f, prior, phi, limits, internal, false);
    double v = f.evaluate(union_of(base_domain, trace.selected), phi);
    if (subtract_base) v -= f.evaluate(base_domain, phi);
    values[i] = v;
  });
  return summarize(values);
}

Estimate evaluate_policy(const UtilityFunction& f, const Prior& prior, const PartialRealization& base,
                         bool subtract_base, const Policy& pi, const EvalMode& mode,
                         const std::optional<ConstraintState>& constraint) {
  if (const auto* mc = std::get_if<MonteCarloMode>(&mode))
    return monte_carlo_policy(f, prior, base, subtract_base, pi, *mc, constraint);
  return summarize(exact_values(f, prior, base, subtract_base, pi, std::get<ExactMode>(mode), constraint));
}

}  // namespace

double conditional_value(const UtilityFunction& f, const ConditionedPrior& posterior) {
  const auto domain = posterior.evidence().domain();
  if (f.local()) return f.evaluate(domain, realization_from(posterior.evidence(), posterior.base().num_items()));
  double value = 0.0;
  for (const auto& wr : posterior.enumerate()) value += wr.probability * f.evaluate(domain, wr.realization);
  return value;
}

Estimate marginal_utility(const UtilityFunction& f, const Prior& prior, const PartialRealization& psi, ItemId e,
                          const EvalMode& mode) {
  f.count_delta();
  if (psi.contains(e)) return {};
  const ConditionedPrior posterior = condition(prior, psi);
  const auto domain = psi.domain();
  const auto with_e = union_of(domain, std::span<const ItemId>(&e, 1));

  if (const auto* mc = std::get_if<MonteCarloMode>(&mode)) {
    std::vector<double> values(mc->samples);
    parallel_for(mc->samples, mc->workers, [&](std::size_t i) {
      Rng rng = make_stream(mc->seed, i);
      const Realization phi = posterior.sample(rng);
      values[i] = f.evaluate(with_e, phi) - f.evaluate(domain, phi);
    });
    return summarize(values);
  }

  double value = 0.0;
  if (f.local()) {
    Realization r = realization_from(psi, prior.num_items());
    const double before = f.evaluate(domain, r);
    const auto dist = posterior.state_distribution(e);
    for (std::size_t o = 0; o < dist.size(); ++o) {
      if (dist[o] <= 0.0) continue;
      r[e] = StateId{o};
      value += dist[o] * (f.evaluate(with_e, r) - before);
    }
    return {value, 0.0};
  }
  for (const auto& wr : posterior.enumerate())
    value += wr.probability * (f.evaluate(with_e, wr.realization) - f.evaluate(domain, wr.realization));
  return {value, 0.0};
}

Estimate policy_marginal(const UtilityFunction& f, const Prior& prior, const PartialRealization& psi,
                         const Policy& pi, const EvalMode& mode, const std::optional<ConstraintState>& constraint) {
  return evaluate_policy(f, prior, psi, true, pi, mode, constraint);
}

Estimate expected_utility(const UtilityFunction& f, const Prior& prior, const Policy& pi, const EvalMode& mode,
                          const std::optional<ConstraintState>& constraint) {
  return evaluate_policy(f, prior, {}, false, pi, mode, constraint);
}

std::vector<double> exact_replicate_values(const UtilityFunction& f, const Prior& prior, const Policy& pi,
                                           const ExactMode& mode, const std::optional<ConstraintState>& constraint) {
  return exact_values(f, prior, {}, false, pi, mode, constraint);
}

}  // namespace adsub
