#pragma once

// Test-only reference computations. Everything here works from the full
// enumerated support with plain filtering, independent of ConditionedPrior,
// the policy-tree walk and the memoized oracle.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "adsub/constraint.hpp"
#include "adsub/instance.hpp"
#include "adsub/policy.hpp"
#include "adsub/prior.hpp"
#include "adsub/utility.hpp"

namespace adsub::testing {

inline std::vector<WeightedRealization> full_support(const Prior& prior) {
  if (prior.kind() == Prior::Kind::Explicit) return prior.support();
  std::vector<WeightedRealization> out{{Realization(std::vector<StateId>(prior.num_items())), 1.0}};
  for (std::size_t e = 0; e < prior.num_items(); ++e) {
    std::vector<WeightedRealization> next;
    for (const auto& wr : out) {
      for (std::size_t o = 0; o < prior.num_states(); ++o) {
        const double p = prior.marginals()[e][o];
        if (p <= 0.0) continue;
        WeightedRealization copy = wr;
        copy.realization.states[e] = StateId{o};
        copy.probability *= p;
        next.push_back(std::move(copy));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<ItemId> domain_of(const PartialRealization& psi) {
  std::vector<ItemId> out;
  for (const auto& o : psi) out.push_back(o.item);
  return out;
}

// Delta(e|psi) by filtering the full support.
inline double brute_delta(const UtilityFunction& f, const Prior& prior, const PartialRealization& psi, ItemId e) {
  auto base = domain_of(psi);
  auto with = base;
  if (std::find(with.begin(), with.end(), e) == with.end()) with.push_back(e);
  std::sort(with.begin(), with.end());
  double z = 0.0, acc = 0.0;
  for (const auto& wr : full_support(prior)) {
    if (!consistent(psi, wr.realization)) continue;
    z += wr.probability;
    acc += wr.probability * (f.evaluate(with, wr.realization) - f.evaluate(base, wr.realization));
  }
  return acc / z;
}

// f_avg of a deterministic policy: one rollout per support element.
inline double brute_expected(const UtilityFunction& f, const Prior& prior, const Policy& pi,
                             const ConstraintState& constraint) {
  double acc = 0.0;
  for (const auto& wr : full_support(prior)) {
    Rng rng(0);
    acc += wr.probability * run_policy(pi, f, prior, wr.realization, constraint, rng).utility;
  }
  return acc;
}

// Unmemoized optimal adaptive value over feasible selections (with stop).
class BruteOracle {
 public:
  BruteOracle(const UtilityFunction& f, const Prior& prior) : f_(f), support_(full_support(prior)), m_(prior.num_states()) {}

  double value(const PartialRealization& psi, ConstraintState constraint) const {
    std::vector<const WeightedRealization*> live;
    double z = 0.0;
    for (const auto& wr : support_)
      if (consistent(psi, wr.realization)) {
        live.push_back(&wr);
        z += wr.probability;
      }
    const auto dom = domain_of(psi);
    double stop = 0.0;
    for (const auto* wr : live) stop += wr->probability * f_.evaluate(dom, wr->realization);
    double best = stop / z;
    if (constraint.exhausted()) return best;
    for (std::size_t i = 0; i < f_.num_items(); ++i) {
      const ItemId e{i};
      if (psi.contains(e) || !constraint.can_select(e)) continue;
      ConstraintState next = constraint;
      next.record(e);
      double v = 0.0;
      for (std::size_t o = 0; o < m_; ++o) {
        double po = 0.0;
        for (const auto* wr : live)
          if (wr->realization[e] == StateId{o}) po += wr->probability;
        if (po <= 0.0) continue;
        v += po / z * value(psi.with(e, StateId{o}), next);
      }
      best = std::max(best, v);
    }
    return best;
  }

 private:
  const UtilityFunction& f_;
  std::vector<WeightedRealization> support_;
  std::size_t m_;
};

// Counts compute() calls itself and forwards to an inner utility.
class TracingUtility final : public UtilityFunction {
 public:
  explicit TracingUtility(const UtilityFunction& inner)
      : UtilityFunction(inner.num_items(), inner.num_states()), inner_(inner) {}
  bool local() const override { return inner_.local(); }
  std::string kind() const override { return "tracing"; }
  std::uint64_t traced() const { return traced_.load(); }

 protected:
  double compute(std::span<const ItemId> selected, const Realization& phi) const override {
    traced_.fetch_add(1);
    return inner_.evaluate(selected, phi);
  }

 private:
  const UtilityFunction& inner_;
  mutable std::atomic<std::uint64_t> traced_{0};
};

inline Instance small_coverage(std::uint64_t seed, std::size_t n, std::size_t k, std::size_t m = 2) {
  CoverageConfig c;
  c.n = n;
  c.m = m;
  c.universe = 8;
  c.density = 0.3;
  c.seed = seed;
  return generate_coverage(c, ConstraintState::cardinality(k));
}

inline Instance small_partition(std::uint64_t seed, std::size_t n, std::size_t groups, std::size_t total) {
  Rng rng = make_stream(seed, 99);
  PartitionSpec spec = random_partition(n, groups, total, rng);
  CoverageConfig c;
  c.n = n;
  c.universe = 8;
  c.density = 0.3;
  c.seed = seed;
  return generate_coverage(c, ConstraintState::partition(spec, n));
}

}  // namespace adsub::testing
