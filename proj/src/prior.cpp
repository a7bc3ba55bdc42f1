#include "adsub/prior.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "adsub/error.hpp"

namespace adsub {

namespace {

void check_distribution(const std::vector<double>& p, const std::string& what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("prior normalization: negative probability in " + what);
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance)
    throw ValidationError("prior normalization: " + what + " sums to " + std::to_string(sum));
}

// Draws an index from weights summing to ~1.
std::size_t draw_categorical(std::span<const double> weights, Rng& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return last_positive;
}

// Odometer over the positive-probability states of `items`, calling
// visit(states, weight) for each combination.
template <class Visit>
void for_each_assignment(const std::vector<std::vector<double>>& probs, std::span<const ItemId> items,
                         Visit&& visit) {
  std::vector<std::vector<std::size_t>> choices(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& row = probs[items[i].index];
    for (std::size_t o = 0; o < row.size(); ++o)
      if (row[o] > 0.0) choices[i].push_back(o);
    if (choices[i].empty()) return;
  }
  std::vector<std::size_t> digit(items.size(), 0);
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < items.size(); ++i) w *= probs[items[i].index][choices[i][digit[i]]];
    visit(choices, digit, w);
    std::size_t pos = 0;
    while (pos < items.size() && ++digit[pos] == choices[pos].size()) digit[pos++] = 0;
    if (pos == items.size()) break;
  }
}

}  // namespace

Prior Prior::independent(std::vector<std::vector<double>> probs) {
  if (probs.empty()) throw ValidationError("prior: no items");
  const std::size_t m = probs.front().size();
  if (m == 0) throw ValidationError("prior: no states");
  for (std::size_t e = 0; e < probs.size(); ++e) {
    if (probs[e].size() != m) throw ValidationError("prior: item " + std::to_string(e) + " has wrong state count");
    check_distribution(probs[e], "item " + std::to_string(e));
  }
  Prior p;
  p.kind_ = Kind::Independent;
  p.n_ = probs.size();
  p.m_ = m;
  p.probs_ = std::make_shared<const std::vector<std::vector<double>>>(std::move(probs));
  return p;
}

Prior Prior::explicit_support(std::vector<WeightedRealization> support, std::size_t num_states) {
  if (support.empty()) throw ValidationError("prior: empty support");
  if (num_states == 0) throw ValidationError("prior: no states");
  const std::size_t n = support.front().realization.size();
  if (n == 0) throw ValidationError("prior: no items");
  std::vector<double> weights;
  std::set<Realization> seen;
  for (const auto& wr : support) {
    if (wr.realization.size() != n) throw ValidationError("prior: realization length mismatch");
    for (auto s : wr.realization.states)
      if (s.index >= num_states) throw ValidationError("prior: state id out of range");
    if (!seen.insert(wr.realization).second) throw ValidationError("prior: duplicate realization");
    weights.push_back(wr.probability);
  }
  check_distribution(weights, "explicit support");
  Prior p;
  p.kind_ = Kind::Explicit;
  p.n_ = n;
  p.m_ = num_states;
  p.support_ = std::make_shared<const std::vector<WeightedRealization>>(std::move(support));
  return p;
}

double Prior::evidence_probability(const PartialRealization& psi) const {
  for (const auto& o : psi)
    if (o.item.index >= n_ || o.state.index >= m_) throw std::out_of_range("partial realization out of range");
  if (kind_ == Kind::Independent) {
    double p = 1.0;
    for (const auto& o : psi) p *= (*probs_)[o.item.index][o.state.index];
    return p;
  }
  double p = 0.0;
  for (const auto& wr : *support_)
    if (consistent(psi, wr.realization)) p += wr.probability;
  return p;
}

ConditionedPrior::ConditionedPrior(Prior base, PartialRealization evidence)
    : base_(std::move(base)), evidence_(std::move(evidence)) {
  const double z = base_.evidence_probability(evidence_);
  if (!(z > 0.0)) throw ZeroProbabilityEvidence("evidence " + evidence_.to_string() + " has zero probability");
  if (base_.kind() == Prior::Kind::Explicit) {
    const auto& support = base_.support();
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i].probability > 0.0 && consistent(evidence_, support[i].realization)) {
        indices_.push_back(i);
        weights_.push_back(support[i].probability / z);
      }
    }
  }
}

std::vector<double> ConditionedPrior::state_distribution(ItemId e) const {
  std::vector<double> dist(base_.num_states(), 0.0);
  if (auto s = evidence_.state_of(e)) {
    dist[s->index] = 1.0;
    return dist;
  }
  if (base_.kind() == Prior::Kind::Independent) return base_.marginals()[e.index];
  const auto& support = base_.support();
  for (std::size_t i = 0; i < indices_.size(); ++i) dist[support[indices_[i]].realization[e].index] += weights_[i];
  return dist;
}

std::size_t ConditionedPrior::support_size() const {
  if (base_.kind() == Prior::Kind::Explicit) return indices_.size();
  std::size_t size = 1;
  const auto& probs = base_.marginals();
  for (std::size_t e = 0; e < base_.num_items(); ++e) {
    if (evidence_.contains(ItemId{e})) continue;
    std::size_t positive = 0;
    for (double p : probs[e]) positive += p > 0.0;
    size *= positive;
    if (size > kMaxEnumerableSupport) return kMaxEnumerableSupport + 1;
  }
  return size;
}

std::vector<WeightedRealization> ConditionedPrior::enumerate() const {
  std::vector<WeightedRealization> out;
  if (base_.kind() == Prior::Kind::Explicit) {
    out.reserve(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i)
      out.push_back({base_.support()[indices_[i]].realization, weights_[i]});
    return out;
  }
  if (support_size() > kMaxEnumerableSupport)
    throw ExactModeUnavailable("conditioned support exceeds " + std::to_string(kMaxEnumerableSupport) +
                               " realizations");
  std::vector<ItemId> free;
  for (std::size_t e = 0; e < base_.num_items(); ++e)
    if (!evidence_.contains(ItemId{e})) free.emplace_back(e);
  return enumerate_items(free);
}

std::vector<WeightedRealization> ConditionedPrior::enumerate_items(std::span<const ItemId> items) const {
  if (base_.kind() == Prior::Kind::Explicit) return enumerate();
  std::vector<ItemId> free;
  for (auto e : items)
    if (!evidence_.contains(e) && std::find(free.begin(), free.end(), e) == free.end()) free.push_back(e);
  std::size_t size = 1;
  for (auto e : free) {
    std::size_t positive = 0;
    for (double p : base_.marginals()[e.index]) positive += p > 0.0;
    size *= positive;
    if (size > kMaxEnumerableSupport)
      throw ExactModeUnavailable("conditioned support exceeds " + std::to_string(kMaxEnumerableSupport) +
                                 " realizations");
  }
  Realization seed(std::vector<StateId>(base_.num_items(), StateId{0}));
  for (const auto& o : evidence_) seed[o.item] = o.state;
  std::vector<WeightedRealization> out;
  for_each_assignment(base_.marginals(), free, [&](const auto& choices, const auto& digit, double w) {
    Realization r = seed;
    for (std::size_t i = 0; i < free.size(); ++i) r[free[i]] = StateId{choices[i][digit[i]]};
    out.push_back({std::move(r), w});
  });
  return out;
}

Realization ConditionedPrior::sample(Rng& rng) const {
  if (base_.kind() == Prior::Kind::Explicit) {
    return base_.support()[indices_[draw_categorical(weights_, rng)]].realization;
  }
  const auto& probs = base_.marginals();
  Realization r(std::vector<StateId>(base_.num_items()));
  for (std::size_t e = 0; e < base_.num_items(); ++e) {
    if (auto s = evidence_.state_of(ItemId{e}))
      r.states[e] = *s;
    else
      r.states[e] = StateId{draw_categorical(probs[e], rng)};
  }
  return r;
}

ConditionedPrior condition(const Prior& prior, const PartialRealization& psi) { return ConditionedPrior(prior, psi); }

Realization sample_realization(const Prior& prior, Rng& rng) { return ConditionedPrior(prior, {}).sample(rng); }

Realization sample_realization(const ConditionedPrior& prior, Rng& rng) { return prior.sample(rng); }

}  // namespace adsub
