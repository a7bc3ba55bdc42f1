#include "adsub/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "adsub/error.hpp"
#include "adsub/expectation.hpp"
#include "adsub/oracle.hpp"
#include "adsub/random.hpp"

namespace adsub {

namespace {

void check_caps(const Prior& prior, const CheckCaps& caps, const std::string& check) {
  if (prior.num_items() > caps.max_items || prior.num_states() > caps.max_states)
    throw InstanceTooLarge(check + " caps exceeded: n=" + std::to_string(prior.num_items()) + ", m=" +
                           std::to_string(prior.num_states()) + " (limits " + std::to_string(caps.max_items) + ", " +
                           std::to_string(caps.max_states) + ")");
}

// Index of every positive-probability partial realization by its
// base-(m+1) code (digit 0 = unobserved, o+1 = state o).
class PartialRealizationIndex {
 public:
  explicit PartialRealizationIndex(const Prior& prior) : n_(prior.num_items()), base_(prior.num_states() + 1) {
    std::size_t total = 1;
    for (std::size_t e = 0; e < n_; ++e) total *= base_;
    index_.assign(total, -1);
    for (std::size_t code = 0; code < total; ++code) {
      PartialRealization psi = decode(code);
      if (prior.evidence_probability(psi) > 0.0) {
        index_[code] = static_cast<long>(list_.size());
        list_.push_back(std::move(psi));
        codes_.push_back(code);
      }
    }
  }

  const std::vector<PartialRealization>& list() const { return list_; }
  std::size_t code_of(std::size_t i) const { return codes_[i]; }
  long find(std::size_t code) const { return index_[code]; }

  // Calls visit(j) for the index of every subrealization of list()[i],
  // including itself.
  template <class Visit>
  void for_each_sub(std::size_t i, Visit&& visit) const {
    const auto obs = list_[i].observations();
    std::vector<std::size_t> contribution(obs.size());
    for (std::size_t t = 0; t < obs.size(); ++t) contribution[t] = place(obs[t].item.index) * (obs[t].state.index + 1);
    const std::size_t full = codes_[i];
    for (std::size_t mask = 0; mask < (std::size_t{1} << obs.size()); ++mask) {
      std::size_t code = full;
      for (std::size_t t = 0; t < obs.size(); ++t)
        if (!(mask >> t & 1)) code -= contribution[t];
      visit(static_cast<std::size_t>(index_[code]));
    }
  }

 private:
  std::size_t place(std::size_t e) const {
    std::size_t p = 1;
    for (std::size_t i = 0; i < e; ++i) p *= base_;
    return p;
  }

  PartialRealization decode(std::size_t code) const {
    std::vector<Observation> obs;
    for (std::size_t e = 0; e < n_; ++e, code /= base_)
      if (code % base_) obs.push_back({ItemId{e}, StateId{code % base_ - 1}});
    return PartialRealization(std::move(obs));
  }

  std::size_t n_;
  std::size_t base_;
  std::vector<long> index_;
  std::vector<PartialRealization> list_;
  std::vector<std::size_t> codes_;
};

nlohmann::json partial_json(const PartialRealization& psi) {
  auto arr = nlohmann::json::array();
  for (const auto& o : psi) arr.push_back({o.item.index, o.state.index});
  return arr;
}

}  // namespace

std::string CheckReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["passed"] = passed;
  j["pairs_checked"] = pairs_checked;
  if (counterexample) {
    const Witness& w = *counterexample;
    nlohmann::json c;
    c["psi"] = partial_json(w.psi);
    c["psi_prime"] = partial_json(w.psi_prime);
    if (w.item) c["item"] = w.item->index;
    if (!w.allowed.empty()) {
      auto v = nlohmann::json::array();
      for (ItemId e : w.allowed) v.push_back(e.index);
      c["allowed"] = v;
      c["budget"] = w.budget;
    }
    c["lhs"] = w.lhs;
    c["rhs"] = w.rhs;
    j["counterexample"] = c;
  } else {
    j["counterexample"] = nullptr;
  }
  return j.dump(2);
}

std::vector<PartialRealization> positive_partial_realizations(const Prior& prior) {
  return PartialRealizationIndex(prior).list();
}

CheckReport check_adaptive_monotone(const UtilityFunction& f, const Prior& prior, const CheckCaps& caps) {
  check_caps(prior, caps, "adaptive monotonicity");
  CheckReport report;
  report.check = "adaptive_monotone";
  for (const auto& psi : positive_partial_realizations(prior)) {
    for (std::size_t i = 0; i < prior.num_items(); ++i) {
      const ItemId e{i};
      if (psi.contains(e)) continue;
      const double d = marginal_utility(f, prior, psi, e).value;
      ++report.pairs_checked;
      if (d < -kCheckTolerance && report.passed) {
        report.passed = false;
        report.counterexample = Witness{psi, psi, e, {}, 0, d, 0.0};
      }
    }
  }
  return report;
}

CheckReport check_adaptive_submodular(const UtilityFunction& f, const Prior& prior, const CheckCaps& caps) {
  check_caps(prior, caps, "adaptive submodularity");
  CheckReport report;
  report.check = "adaptive_submodular";
  const PartialRealizationIndex index(prior);
  const auto& all = index.list();
  const std::size_t n = prior.num_items();
  std::vector<double> delta(all.size() * n, 0.0);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t e = 0; e < n; ++e)
      if (!all[i].contains(ItemId{e})) delta[i * n + e] = marginal_utility(f, prior, all[i], ItemId{e}).value;

  for (std::size_t big = 0; big < all.size(); ++big) {
    index.for_each_sub(big, [&](std::size_t small) {
      for (std::size_t e = 0; e < n; ++e) {
        if (all[big].contains(ItemId{e})) continue;
        ++report.pairs_checked;
        const double lhs = delta[small * n + e];
        const double rhs = delta[big * n + e];
        if (lhs < rhs - kCheckTolerance && report.passed) {
          report.passed = false;
          report.counterexample = Witness{all[small], all[big], ItemId{e}, {}, 0, lhs, rhs};
        }
      }
    });
  }
  return report;
}

CheckReport check_fully_adaptive_submodular(const UtilityFunction& f, const Prior& prior, const CheckCaps& caps) {
  check_caps(prior, caps, "fully adaptive submodularity");
  CheckReport report;
  report.check = "fully_adaptive_submodular";
  const PartialRealizationIndex index(prior);
  const auto& all = index.list();
  const std::size_t n = prior.num_items();

  std::vector<std::size_t> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) subsets.push_back(mask);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });

  OracleOptions options;
  options.caps.max_items = std::max(options.caps.max_items, n);
  options.caps.max_states = std::max(options.caps.max_states, prior.num_states());
  options.caps.max_budget = std::max(options.caps.max_budget, n);

  std::vector<double> best(all.size());
  for (std::size_t mask : subsets) {
    std::vector<ItemId> allowed;
    for (std::size_t e = 0; e < n; ++e)
      if (mask >> e & 1) allowed.emplace_back(e);
    for (std::size_t a = 1; a <= allowed.size(); ++a) {
      for (std::size_t i = 0; i < all.size(); ++i) best[i] = restricted_optimal(f, prior, all[i], allowed, a, options);
      for (std::size_t big = 0; big < all.size(); ++big) {
        index.for_each_sub(big, [&](std::size_t small) {
          ++report.pairs_checked;
          if (best[small] < best[big] - kCheckTolerance && report.passed) {
            report.passed = false;
            Witness w{all[small], all[big], std::nullopt, allowed, a, best[small], best[big]};
            if (allowed.size() == 1) w.item = allowed.front();
            report.counterexample = std::move(w);
          }
        });
      }
    }
  }
  return report;
}

SamplingHitResult lemma1_check(std::size_t n, std::size_t k, double epsilon, std::size_t trials, std::uint64_t seed) {
  if (k < 1 || k > n) throw std::invalid_argument("lemma1_check: need 1 <= k <= n");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("lemma1_check: epsilon must lie in (0, 1)");
  if (trials < 1) throw std::invalid_argument("lemma1_check: need at least one trial");

  SamplingHitResult r;
  const double raw = std::ceil(static_cast<double>(n) / static_cast<double>(k) * std::log(1.0 / epsilon));
  r.sample_size = static_cast<std::size_t>(std::clamp(raw, 1.0, static_cast<double>(n)));
  const std::size_t s = r.sample_size;

  // C(n-k, s) / C(n, s) = prod_{i<s} (n-k-i) / (n-i)
  double miss = 1.0;
  for (std::size_t i = 0; i < s && miss > 0.0; ++i)
    miss = (n - k < i + 1) ? 0.0 : miss * static_cast<double>(n - k - i) / static_cast<double>(n - i);
  r.exact = 1.0 - miss;
  r.bound = 1.0 - epsilon;
  r.with_replacement = 1.0 - std::exp(-static_cast<double>(s) * static_cast<double>(k) / static_cast<double>(n));
  r.std_error = std::sqrt(r.exact * (1.0 - r.exact) / static_cast<double>(trials));

  // Items [0, k) play the fixed optimal set.
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  Rng rng = make_stream(seed, 0);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    bool hit = false;
    for (std::size_t i = 0; i < s; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
      hit = hit || pool[i] < k;
    }
    hits += hit;
  }
  r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  return r;
}

}  // namespace adsub
