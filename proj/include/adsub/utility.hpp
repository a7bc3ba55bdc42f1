#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adsub/types.hpp"

namespace adsub {

struct CallCounts {
  std::uint64_t f_calls = 0;
  std::uint64_t delta_calls = 0;

  friend CallCounts operator-(const CallCounts& a, const CallCounts& b) {
    return {a.f_calls - b.f_calls, a.delta_calls - b.delta_calls};
  }
  friend bool operator==(const CallCounts&, const CallCounts&) = default;
};

// f(S, phi) >= 0 with instrumented call counters. `evaluate` counts one f
// call; the expectation engine bumps the delta counter once per
// conditional marginal computation.
class UtilityFunction {
 public:
  UtilityFunction(std::size_t num_items, std::size_t num_states) : n_(num_items), m_(num_states) {}
  virtual ~UtilityFunction() = default;
  UtilityFunction(const UtilityFunction&) = delete;
  UtilityFunction& operator=(const UtilityFunction&) = delete;

  std::size_t num_items() const { return n_; }
  std::size_t num_states() const { return m_; }

  double evaluate(std::span<const ItemId> selected, const Realization& phi) const {
    f_calls_.fetch_add(1, std::memory_order_relaxed);
    return compute(selected, phi);
  }

  // True when f(S, phi) reads phi only on S. Lets exact expectations
  // marginalize over the selected items alone.
  virtual bool local() const { return false; }
  virtual std::string kind() const = 0;

  CallCounts counts() const {
    return {f_calls_.load(std::memory_order_relaxed), delta_calls_.load(std::memory_order_relaxed)};
  }
  void reset_counts() const {
    f_calls_.store(0);
    delta_calls_.store(0);
  }
  void count_delta() const { delta_calls_.fetch_add(1, std::memory_order_relaxed); }

 protected:
  virtual double compute(std::span<const ItemId> selected, const Realization& phi) const = 0;

 private:
  std::size_t n_;
  std::size_t m_;
  mutable std::atomic<std::uint64_t> f_calls_{0};
  mutable std::atomic<std::uint64_t> delta_calls_{0};
};

// Weighted stochastic coverage: item e in state o covers a fixed subset of a
// weighted universe; f is the weight of the union over selected items.
class CoverageUtility final : public UtilityFunction {
 public:
  // covers[e][o] lists universe element ids.
  CoverageUtility(std::vector<double> weights, std::vector<std::vector<std::vector<std::size_t>>> covers);

  bool local() const override { return true; }
  std::string kind() const override { return "coverage"; }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::vector<std::vector<std::size_t>>>& covers() const { return covers_; }
  double total_weight() const;

 protected:
  double compute(std::span<const ItemId> selected, const Realization& phi) const override;

 private:
  std::size_t words_;
  std::vector<double> weights_;
  std::vector<std::vector<std::vector<std::size_t>>> covers_;
  // bits_[(e * m + o) * words_ + w]
  std::vector<std::uint64_t> bits_;
};

// Explicit table f(mask, realization index) over an explicit prior's
// support. Only for n <= 12; meant for building counterexamples.
class TabularUtility final : public UtilityFunction {
 public:
  static constexpr std::size_t kMaxItems = 12;

  // values[mask][r] is f for selected set `mask` under support[r].
  TabularUtility(std::vector<Realization> support, std::size_t num_states,
                 std::vector<std::vector<double>> values);

  std::string kind() const override { return "tabular"; }

  const std::vector<Realization>& support() const { return support_; }
  const std::vector<std::vector<double>>& values() const { return values_; }

 protected:
  double compute(std::span<const ItemId> selected, const Realization& phi) const override;

 private:
  std::vector<Realization> support_;
  std::vector<std::vector<double>> values_;
};

}  // namespace adsub
