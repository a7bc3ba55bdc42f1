#include "adsub/utility.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_map>

#include "adsub/error.hpp"

namespace adsub {

CoverageUtility::CoverageUtility(std::vector<double> weights,
                                 std::vector<std::vector<std::vector<std::size_t>>> covers)
    : UtilityFunction(covers.size(), covers.empty() ? 0 : covers.front().size()),
      words_((weights.size() + 63) / 64),
      weights_(std::move(weights)),
      covers_(std::move(covers)) {
  if (covers_.empty()) throw ValidationError("coverage: no items");
  for (double w : weights_)
    if (!(w >= 0.0)) throw ValidationError("coverage: negative universe weight");
  const std::size_t m = num_states();
  bits_.assign(covers_.size() * m * words_, 0);
  for (std::size_t e = 0; e < covers_.size(); ++e) {
    if (covers_[e].size() != m) throw ValidationError("coverage: item " + std::to_string(e) + " has wrong state count");
    for (std::size_t o = 0; o < m; ++o) {
      for (std::size_t u : covers_[e][o]) {
        if (u >= weights_.size()) throw ValidationError("coverage: universe element out of range");
        bits_[(e * m + o) * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
      }
    }
  }
}

double CoverageUtility::total_weight() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum;
}

double CoverageUtility::compute(std::span<const ItemId> selected, const Realization& phi) const {
  const std::size_t m = num_states();
  std::vector<std::uint64_t> covered(words_, 0);
  for (ItemId e : selected) {
    const std::uint64_t* row = &bits_[(e.index * m + phi[e].index) * words_];
    for (std::size_t w = 0; w < words_; ++w) covered[w] |= row[w];
  }
  double value = 0.0;
  for (std::size_t w = 0; w < words_; ++w) {
    for (std::uint64_t bits = covered[w]; bits; bits &= bits - 1)
      value += weights_[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))];
  }
  return value;
}

TabularUtility::TabularUtility(std::vector<Realization> support, std::size_t num_states,
                               std::vector<std::vector<double>> values)
    : UtilityFunction(support.empty() ? 0 : support.front().size(), num_states),
      support_(std::move(support)),
      values_(std::move(values)) {
  const std::size_t n = num_items();
  if (n == 0) throw ValidationError("tabular: no items");
  if (n > kMaxItems) throw ValidationError("tabular: at most 12 items");
  if (values_.size() != (std::size_t{1} << n)) throw ValidationError("tabular: table must cover every subset");
  for (const auto& row : values_) {
    if (row.size() != support_.size()) throw ValidationError("tabular: table must cover every realization");
    for (double v : row)
      if (!(v >= 0.0)) throw ValidationError("tabular: negative utility value");
  }
}

double TabularUtility::compute(std::span<const ItemId> selected, const Realization& phi) const {
  std::size_t mask = 0;
  for (ItemId e : selected) mask |= std::size_t{1} << e.index;
  for (std::size_t r = 0; r < support_.size(); ++r)
    if (support_[r] == phi) return values_[mask][r];
  throw std::out_of_range("tabular: realization outside the table's support");
}

}  // namespace adsub
