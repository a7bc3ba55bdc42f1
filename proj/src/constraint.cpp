#include "adsub/constraint.hpp"

#include <numeric>
#include <string>

#include "adsub/error.hpp"

namespace adsub {

void PartitionSpec::validate(std::size_t n) const {
  if (limits.size() != groups.size()) throw ValidationError("partition: one limit per group required");
  std::vector<bool> seen(n, false);
  for (const auto& g : groups) {
    for (ItemId e : g) {
      if (e.index >= n) throw ValidationError("partition: item " + std::to_string(e.index) + " out of range");
      if (seen[e.index]) throw ValidationError("partition: groups overlap at item " + std::to_string(e.index));
      seen[e.index] = true;
    }
  }
}

std::size_t PartitionSpec::total_limit() const { return std::accumulate(limits.begin(), limits.end(), std::size_t{0}); }

ConstraintState ConstraintState::cardinality(std::size_t k) {
  ConstraintState c;
  c.k_ = k;
  c.remaining_ = {k};
  return c;
}

ConstraintState ConstraintState::partition(PartitionSpec spec, std::size_t n) {
  spec.validate(n);
  ConstraintState c;
  c.k_ = spec.total_limit();
  c.group_index_.assign(n, -1);
  for (std::size_t g = 0; g < spec.groups.size(); ++g)
    for (ItemId e : spec.groups[g]) c.group_index_[e.index] = static_cast<int>(g);
  c.remaining_ = spec.limits;
  c.partition_ = std::move(spec);
  return c;
}

std::optional<std::size_t> ConstraintState::group_of(ItemId e) const {
  if (!partition_ || e.index >= group_index_.size() || group_index_[e.index] < 0) return std::nullopt;
  return static_cast<std::size_t>(group_index_[e.index]);
}

bool ConstraintState::can_select(ItemId e) const {
  if (!partition_) return remaining_[0] > 0;
  auto g = group_of(e);
  return g && remaining_[*g] > 0;
}

void ConstraintState::record(ItemId e) {
  if (!partition_) {
    --remaining_[0];
    return;
  }
  --remaining_[*group_of(e)];
}

bool ConstraintState::exhausted() const { return budget_total() == 0; }

std::size_t ConstraintState::budget_total() const {
  return std::accumulate(remaining_.begin(), remaining_.end(), std::size_t{0});
}

}  // namespace adsub
