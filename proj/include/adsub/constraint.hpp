#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "adsub/types.hpp"

namespace adsub {

// Disjoint groups B_1..B_b with per-group limits d_i. Items outside every
// group are never selectable.
struct PartitionSpec {
  std::vector<std::vector<ItemId>> groups;
  std::vector<std::size_t> limits;

  // Throws ValidationError if groups overlap, reference items >= n, or the
  // limit count differs from the group count.
  void validate(std::size_t n) const;
  std::size_t total_limit() const;
};

class ConstraintState {
 public:
  static ConstraintState cardinality(std::size_t k);
  static ConstraintState partition(PartitionSpec spec, std::size_t n);

  bool is_partition() const { return partition_.has_value(); }
  std::size_t k() const { return k_; }
  const PartitionSpec& partition_spec() const { return *partition_; }
  const std::vector<std::size_t>& remaining() const { return remaining_; }

  // Group index of e, or nullopt if e is in no group (partition only).
  std::optional<std::size_t> group_of(ItemId e) const;

  bool can_select(ItemId e) const;
  // Precondition: can_select(e).
  void record(ItemId e);
  bool exhausted() const;
  std::size_t budget_total() const;

 private:
  std::size_t k_ = 0;
  std::optional<PartitionSpec> partition_;
  std::vector<int> group_index_;
  std::vector<std::size_t> remaining_;
};

}  // namespace adsub
