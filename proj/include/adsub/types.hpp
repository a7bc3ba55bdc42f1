#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace adsub {

struct ItemId {
  std::uint32_t index = 0;

  constexpr ItemId() = default;
  constexpr explicit ItemId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
  friend constexpr auto operator<=>(ItemId, ItemId) = default;
};

struct StateId {
  std::uint32_t index = 0;

  constexpr StateId() = default;
  constexpr explicit StateId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
  friend constexpr auto operator<=>(StateId, StateId) = default;
};

struct Observation {
  ItemId item;
  StateId state;
  friend constexpr auto operator<=>(const Observation&, const Observation&) = default;
};

// A complete assignment of one state to every item.
struct Realization {
  std::vector<StateId> states;

  Realization() = default;
  explicit Realization(std::vector<StateId> s) : states(std::move(s)) {}
  Realization(std::initializer_list<std::size_t> s);

  std::size_t size() const { return states.size(); }
  StateId operator[](ItemId e) const { return states[e.index]; }
  StateId& operator[](ItemId e) { return states[e.index]; }

  friend bool operator==(const Realization&, const Realization&) = default;
  friend auto operator<=>(const Realization&, const Realization&) = default;
};

// Observed states for a subset of items, kept sorted by item so that two
// partial realizations with the same content compare (and hash) equal.
class PartialRealization {
 public:
  PartialRealization() = default;
  PartialRealization(std::initializer_list<Observation> obs);
  explicit PartialRealization(std::vector<Observation> obs);

  // Throws std::invalid_argument if the item is already observed.
  void insert(ItemId e, StateId o);
  PartialRealization with(ItemId e, StateId o) const;

  bool contains(ItemId e) const;
  std::optional<StateId> state_of(ItemId e) const;
  std::vector<ItemId> domain() const;

  std::span<const Observation> observations() const { return obs_; }
  std::size_t size() const { return obs_.size(); }
  bool empty() const { return obs_.empty(); }
  auto begin() const { return obs_.begin(); }
  auto end() const { return obs_.end(); }

  std::string to_string() const;

  friend bool operator==(const PartialRealization&, const PartialRealization&) = default;

 private:
  std::vector<Observation> obs_;
};

// psi ~ phi: phi agrees with psi on dom(psi).
bool consistent(const PartialRealization& psi, const Realization& phi);

// dom(psi) is contained in dom(psi2) and they agree on dom(psi).
bool subrealization(const PartialRealization& psi, const PartialRealization& psi2);

std::size_t hash_value(const PartialRealization& psi);

}  // namespace adsub

template <>
struct std::hash<adsub::PartialRealization> {
  std::size_t operator()(const adsub::PartialRealization& p) const { return adsub::hash_value(p); }
};

template <>
struct std::hash<adsub::Realization> {
  std::size_t operator()(const adsub::Realization& r) const noexcept {
    std::size_t h = r.states.size();
    for (auto s : r.states) h = h * 1000003u ^ s.index;
    return h;
  }
};
