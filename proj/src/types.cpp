#include "adsub/types.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace adsub {

Realization::Realization(std::initializer_list<std::size_t> s) {
  states.reserve(s.size());
  for (auto v : s) states.emplace_back(v);
}

PartialRealization::PartialRealization(std::initializer_list<Observation> obs)
    : PartialRealization(std::vector<Observation>(obs)) {}

PartialRealization::PartialRealization(std::vector<Observation> obs) : obs_(std::move(obs)) {
  std::sort(obs_.begin(), obs_.end());
  auto dup = std::adjacent_find(obs_.begin(), obs_.end(),
                                [](const Observation& a, const Observation& b) { return a.item == b.item; });
  if (dup != obs_.end())
    throw std::invalid_argument("partial realization observes item " + std::to_string(dup->item.index) +
                                " twice");
}

void PartialRealization::insert(ItemId e, StateId o) {
  auto it = std::lower_bound(obs_.begin(), obs_.end(), e,
                             [](const Observation& a, ItemId key) { return a.item < key; });
  if (it != obs_.end() && it->item == e)
    throw std::invalid_argument("item " + std::to_string(e.index) + " already observed");
  obs_.insert(it, Observation{e, o});
}

PartialRealization PartialRealization::with(ItemId e, StateId o) const {
  PartialRealization copy = *this;
  copy.insert(e, o);
  return copy;
}

std::optional<StateId> PartialRealization::state_of(ItemId e) const {
  auto it = std::lower_bound(obs_.begin(), obs_.end(), e,
                             [](const Observation& a, ItemId key) { return a.item < key; });
  if (it != obs_.end() && it->item == e) return it->state;
  return std::nullopt;
}

bool PartialRealization::contains(ItemId e) const { return state_of(e).has_value(); }

std::vector<ItemId> PartialRealization::domain() const {
  std::vector<ItemId> out;
  out.reserve(obs_.size());
  for (const auto& o : obs_) out.push_back(o.item);
  return out;
}

std::string PartialRealization::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    if (i) os << ',';
    os << '(' << obs_[i].item.index << ',' << obs_[i].state.index << ')';
  }
  os << '}';
  return os.str();
}

bool consistent(const PartialRealization& psi, const Realization& phi) {
  return std::all_of(psi.begin(), psi.end(), [&](const Observation& o) {
    return o.item.index < phi.size() && phi[o.item] == o.state;
  });
}

bool subrealization(const PartialRealization& psi, const PartialRealization& psi2) {
  return std::all_of(psi.begin(), psi.end(), [&](const Observation& o) {
    auto s = psi2.state_of(o.item);
    return s && *s == o.state;
  });
}

std::size_t hash_value(const PartialRealization& psi) {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto& o : psi) {
    h ^= (static_cast<std::size_t>(o.item.index) << 8) ^ o.state.index;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace adsub
