#include "adsub/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "adsub/error.hpp"

namespace adsub {

using nlohmann::json;

void Instance::validate() const {
  if (n == 0 || m == 0) throw ValidationError("instance: n and m must be positive");
  if (prior.num_items() != n || prior.num_states() != m) throw ValidationError("instance: prior dimensions");
  if (!utility) throw ValidationError("instance: missing utility");
  if (utility->num_items() != n || utility->num_states() != m) throw ValidationError("instance: utility dimensions");
  if (const auto* tab = dynamic_cast<const TabularUtility*>(utility.get())) {
    if (prior.kind() != Prior::Kind::Explicit) throw ValidationError("instance: tabular utility needs an explicit prior");
    const auto& support = prior.support();
    if (tab->support().size() != support.size()) throw ValidationError("instance: tabular support mismatch");
    for (std::size_t r = 0; r < support.size(); ++r)
      if (!(tab->support()[r] == support[r].realization)) throw ValidationError("instance: tabular support mismatch");
  }
  if (constraint.is_partition()) constraint.partition_spec().validate(n);
}

Instance generate_coverage(const CoverageConfig& c, ConstraintState constraint) {
  if (c.n == 0 || c.m == 0 || c.universe == 0) throw std::invalid_argument("generate_coverage: sizes must be >= 1");
  if (!(c.density >= 0.0 && c.density <= 1.0)) throw std::invalid_argument("generate_coverage: density must lie in [0, 1]");
  if (!(c.weight_min >= 0.0 && c.weight_min <= c.weight_max))
    throw std::invalid_argument("generate_coverage: need 0 <= weight_min <= weight_max");

  Rng rng = make_stream(c.seed, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> weights(c.universe);
  for (auto& w : weights) {
    const double raw = c.weight_min + (c.weight_max - c.weight_min) * unit(rng);
    w = std::round(raw * 256.0) / 256.0;
  }

  std::vector<std::vector<std::vector<std::size_t>>> covers(c.n, std::vector<std::vector<std::size_t>>(c.m));
  for (auto& item : covers)
    for (auto& state : item)
      for (std::size_t u = 0; u < c.universe; ++u)
        if (unit(rng) < c.density) state.push_back(u);

  std::exponential_distribution<double> expo(1.0);
  std::vector<std::vector<double>> probs(c.n, std::vector<double>(c.m));
  for (auto& row : probs) {
    double sum = 0.0;
    for (auto& p : row) sum += (p = expo(rng));
    for (auto& p : row) p /= sum;
  }

  Instance inst;
  inst.n = c.n;
  inst.m = c.m;
  inst.prior = Prior::independent(std::move(probs));
  inst.utility = std::make_shared<CoverageUtility>(std::move(weights), std::move(covers));
  inst.constraint = std::move(constraint);
  inst.name = "coverage";
  inst.seed = c.seed;
  inst.validate();
  return inst;
}

PartitionSpec random_partition(std::size_t n, std::size_t groups, std::size_t total_limit, Rng& rng) {
  if (groups == 0 || groups > n) throw std::invalid_argument("random_partition: need 1 <= groups <= n");
  if (total_limit < groups || total_limit > n)
    throw std::invalid_argument("random_partition: need groups <= total_limit <= n");
  std::vector<ItemId> items;
  for (std::size_t e = 0; e < n; ++e) items.emplace_back(e);
  std::shuffle(items.begin(), items.end(), rng);

  std::vector<std::size_t> sizes(groups, 1);
  for (std::size_t extra = n - groups; extra > 0; --extra)
    ++sizes[std::uniform_int_distribution<std::size_t>(0, groups - 1)(rng)];

  PartitionSpec spec;
  std::size_t pos = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<ItemId> group(items.begin() + static_cast<std::ptrdiff_t>(pos),
                              items.begin() + static_cast<std::ptrdiff_t>(pos + sizes[g]));
    std::sort(group.begin(), group.end());
    spec.groups.push_back(std::move(group));
    pos += sizes[g];
  }
  spec.limits.assign(groups, 1);
  for (std::size_t extra = total_limit - groups; extra > 0;) {
    const std::size_t g = std::uniform_int_distribution<std::size_t>(0, groups - 1)(rng);
    if (spec.limits[g] < sizes[g]) {
      ++spec.limits[g];
      --extra;
    }
  }
  return spec;
}

Instance instance_a(std::size_t k) {
  Instance inst;
  inst.n = 2;
  inst.m = 2;
  inst.prior = Prior::independent({{0.5, 0.5}, {0.5, 0.5}});
  inst.utility = std::make_shared<CoverageUtility>(std::vector<double>{1.0, 1.0},
                                                   std::vector<std::vector<std::vector<std::size_t>>>{
                                                       {{0}, {0, 1}},
                                                       {{}, {1}},
                                                   });
  inst.constraint = ConstraintState::cardinality(k);
  inst.name = "instance_a";
  return inst;
}

Instance complementarity_instance() {
  Instance inst;
  inst.n = 2;
  inst.m = 1;
  const Realization only{0, 0};
  inst.prior = Prior::explicit_support({{only, 1.0}}, 1);
  inst.utility = std::make_shared<TabularUtility>(std::vector<Realization>{only}, 1,
                                                  std::vector<std::vector<double>>{{0.0}, {0.0}, {0.0}, {1.0}});
  inst.constraint = ConstraintState::cardinality(2);
  inst.name = "complementarity";
  return inst;
}

namespace {

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError("field '" + path + "': expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing field '" + (path.empty() ? "" : path + ".") + key + "'");
  return *it;
}

template <class T>
T as(const json& j, const std::string& path) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!j.is_number()) throw ParseError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) throw ParseError("");
    }
    return j.get<T>();
  } catch (const std::exception&) {
    throw ParseError("field '" + path + "': wrong type");
  }
}

template <class T>
std::vector<T> as_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError("field '" + path + "': expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as<T>(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Realization realization_of(const std::vector<std::size_t>& states) {
  Realization r;
  for (auto s : states) r.states.emplace_back(s);
  return r;
}

}  // namespace

std::string to_json(const Instance& inst) {
  json j;
  j["n"] = inst.n;
  j["m"] = inst.m;
  if (inst.prior.kind() == Prior::Kind::Independent) {
    j["prior"] = {{"type", "independent"}, {"probs", inst.prior.marginals()}};
  } else {
    json support = json::array();
    for (const auto& wr : inst.prior.support()) {
      std::vector<std::size_t> states;
      for (auto s : wr.realization.states) states.push_back(s.index);
      support.push_back({{"states", states}, {"p", wr.probability}});
    }
    j["prior"] = {{"type", "explicit"}, {"support", support}};
  }
  if (const auto* cov = dynamic_cast<const CoverageUtility*>(inst.utility.get())) {
    j["utility"] = {{"type", "coverage"}, {"weights", cov->weights()}, {"covers", cov->covers()}};
  } else if (const auto* tab = dynamic_cast<const TabularUtility*>(inst.utility.get())) {
    json values = json::object();
    for (std::size_t mask = 0; mask < tab->values().size(); ++mask) values[std::to_string(mask)] = tab->values()[mask];
    j["utility"] = {{"type", "tabular"}, {"values", values}};
  } else {
    throw std::invalid_argument("to_json: utility kind '" + inst.utility->kind() + "' is not serializable");
  }
  if (inst.constraint.is_partition()) {
    const auto& spec = inst.constraint.partition_spec();
    json groups = json::array();
    for (const auto& g : spec.groups) {
      std::vector<std::size_t> ids;
      for (ItemId e : g) ids.push_back(e.index);
      groups.push_back(ids);
    }
    j["constraint"] = {{"type", "partition"}, {"groups", groups}, {"limits", spec.limits}};
  } else {
    j["constraint"] = {{"type", "cardinality"}, {"k", inst.constraint.k()}};
  }
  json meta = json::object();
  if (!inst.name.empty()) meta["name"] = inst.name;
  if (inst.seed) meta["seed"] = *inst.seed;
  if (!meta.empty()) j["meta"] = meta;
  return j.dump(2) + "\n";
}

Instance from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
  Instance inst;
  inst.n = as<std::size_t>(field(j, "n", ""), "n");
  inst.m = as<std::size_t>(field(j, "m", ""), "m");

  const json& prior = field(j, "prior", "");
  const std::string prior_type = as<std::string>(field(prior, "type", "prior"), "prior.type");
  if (prior_type == "independent") {
    const json& probs = field(prior, "probs", "prior");
    if (!probs.is_array()) throw ParseError("field 'prior.probs': expected an array");
    std::vector<std::vector<double>> rows;
    for (std::size_t e = 0; e < probs.size(); ++e)
      rows.push_back(as_vector<double>(probs[e], "prior.probs[" + std::to_string(e) + "]"));
    inst.prior = Prior::independent(std::move(rows));
  } else if (prior_type == "explicit") {
    const json& support = field(prior, "support", "prior");
    if (!support.is_array()) throw ParseError("field 'prior.support': expected an array");
    std::vector<WeightedRealization> list;
    for (std::size_t r = 0; r < support.size(); ++r) {
      const std::string path = "prior.support[" + std::to_string(r) + "]";
      list.push_back({realization_of(as_vector<std::size_t>(field(support[r], "states", path), path + ".states")),
                      as<double>(field(support[r], "p", path), path + ".p")});
    }
    inst.prior = Prior::explicit_support(std::move(list), inst.m);
  } else {
    throw ParseError("field 'prior.type': unknown prior type '" + prior_type + "'");
  }

  const json& utility = field(j, "utility", "");
  const std::string utility_type = as<std::string>(field(utility, "type", "utility"), "utility.type");
  if (utility_type == "coverage") {
    auto weights = as_vector<double>(field(utility, "weights", "utility"), "utility.weights");
    const json& covers = field(utility, "covers", "utility");
    if (!covers.is_array()) throw ParseError("field 'utility.covers': expected an array");
    std::vector<std::vector<std::vector<std::size_t>>> sets(covers.size());
    for (std::size_t e = 0; e < covers.size(); ++e) {
      const std::string path = "utility.covers[" + std::to_string(e) + "]";
      if (!covers[e].is_array()) throw ParseError("field '" + path + "': expected an array");
      for (std::size_t o = 0; o < covers[e].size(); ++o)
        sets[e].push_back(as_vector<std::size_t>(covers[e][o], path + "[" + std::to_string(o) + "]"));
    }
    inst.utility = std::make_shared<CoverageUtility>(std::move(weights), std::move(sets));
  } else if (utility_type == "tabular") {
    if (inst.prior.kind() != Prior::Kind::Explicit)
      throw ValidationError("instance: tabular utility needs an explicit prior");
    const json& values = field(utility, "values", "utility");
    if (!values.is_object()) throw ParseError("field 'utility.values': expected an object");
    if (inst.n > TabularUtility::kMaxItems) throw ValidationError("tabular: at most 12 items");
    std::vector<std::vector<double>> table(std::size_t{1} << inst.n);
    std::vector<bool> seen(table.size(), false);
    for (const auto& [key, row] : values.items()) {
      std::size_t mask = 0;
      try {
        std::size_t used = 0;
        mask = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("field 'utility.values': bad subset mask '" + key + "'");
      }
      if (mask >= table.size()) throw ValidationError("tabular: subset mask " + key + " out of range");
      table[mask] = as_vector<double>(row, "utility.values." + key);
      seen[mask] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw ValidationError("tabular: table must cover every subset");
    std::vector<Realization> support;
    for (const auto& wr : inst.prior.support()) support.push_back(wr.realization);
    inst.utility = std::make_shared<TabularUtility>(std::move(support), inst.m, std::move(table));
  } else {
    throw ParseError("field 'utility.type': unknown utility type '" + utility_type + "'");
  }

  const json& constraint = field(j, "constraint", "");
  const std::string constraint_type = as<std::string>(field(constraint, "type", "constraint"), "constraint.type");
  if (constraint_type == "cardinality") {
    inst.constraint = ConstraintState::cardinality(as<std::size_t>(field(constraint, "k", "constraint"), "constraint.k"));
  } else if (constraint_type == "partition") {
    PartitionSpec spec;
    const json& groups = field(constraint, "groups", "constraint");
    if (!groups.is_array()) throw ParseError("field 'constraint.groups': expected an array");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<ItemId> ids;
      for (auto e : as_vector<std::size_t>(groups[g], "constraint.groups[" + std::to_string(g) + "]")) ids.emplace_back(e);
      spec.groups.push_back(std::move(ids));
    }
    spec.limits = as_vector<std::size_t>(field(constraint, "limits", "constraint"), "constraint.limits");
    inst.constraint = ConstraintState::partition(std::move(spec), inst.n);
  } else {
    throw ParseError("field 'constraint.type': unknown constraint type '" + constraint_type + "'");
  }

  if (auto it = j.find("meta"); it != j.end()) {
    if (auto name = it->find("name"); name != it->end()) inst.name = as<std::string>(*name, "meta.name");
    if (auto seed = it->find("seed"); seed != it->end()) inst.seed = as<std::uint64_t>(*seed, "meta.seed");
  }
  inst.validate();
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  out << to_json(inst);
}

}  // namespace adsub
