#include "adsub/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "adsub/error.hpp"
#include "adsub/oracle.hpp"

namespace adsub {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string strip_last_column(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.rfind(',');
    out << (cut == std::string::npos ? line : line.substr(0, cut)) << '\n';
  }
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool takes_epsilon(const PolicySpec& spec) { return spec.name == "asg" || spec.name == "gasg"; }

std::vector<PolicySpec> expand_epsilons(const std::vector<PolicySpec>& policies, const std::vector<double>& grid) {
  std::vector<PolicySpec> out;
  for (const auto& spec : policies) {
    if (!takes_epsilon(spec) || spec.params.count("eps")) {
      out.push_back(spec);
      continue;
    }
    for (double eps : grid) {
      PolicySpec copy = spec;
      copy.params["eps"] = format_real(eps);
      out.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace

std::string run_csv(const Instance& inst, const RunConfig& config) {
  std::ostringstream out;
  out << kRunHeader << '\n';
  if (config.policies.empty()) return out.str();

  const auto specs = expand_epsilons(config.policies, config.epsilons);
  std::vector<PolicyPtr> policies;
  for (const auto& spec : specs) policies.push_back(make_policy(spec, inst.constraint));

  const UtilityFunction& f = *inst.utility;
  std::optional<double> optimal;
  CallCounts oracle_counts;
  double oracle_ms = 0.0;
  try {
    const auto before = f.counts();
    const auto start = Clock::now();
    optimal = optimal_value(f, inst.prior, inst.constraint).value;
    oracle_ms = elapsed_ms(start);
    oracle_counts = f.counts() - before;
  } catch (const InstanceTooLarge&) {
  }

  auto ratio = [&](double v) -> std::string {
    if (!optimal || *optimal == 0.0) return "";
    return format_real(v / *optimal);
  };

  for (std::size_t i = 0; i < policies.size(); ++i) {
    const std::uint64_t row_seed = derive_seed(config.seed, i);
    EvalMode mode;
    if (config.mode == ModeKind::Exact)
      mode = ExactMode{config.replicates, row_seed};
    else
      mode = MonteCarloMode{config.samples, row_seed, config.workers};
    const auto before = f.counts();
    const auto start = Clock::now();
    const Estimate est = expected_utility(f, inst.prior, *policies[i], mode, inst.constraint);
    const double ms = elapsed_ms(start);
    const auto used = f.counts() - before;
    const auto eps = specs[i].params.find("eps");
    out << specs[i].name << ',' << csv_field(policies[i]->descriptor().to_string()) << ','
        << (eps == specs[i].params.end() ? "" : eps->second) << ',' << format_real(est.value) << ','
        << format_real(est.std_error) << ',' << used.delta_calls << ',' << used.f_calls << ','
        << (optimal ? format_real(*optimal) : "") << ',' << ratio(est.value) << ',' << format_real(ms) << '\n';
  }
  if (optimal) {
    out << "oracle,,," << format_real(*optimal) << ",0," << oracle_counts.delta_calls << ','
        << oracle_counts.f_calls << ',' << format_real(*optimal) << ',' << ratio(*optimal) << ','
        << format_real(oracle_ms) << '\n';
  }
  return out.str();
}

PartitionSpec contiguous_partition(std::size_t n, std::size_t groups, std::size_t k) {
  if (groups == 0 || groups > n) throw std::invalid_argument("contiguous_partition: need 1 <= groups <= n");
  PartitionSpec spec;
  std::size_t next = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = n / groups + (g < n % groups ? 1 : 0);
    std::vector<ItemId> members;
    for (std::size_t j = 0; j < size; ++j) members.emplace_back(next++);
    const std::size_t limit = k / groups + (g < k % groups ? 1 : 0);
    spec.limits.push_back(std::min(limit, size));
    spec.groups.push_back(std::move(members));
  }
  return spec;
}

std::uint64_t theoretical_cap(const std::string& policy, std::size_t n, std::size_t k, const PartitionSpec* partition,
                              double epsilon) {
  auto ceil_sample = [&](std::size_t pool, std::size_t budget) {
    return static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(pool) / static_cast<double>(budget) * std::log(1.0 / epsilon)));
  };
  if (policy == "asg") return k * ceil_sample(n, k);
  if (policy == "greedy" || policy == "lazy_greedy") return static_cast<std::uint64_t>(n) * k;
  if (!partition) throw std::invalid_argument("policy '" + policy + "' needs a partition");
  std::uint64_t total = 0;
  for (std::size_t g = 0; g < partition->groups.size(); ++g) {
    const std::size_t d = partition->limits[g];
    if (d == 0) continue;
    if (policy == "gasg")
      total += d * ceil_sample(partition->groups[g].size(), d);
    else if (policy == "local")
      total += d * partition->groups[g].size();
    else
      throw std::invalid_argument("no cap for policy '" + policy + "'");
  }
  return total;
}

std::string bench_csv(const BenchConfig& config) {
  for (const auto& name : config.policies) {
    if (name != "asg" && name != "greedy" && name != "lazy_greedy" && name != "local" && name != "gasg")
      throw std::invalid_argument("unknown policy descriptor '" + name + "'");
    if ((name == "local" || name == "gasg") && config.groups == 0)
      throw std::invalid_argument("policy '" + name + "' needs --groups");
  }
  std::ostringstream out;
  out << kBenchHeader << '\n';
  std::size_t point = 0;
  for (std::size_t n : config.ns) {
    for (std::size_t k : config.ks) {
      if (k == 0 || k > n) throw std::invalid_argument("bench: need 1 <= k <= n");
      std::optional<PartitionSpec> partition;
      if (config.groups > 0) partition = contiguous_partition(n, config.groups, k);
      for (double eps : config.epsilons) {
        const std::uint64_t point_seed = derive_seed(config.seed, point++);
        CoverageConfig cc;
        cc.n = n;
        cc.m = config.m;
        cc.universe = config.universe;
        cc.density = config.density;
        cc.seed = point_seed;
        const Instance inst = generate_coverage(cc, ConstraintState::cardinality(k));
        Rng world = make_stream(point_seed, 1);
        const Realization phi = sample_realization(inst.prior, world);
        const std::uint64_t naive = partition ? theoretical_cap("local", n, k, &*partition, eps)
                                              : static_cast<std::uint64_t>(n) * k;

        for (std::size_t p = 0; p < config.policies.size(); ++p) {
          const std::string& name = config.policies[p];
          const bool grouped = name == "local" || name == "gasg";
          const ConstraintState constraint = grouped ? ConstraintState::partition(*partition, n)
                                                     : ConstraintState::cardinality(k);
          PolicySpec spec{name, {}, {}};
          if (name == "asg" || name == "gasg") spec.params["eps"] = format_real(eps);
          const PolicyPtr policy = make_policy(spec, constraint);
          Rng rng = make_stream(point_seed, 2 + p);
          inst.utility->reset_counts();
          const auto start = Clock::now();
          run_policy(*policy, *inst.utility, inst.prior, phi, constraint, rng, false);
          const double ms = elapsed_ms(start);
          const auto used = inst.utility->counts();
          out << name << ',' << n << ',' << k << ',' << config.groups << ','
              << (name == "asg" || name == "gasg" ? format_real(eps) : "") << ',' << used.delta_calls << ','
              << used.f_calls << ',' << theoretical_cap(name, n, k, grouped ? &*partition : nullptr, eps) << ','
              << naive << ',' << format_real(ms) << '\n';
        }
      }
    }
  }
  return out.str();
}

}  // namespace adsub
