#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "adsub/expectation.hpp"
#include "adsub/instance.hpp"
#include "adsub/policy.hpp"

namespace adsub {

enum class ModeKind { Exact, MonteCarlo };

struct RunConfig {
  std::vector<PolicySpec> policies;
  // Applied to asg / gasg descriptors that carry no eps of their own.
  std::vector<double> epsilons{0.1};
  ModeKind mode = ModeKind::Exact;
  std::size_t replicates = 200;
  std::size_t samples = 10000;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
};

inline constexpr const char* kRunHeader =
    "policy,params,epsilon,f_avg,std_error,delta_calls,f_calls,optimal,ratio,wall_ms";

// One row per (policy, epsilon) plus a trailing oracle row when the oracle
// caps allow it. An empty policy list yields the header only.
std::string run_csv(const Instance& inst, const RunConfig& config);

struct BenchConfig {
  std::vector<std::string> policies{"asg", "greedy"};
  std::vector<std::size_t> ns{1000};
  std::vector<std::size_t> ks{50};
  std::vector<double> epsilons{0.1};
  // 0 = cardinality; otherwise b contiguous groups sharing k.
  std::size_t groups = 0;
  std::size_t m = 2;
  std::size_t universe = 200;
  double density = 0.02;
  std::uint64_t seed = 0;
};

inline constexpr const char* kBenchHeader = "policy,n,k,groups,epsilon,delta_calls,f_calls,cap,naive,wall_ms";

// Single rollout per (grid point, policy) on a generated coverage instance;
// reports the measured delta counter next to the theoretical cap.
std::string bench_csv(const BenchConfig& config);

// b contiguous groups over [0, n) with limits splitting k as evenly as
// possible (each clamped to the group size).
PartitionSpec contiguous_partition(std::size_t n, std::size_t groups, std::size_t k);

// Policy-specific delta-call cap: k*ceil((n/k)ln(1/eps)) for asg,
// sum_i d_i*ceil((|B_i|/d_i)ln(1/eps)) for gasg, n*k or sum_i d_i|B_i| for
// the deterministic greedy variants.
std::uint64_t theoretical_cap(const std::string& policy, std::size_t n, std::size_t k, const PartitionSpec* partition,
                              double epsilon);

// %.12g
std::string format_real(double x);

// Drops the last column of every line (wall time).
std::string strip_last_column(const std::string& csv);

}  // namespace adsub
