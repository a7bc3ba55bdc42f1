// adsub: experiments, checks, oracle queries and call-count benchmarks.
//
// Exit status: 0 success, 1 check failure, 2 usage error, 3 cap exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adsub/error.hpp"
#include "adsub/experiment.hpp"
#include "adsub/instance.hpp"
#include "adsub/oracle.hpp"
#include "adsub/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kCapExceeded = 3;

struct Common {
  std::string instance;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string mode = "exact";
  std::size_t samples = 10000;
  std::size_t replicates = 200;
  std::size_t workers = 1;
};

void add_common(CLI::App* cmd, Common& c, bool needs_instance) {
  auto* inst = cmd->add_option("--instance", c.instance, "instance file");
  if (needs_instance) inst->required();
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out, "output path, '-' for stdout");
  cmd->add_option("--mode", c.mode, "evaluation mode")->check(CLI::IsMember({"exact", "mc"}));
  cmd->add_option("--samples", c.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  cmd->add_option("--replicates", c.replicates, "replicates for randomized policies")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive submodular maximization: policies, exact oracle and property checks"};
  app.require_subcommand(1);

  Common common;

  auto* run = app.add_subcommand("run", "evaluate policies on an instance and write CSV");
  add_common(run, common, true);
  std::vector<std::string> policy_args;
  std::vector<double> eps_grid{0.1};
  run->add_option("--policy", policy_args, "policy descriptor, repeatable; ';' separates several");
  run->add_option("--eps", eps_grid, "epsilon list for asg/gasg without eps")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "exhaustive definition checks");
  add_common(verify, common, true);
  std::vector<std::string> checks{"monotone", "submodular", "fully"};
  verify->add_option("--checks", checks, "subset of monotone,submodular,fully")
      ->delimiter(',')
      ->check(CLI::IsMember({"monotone", "submodular", "fully"}));

  auto* oracle = app.add_subcommand("oracle", "optimal adaptive value by exhaustive recursion");
  add_common(oracle, common, true);

  auto* bench = app.add_subcommand("bench", "delta-call accounting against theoretical caps");
  add_common(bench, common, false);
  adsub::BenchConfig bc;
  bench->add_option("--policies", bc.policies, "asg,greedy,lazy_greedy,local,gasg")->delimiter(',');
  bench->add_option("--n", bc.ns, "item counts")->delimiter(',');
  bench->add_option("--k", bc.ks, "budgets")->delimiter(',');
  bench->add_option("--eps", bc.epsilons, "epsilon list")->delimiter(',');
  bench->add_option("--groups", bc.groups, "number of contiguous partition groups (0 = cardinality)");
  bench->add_option("--m", bc.m, "states per item")->check(CLI::PositiveNumber);
  bench->add_option("--universe", bc.universe, "coverage universe size")->check(CLI::PositiveNumber);
  bench->add_option("--density", bc.density, "coverage density")->check(CLI::Range(0.0, 1.0));

  auto* gen = app.add_subcommand("gen", "write an instance file");
  add_common(gen, common, false);
  std::string preset;
  adsub::CoverageConfig cc;
  std::size_t k = 2;
  std::size_t groups = 0;
  gen->add_option("--preset", preset, "instance_a or complementarity")
      ->check(CLI::IsMember({"instance_a", "complementarity"}));
  gen->add_option("--n", cc.n, "items");
  gen->add_option("--m", cc.m, "states per item");
  gen->add_option("--universe", cc.universe, "coverage universe size");
  gen->add_option("--density", cc.density, "coverage density");
  gen->add_option("--wmin", cc.weight_min, "minimum element weight");
  gen->add_option("--wmax", cc.weight_max, "maximum element weight");
  gen->add_option("--k", k, "budget (total limit for partitions)");
  gen->add_option("--groups", groups, "random partition into this many groups (0 = cardinality)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) {
      const auto inst = adsub::load_instance(common.instance);
      adsub::RunConfig rc;
      for (const auto& arg : policy_args)
        for (const auto& text : split(arg, ';'))
          if (!text.empty()) rc.policies.push_back(adsub::PolicySpec::parse(text));
      rc.epsilons = eps_grid;
      rc.mode = common.mode == "mc" ? adsub::ModeKind::MonteCarlo : adsub::ModeKind::Exact;
      rc.replicates = common.replicates;
      rc.samples = common.samples;
      rc.workers = common.workers;
      rc.seed = common.seed;
      emit(common.out, adsub::run_csv(inst, rc));
      return kOk;
    }
    if (verify->parsed()) {
      const auto inst = adsub::load_instance(common.instance);
      std::string report = "[";
      bool all_passed = true;
      for (std::size_t i = 0; i < checks.size(); ++i) {
        adsub::CheckReport r;
        if (checks[i] == "monotone")
          r = adsub::check_adaptive_monotone(*inst.utility, inst.prior);
        else if (checks[i] == "submodular")
          r = adsub::check_adaptive_submodular(*inst.utility, inst.prior);
        else
          r = adsub::check_fully_adaptive_submodular(*inst.utility, inst.prior);
        all_passed = all_passed && r.passed;
        report += (i ? ",\n" : "\n") + r.to_json();
      }
      report += "\n]\n";
      emit(common.out, report);
      return all_passed ? kOk : kCheckFailed;
    }
    if (oracle->parsed()) {
      const auto inst = adsub::load_instance(common.instance);
      const auto result = adsub::optimal_value(*inst.utility, inst.prior, inst.constraint);
      emit(common.out, "value,nodes_expanded,cache_hits\n" + adsub::format_real(result.value) + "," +
                           std::to_string(result.nodes_expanded) + "," + std::to_string(result.cache_hits) + "\n");
      return kOk;
    }
    if (bench->parsed()) {
      bc.seed = common.seed;
      emit(common.out, adsub::bench_csv(bc));
      return kOk;
    }
    if (gen->parsed()) {
      adsub::Instance inst;
      if (preset == "instance_a") {
        inst = adsub::instance_a(k);
      } else if (preset == "complementarity") {
        inst = adsub::complementarity_instance();
      } else {
        cc.seed = common.seed;
        adsub::ConstraintState constraint = adsub::ConstraintState::cardinality(k);
        if (groups > 0) {
          adsub::Rng rng = adsub::make_stream(common.seed, 1);
          constraint = adsub::ConstraintState::partition(adsub::random_partition(cc.n, groups, k, rng), cc.n);
        }
        inst = adsub::generate_coverage(cc, std::move(constraint));
      }
      emit(common.out, adsub::to_json(inst));
      return kOk;
    }
  } catch (const adsub::InstanceTooLarge& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const adsub::ExactModeUnavailable& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
