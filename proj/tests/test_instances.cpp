#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "adsub/error.hpp"
#include "adsub/expectation.hpp"
#include "adsub/instance.hpp"
#include "adsub/oracle.hpp"
#include "adsub/verify.hpp"
#include "support.hpp"

namespace adsub {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Generate, DeterministicBytes) {
  CoverageConfig c;
  c.seed = 42;
  const std::string first = to_json(generate_coverage(c, ConstraintState::cardinality(2)));
  const std::string second = to_json(generate_coverage(c, ConstraintState::cardinality(2)));
  EXPECT_EQ(first, second);
  c.seed = 43;
  EXPECT_NE(first, to_json(generate_coverage(c, ConstraintState::cardinality(2))));
}

TEST(Generate, WeightsOnGridAndInRange) {
  CoverageConfig c;
  c.seed = 5;
  c.universe = 50;
  const Instance inst = generate_coverage(c, ConstraintState::cardinality(2));
  for (double w : dynamic_cast<const CoverageUtility&>(*inst.utility).weights()) {
    EXPECT_GE(w, c.weight_min);
    EXPECT_LE(w, c.weight_max);
    EXPECT_EQ(w * 256.0, std::round(w * 256.0));
  }
}

TEST(Generate, DensityExtremes) {
  CoverageConfig c;
  c.density = 0.0;
  const Instance zero = generate_coverage(c, ConstraintState::cardinality(2));
  for (std::size_t e = 0; e < c.n; ++e) EXPECT_EQ(marginal_utility(*zero.utility, zero.prior, {}, ItemId{e}).value, 0.0);
  c.density = 1.0;
  const Instance full = generate_coverage(c, ConstraintState::cardinality(1));
  const double total = dynamic_cast<const CoverageUtility&>(*full.utility).total_weight();
  EXPECT_DOUBLE_EQ(optimal_value(*full.utility, full.prior, full.constraint).value, total);
}

TEST(Generate, InvalidParameters) {
  CoverageConfig c;
  c.density = 1.5;
  EXPECT_THROW(generate_coverage(c, ConstraintState::cardinality(1)), std::invalid_argument);
  c = {};
  c.n = 0;
  EXPECT_THROW(generate_coverage(c, ConstraintState::cardinality(1)), std::invalid_argument);
  c = {};
  c.weight_min = 3.0;
  EXPECT_THROW(generate_coverage(c, ConstraintState::cardinality(1)), std::invalid_argument);
}

TEST(Generate, CoverageInstancesAreAdaptiveSubmodular) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = testing::small_coverage(seed, 5, 2, 2 + seed % 2);
    EXPECT_TRUE(check_adaptive_monotone(*inst.utility, inst.prior).passed);
    EXPECT_TRUE(check_adaptive_submodular(*inst.utility, inst.prior).passed);
  }
}

TEST(RandomPartition, CoversItemsWithValidLimits) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 4 + t % 5, groups = 1 + t % 3, total = groups + t % (n - groups + 1);
    const PartitionSpec spec = random_partition(n, groups, total, rng);
    EXPECT_NO_THROW(spec.validate(n));
    EXPECT_EQ(spec.total_limit(), total);
    std::size_t covered = 0;
    for (std::size_t g = 0; g < groups; ++g) {
      covered += spec.groups[g].size();
      EXPECT_GE(spec.limits[g], 1u);
      EXPECT_LE(spec.limits[g], spec.groups[g].size());
    }
    EXPECT_EQ(covered, n);
  }
  EXPECT_THROW(random_partition(3, 4, 4, rng), std::invalid_argument);
}

TEST(Serialization, InstanceARoundTrip) {
  const Instance a = instance_a();
  const Instance back = from_json(to_json(a));
  EXPECT_EQ(back.n, a.n);
  EXPECT_EQ(back.m, a.m);
  EXPECT_EQ(back.prior.marginals(), a.prior.marginals());
  EXPECT_EQ(back.constraint.k(), 2u);
  EXPECT_EQ(back.name, "instance_a");
  const auto& cov = dynamic_cast<const CoverageUtility&>(*back.utility);
  EXPECT_EQ(cov.covers(), dynamic_cast<const CoverageUtility&>(*a.utility).covers());
  EXPECT_EQ(to_json(back), to_json(a));
}

TEST(Serialization, GeneratedAndTabularRoundTripByteExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = seed % 2 ? testing::small_coverage(seed, 7, 3, 3) : testing::small_partition(seed, 8, 3, 4);
    const std::string text = to_json(inst);
    EXPECT_EQ(to_json(from_json(text)), text);
  }
  const std::string c = to_json(complementarity_instance());
  EXPECT_EQ(to_json(from_json(c)), c);
}

TEST(Serialization, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "adsub_instance_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.json";
  save_instance(instance_a(), path);
  const std::string bytes = slurp(path);
  save_instance(load_instance(path), dir / "b.json");
  EXPECT_EQ(slurp(dir / "b.json"), bytes);
  std::filesystem::remove_all(dir);
}

TEST(Serialization, ShippedFixturesAreCanonical) {
  const std::filesystem::path data = ADSUB_DATA_DIR;
  EXPECT_EQ(slurp(data / "instance_a.json"), to_json(instance_a()));
  EXPECT_EQ(slurp(data / "complementarity.json"), to_json(complementarity_instance()));
}

std::string without(const std::string& text, const std::string& key) {
  auto j = from_json(text);
  std::string s = to_json(j);
  const auto pos = s.find("\"" + key + "\"");
  return s.substr(0, pos) + "\"x" + s.substr(pos + 1);
}

TEST(Serialization, Errors) {
  const std::string good = to_json(instance_a());
  EXPECT_THROW(from_json(without(good, "prior")), ParseError);
  try {
    from_json(without(good, "prior"));
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("prior"), std::string::npos);
  }
  EXPECT_THROW(from_json("{ not json"), ParseError);

  std::string bad = good;
  bad.replace(bad.find("0.5"), 3, "0.4");
  try {
    from_json(bad);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("prior normalization"), std::string::npos);
  }

  std::string out_of_range = good;
  out_of_range.replace(out_of_range.find("\"k\": 2"), 6, "\"k\": \"two\"");
  EXPECT_THROW(from_json(out_of_range), ParseError);

  const std::string overlap =
      R"({"n":2,"m":1,"prior":{"type":"independent","probs":[[1.0],[1.0]]},)"
      R"("utility":{"type":"coverage","weights":[1.0],"covers":[[[0]],[[0]]]},)"
      R"("constraint":{"type":"partition","groups":[[0,1],[1]],"limits":[1,1]}})";
  EXPECT_THROW(from_json(overlap), ValidationError);

  const std::string bad_elem =
      R"({"n":1,"m":1,"prior":{"type":"independent","probs":[[1.0]]},)"
      R"("utility":{"type":"coverage","weights":[1.0],"covers":[[[3]]]},)"
      R"("constraint":{"type":"cardinality","k":1}})";
  EXPECT_THROW(from_json(bad_elem), ValidationError);

  const std::string wrong_items =
      R"({"n":2,"m":1,"prior":{"type":"independent","probs":[[1.0]]},)"
      R"("utility":{"type":"coverage","weights":[1.0],"covers":[[[0]]]},)"
      R"("constraint":{"type":"cardinality","k":1}})";
  EXPECT_THROW(from_json(wrong_items), ValidationError);
}

}  // namespace
}  // namespace adsub
