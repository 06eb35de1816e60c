#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "isslab/builtins.hpp"
#include "isslab/scenario.hpp"

using namespace isslab;
using nlohmann::json;

TEST(Builtins, ListMatchesLookup) {
  const auto list = list_builtins();
  EXPECT_GE(list.size(), 5u);
  for (const auto& b : list) {
    EXPECT_TRUE(is_builtin(b.name));
    EXPECT_EQ(builtin_scenario(b.name).name, b.name);
  }
  EXPECT_FALSE(is_builtin("no-such-scenario"));
  EXPECT_THROW(builtin_scenario("no-such-scenario"), Error);
}

TEST(Builtins, EveryScenarioBuildsAnAdmissibleProblem) {
  for (const auto& b : list_builtins()) {
    const auto problem = build_problem(builtin_scenario(b.name));
    EXPECT_TRUE(validate_problem(problem).admissible()) << b.name;
  }
}

TEST(ScenarioJson, BuiltinsRoundTrip) {
  for (const auto& b : list_builtins()) {
    const json j = builtin_scenario(b.name);
    const Scenario back = j.get<Scenario>();
    EXPECT_EQ(json(back), j) << b.name;
  }
}

TEST(ScenarioJson, RandomScenariosRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const json j = random_reaction_diffusion(seed);
    EXPECT_EQ(json(j.get<Scenario>()), j);
  }
}

TEST(ScenarioJson, UnknownKeysAreRejected) {
  json j = builtin_scenario("heat-dirichlet-decay");
  j["colour"] = "blue";
  try {
    j.get<Scenario>();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::scenario_error);
  }
}

TEST(ScenarioJson, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "isslab_scenario_test.json";
  {
    std::ofstream os(path);
    os << json(builtin_scenario("robin-both-linear")).dump(2);
  }
  const auto s = load_scenario(path);
  EXPECT_EQ(s.name, "robin-both-linear");
  std::filesystem::remove(path);
  EXPECT_THROW(load_scenario(path), Error);
}

TEST(RandomScenario, DeterministicBySeed) {
  EXPECT_EQ(json(random_reaction_diffusion(42)), json(random_reaction_diffusion(42)));
  EXPECT_NE(json(random_reaction_diffusion(42)), json(random_reaction_diffusion(43)));
}

TEST(RandomScenario, DiffusivityWithinDeclaredBand) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = build_problem(random_reaction_diffusion(seed));
    const auto r = p.a.range(p.horizon);
    ASSERT_TRUE(r.has_value());
    EXPECT_GE(r->lo, 0.5 - 1e-12);
    EXPECT_LE(r->hi, 2.0 + 1e-12);
  }
}
