#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isslab/scenario.hpp"

namespace isslab {

struct BuiltinInfo {
  std::string name;
  std::string description;
};

std::vector<BuiltinInfo> list_builtins();
bool is_builtin(const std::string& name);
/// Throws ScenarioError for unknown names.
Scenario builtin_scenario(const std::string& name);

/// Seeded reaction-diffusion scenario with Dirichlet data: diffusivity
/// kappa(u) in [0.5, 2], reaction rate drawn from {sin, tanh, clipped
/// polynomial}, bounded forcing and boundary signals drawn from the five
/// signal kinds, and a synthesized sine certificate.
Scenario random_reaction_diffusion(std::uint64_t seed, int cells = 64, double horizon = 1.0);

}  // namespace isslab
