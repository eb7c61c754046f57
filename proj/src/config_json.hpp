#pragma once

#include <string>

#include "model.hpp"

namespace ggame {

/// A parsed CLI/API configuration: the game primitives plus the active
/// environment. signal_given records whether the realized signal value
/// (z / s) was present, since solving requires it while checking does not.
struct GameConfig {
  GameParams params;
  Environment env = Baseline{};
  bool signal_given = false;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses and validates a JSON configuration. Schema:
///   { "cost": .., "alpha_x": .., "alpha_p": .., "sigma_mu": .., "mu_mean": ..,
///     "env": { "type": "baseline" | "exogenous" | "market" | "actions",
///              "alpha_z": .., "z": .., "gamma": .., "sigma_eps": .., "s": .. } }
/// Unknown keys are rejected except the CLI sections "simulate" and "sweep".
/// Throws ConfigError on malformed input and DomainError on invalid values.
GameConfig parse_game_config(const std::string& json_text);

/// Canonical JSON (round-trips through parse_game_config).
std::string game_config_to_json(const GameConfig& cfg);

}  // namespace ggame
