#include "config_json.hpp"

#include <json.hpp>

namespace ggame {

namespace {

using nlohmann::json;

double number_at(const json& j, const char* key, double fallback,
                 bool* present = nullptr) {
  if (!j.contains(key)) {
    if (present) *present = false;
    return fallback;
  }
  if (present) *present = true;
  const json& v = j.at(key);
  if (!v.is_number())
    throw ConfigError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const char* where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) ok = true;
    if (!ok)
      throw ConfigError(std::string("unknown ") + where + " key '" +
                        item.key() + "'");
  }
}

}  // namespace

GameConfig parse_game_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"cost", "alpha_x", "alpha_p", "sigma_mu", "mu_mean", "env",
                  "simulate", "sweep"},
                 "config");

  GameConfig cfg;
  cfg.params.cost = number_at(j, "cost", cfg.params.cost);
  cfg.params.alpha_x = number_at(j, "alpha_x", cfg.params.alpha_x);
  cfg.params.alpha_p = number_at(j, "alpha_p", cfg.params.alpha_p);
  cfg.params.sigma_mu = number_at(j, "sigma_mu", cfg.params.sigma_mu);
  cfg.params.mu_mean = number_at(j, "mu_mean", cfg.params.mu_mean);
  validate(cfg.params);

  if (j.contains("env")) {
    const json& e = j.at("env");
    if (!e.is_object()) throw ConfigError("'env' must be an object");
    const std::string type = e.value("type", std::string("baseline"));
    if (type == "baseline") {
      reject_unknown(e, {"type"}, "env");
      cfg.env = Baseline{};
      cfg.signal_given = true;  // nothing required
    } else if (type == "exogenous") {
      reject_unknown(e, {"type", "alpha_z", "z"}, "env");
      ExogenousSignal env;
      if (!e.contains("alpha_z"))
        throw ConfigError("exogenous env requires 'alpha_z'");
      env.alpha_z = number_at(e, "alpha_z", 0.0);
      env.z = number_at(e, "z", 0.0, &cfg.signal_given);
      cfg.env = env;
    } else if (type == "market") {
      reject_unknown(e, {"type", "gamma", "sigma_eps", "z"}, "env");
      EndogenousMarket env;
      if (!e.contains("gamma") || !e.contains("sigma_eps"))
        throw ConfigError("market env requires 'gamma' and 'sigma_eps'");
      env.gamma = number_at(e, "gamma", 0.0);
      env.sigma_eps = number_at(e, "sigma_eps", 0.0);
      env.z = number_at(e, "z", 0.0, &cfg.signal_given);
      cfg.env = env;
    } else if (type == "actions") {
      reject_unknown(e, {"type", "sigma_eps", "s"}, "env");
      ActionSignal env;
      if (!e.contains("sigma_eps"))
        throw ConfigError("actions env requires 'sigma_eps'");
      env.sigma_eps = number_at(e, "sigma_eps", 0.0);
      env.s = number_at(e, "s", 0.0, &cfg.signal_given);
      cfg.env = env;
    } else {
      throw ConfigError("env.type must be one of baseline|exogenous|market|actions");
    }
  } else {
    cfg.signal_given = true;
  }
  validate(cfg.env);
  return cfg;
}

std::string game_config_to_json(const GameConfig& cfg) {
  json j;
  j["cost"] = cfg.params.cost;
  j["alpha_x"] = cfg.params.alpha_x;
  j["alpha_p"] = cfg.params.alpha_p;
  j["sigma_mu"] = cfg.params.sigma_mu;
  j["mu_mean"] = cfg.params.mu_mean;
  json e;
  std::visit(
      [&e](const auto& env) {
        using T = std::decay_t<decltype(env)>;
        if constexpr (std::is_same_v<T, Baseline>) {
          e["type"] = "baseline";
        } else if constexpr (std::is_same_v<T, ExogenousSignal>) {
          e["type"] = "exogenous";
          e["alpha_z"] = env.alpha_z;
          e["z"] = env.z;
        } else if constexpr (std::is_same_v<T, EndogenousMarket>) {
          e["type"] = "market";
          e["gamma"] = env.gamma;
          e["sigma_eps"] = env.sigma_eps;
          e["z"] = env.z;
        } else {
          e["type"] = "actions";
          e["sigma_eps"] = env.sigma_eps;
          e["s"] = env.s;
        }
      },
      cfg.env);
  j["env"] = e;
  return j.dump();
}

}  // namespace ggame
