#include "ggame/ggame.h"

#include <cstring>
#include <new>
#include <string>

#include "actions.hpp"
#include "config_json.hpp"
#include "equilibria.hpp"
#include "market.hpp"
#include "model.hpp"
#include "oracle.hpp"

struct gg_game {
  ggame::GameConfig cfg;
};

namespace {

thread_local std::string t_last_error;

gg_status fail(gg_status st, const char* msg) {
  t_last_error = msg;
  return st;
}

template <typename Fn>
gg_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ggame::ConfigError& e) {
    return fail(GG_ERROR_PARSE, e.what());
  } catch (const ggame::DomainError& e) {
    return fail(GG_ERROR_DOMAIN, e.what());
  } catch (const ggame::SolverError& e) {
    return fail(GG_ERROR_SOLVER, e.what());
  } catch (const ggame::SingularityError& e) {
    return fail(GG_ERROR_SINGULARITY, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GG_ERROR_INVALID_ARGUMENT, "out of memory");
  } catch (const std::exception& e) {
    return fail(GG_ERROR_INVALID_ARGUMENT, e.what());
  }
}

}  // namespace

extern "C" {

const char* gg_version(void) { return "1.0.0"; }

const char* gg_last_error(void) { return t_last_error.c_str(); }

gg_status gg_game_create_json(const char* json_text, gg_game** out_game) {
  if (!json_text || !out_game)
    return fail(GG_ERROR_INVALID_ARGUMENT, "null argument");
  *out_game = nullptr;
  return guarded([&]() {
    auto cfg = ggame::parse_game_config(json_text);
    *out_game = new gg_game{std::move(cfg)};
    return GG_OK;
  });
}

void gg_game_destroy(gg_game* game) { delete game; }

gg_status gg_check_uniqueness(const gg_game* game, gg_uniqueness_report* out) {
  if (!game || !out) return fail(GG_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const ggame::UniquenessReport r =
        ggame::uniqueness(game->cfg.params, game->cfg.env);
    out->lhs = r.lhs;
    out->threshold = r.threshold;
    out->margin = r.margin;
    out->unique_for_all = r.unique_for_all ? 1 : 0;
    return GG_OK;
  });
}

gg_status gg_check_strategy(const gg_game* game, gg_strategy_report* out) {
  if (!game || !out) return fail(GG_ERROR_INVALID_ARGUMENT, "null argument");
  const auto* env = std::get_if<ggame::ActionSignal>(&game->cfg.env);
  if (!env)
    return fail(GG_ERROR_UNSUPPORTED,
                "strategy uniqueness is defined for the actions environment only");
  return guarded([&]() {
    const auto cfg =
        ggame::make_action_config(game->cfg.params, env->sigma_eps, env->s);
    const ggame::StrategyReport r =
        ggame::strategy_uniqueness(game->cfg.params, cfg);
    out->lhs_e11 = r.lhs_e11;
    out->lhs_e12 = r.lhs_e12;
    out->dzds_max = r.dZdS_max;
    out->condition_e11 = r.condition_e11 ? 1 : 0;
    out->condition_e12 = r.condition_e12 ? 1 : 0;
    out->strategies_unique = r.strategies_unique ? 1 : 0;
    return GG_OK;
  });
}

gg_status gg_solve(const gg_game* game, gg_equilibrium* out_buf,
                   size_t capacity, size_t* out_count) {
  if (!game || !out_count || (capacity > 0 && !out_buf))
    return fail(GG_ERROR_INVALID_ARGUMENT, "null argument");
  *out_count = 0;
  if (!game->cfg.signal_given)
    return fail(GG_ERROR_INVALID_ARGUMENT,
                "this environment requires the realized signal value (z / s) "
                "in the config");
  return guarded([&]() {
    const auto eqs = ggame::solve(game->cfg.params, game->cfg.env);
    *out_count = eqs.size();
    const size_t n = std::min(capacity, eqs.size());
    for (size_t i = 0; i < n; ++i) {
      out_buf[i].theta_star = eqs[i].theta_star;
      out_buf[i].psi_star = eqs[i].psi_star;
      out_buf[i].slope_at_root = eqs[i].slope_at_root;
      out_buf[i].degenerate = eqs[i].degenerate ? 1 : 0;
    }
    if (eqs.size() > capacity)
      return fail(GG_ERROR_BUFFER_TOO_SMALL, "equilibrium buffer too small");
    return GG_OK;
  });
}

gg_status gg_solve_market(const gg_game* game, gg_market_equilibrium* out) {
  if (!game || !out) return fail(GG_ERROR_INVALID_ARGUMENT, "null argument");
  const auto* env = std::get_if<ggame::EndogenousMarket>(&game->cfg.env);
  if (!env)
    return fail(GG_ERROR_UNSUPPORTED,
                "price coefficients are defined for the market environment only");
  return guarded([&]() {
    const ggame::MarketEquilibrium me =
        ggame::solve_market(game->cfg.params, env->gamma, env->sigma_eps);
    out->eta1 = me.eta1;
    out->eta2 = me.eta2;
    out->intercept = me.intercept;
    out->alpha_z = me.alpha_z;
    return GG_OK;
  });
}

gg_status gg_simulate_attack(const gg_game* game, double theta,
                             double psi_star, uint64_t n, uint64_t seed,
                             gg_simulation_result* out) {
  if (!game || !out) return fail(GG_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto r = ggame::oracle::simulate_attack(theta, psi_star,
                                                  game->cfg.params,
                                                  game->cfg.env, n, seed);
    out->attack_fraction_hat = r.attack_fraction_hat;
    out->analytic_attack = r.analytic_attack;
    out->std_error = r.std_error;
    out->n_agents = r.n_agents;
    out->seed = r.seed;
    out->within_band = r.within_band() ? 1 : 0;
    return GG_OK;
  });
}

gg_status gg_verify(uint64_t seed, gg_verify_callback cb, void* user_data,
                    int* out_failed_analytic, int* out_failed_simulation) {
  return guarded([&]() {
    const auto checks = ggame::oracle::run_verification(seed);
    int failed_analytic = 0, failed_simulation = 0;
    for (const auto& c : checks) {
      if (!c.pass) (c.simulation ? failed_simulation : failed_analytic)++;
      if (cb)
        cb(c.name.c_str(), c.pass ? 1 : 0, c.simulation ? 1 : 0, c.value,
           c.bound, user_data);
    }
    if (out_failed_analytic) *out_failed_analytic = failed_analytic;
    if (out_failed_simulation) *out_failed_simulation = failed_simulation;
    return GG_OK;
  });
}

}  // extern "C"
