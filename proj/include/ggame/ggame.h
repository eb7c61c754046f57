/* ggame — threshold equilibria of heterogeneous-prior coordination games.
 *
 * C API of the shared library. All functions are thread-safe; a gg_game
 * handle is immutable after creation and may be shared across threads.
 * Functions return GG_OK on success; on failure gg_last_error() returns a
 * thread-local message describing the most recent error on this thread.
 */
#ifndef GGAME_H
#define GGAME_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GGAME_API __declspec(dllexport)
#else
#define GGAME_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gg_status {
  GG_OK = 0,
  GG_ERROR_INVALID_ARGUMENT = 1, /* null pointers, missing signal value, ... */
  GG_ERROR_PARSE = 2,            /* malformed or unknown-key JSON config */
  GG_ERROR_DOMAIN = 3,           /* parameter outside its domain */
  GG_ERROR_SOLVER = 4,           /* root enumeration failed (numerics fault) */
  GG_ERROR_SINGULARITY = 5,      /* derivative denominator vanished */
  GG_ERROR_UNSUPPORTED = 6,      /* operation undefined for this environment */
  GG_ERROR_BUFFER_TOO_SMALL = 7  /* out_count holds the required capacity */
} gg_status;

/* Opaque game instance: primitives plus the active informational
 * environment, created from a JSON configuration. */
typedef struct gg_game gg_game;

GGAME_API const char *gg_version(void);

/* Thread-local message for the last failing call on this thread. */
GGAME_API const char *gg_last_error(void);

/* JSON schema:
 *   { "cost": 0.5, "alpha_x": 1.0, "alpha_p": 1.0, "sigma_mu": 0.0,
 *     "mu_mean": 0.5,
 *     "env": { "type": "baseline" } }
 * env.type may also be "exogenous" (alpha_z, z), "market" (gamma,
 * sigma_eps, z) or "actions" (sigma_eps, s). Omitted primitives default to
 * the values above. */
GGAME_API gg_status gg_game_create_json(const char *json_text,
                                        gg_game **out_game);
GGAME_API void gg_game_destroy(gg_game *game);

typedef struct gg_uniqueness_report {
  double lhs;       /* closed-form condition value */
  double threshold; /* 1/sqrt(2*pi) */
  double margin;    /* lhs - threshold */
  int unique_for_all;
} gg_uniqueness_report;

/* The uniqueness condition matching the game's environment (the
 * per-realization threshold condition under an action signal). */
GGAME_API gg_status gg_check_uniqueness(const gg_game *game,
                                        gg_uniqueness_report *out);

typedef struct gg_strategy_report {
  double lhs_e11;
  double lhs_e12;
  double dzds_max; /* supremum of dZ/dS over theta; +inf near a fold */
  int condition_e11;
  int condition_e12;
  int strategies_unique;
} gg_strategy_report;

/* Uniqueness of equilibria in strategies; action-signal environments only
 * (GG_ERROR_UNSUPPORTED otherwise). */
GGAME_API gg_status gg_check_strategy(const gg_game *game,
                                      gg_strategy_report *out);

typedef struct gg_equilibrium {
  double theta_star;
  double psi_star;
  double slope_at_root;
  int degenerate;
} gg_equilibrium;

/* All threshold equilibria, ascending in theta_star. Environments with a
 * public signal require the realized value (z / s) in the config. Writes at
 * most capacity entries; *out_count always receives the full count. */
GGAME_API gg_status gg_solve(const gg_game *game, gg_equilibrium *out_buf,
                             size_t capacity, size_t *out_count);

typedef struct gg_market_equilibrium {
  double eta1;
  double eta2;
  double intercept;
  double alpha_z;
} gg_market_equilibrium;

/* Price coefficients of the market environment (GG_ERROR_UNSUPPORTED for
 * other environments). */
GGAME_API gg_status gg_solve_market(const gg_game *game,
                                    gg_market_equilibrium *out);

typedef struct gg_simulation_result {
  double attack_fraction_hat;
  double analytic_attack;
  double std_error;
  uint64_t n_agents;
  uint64_t seed;
  int within_band; /* |hat - analytic| <= 3 * std_error */
} gg_simulation_result;

/* Agent-level Monte Carlo draw of the attack mass at (theta, psi_star)
 * against the closed form. Deterministic in (seed, n). n >= 1000. */
GGAME_API gg_status gg_simulate_attack(const gg_game *game, double theta,
                                       double psi_star, uint64_t n,
                                       uint64_t seed,
                                       gg_simulation_result *out);

/* One line of the verification suite: `value` must satisfy `bound`
 * (discrepancy <= bound, or mismatch count == bound). `simulation` marks
 * Monte Carlo band checks. */
typedef void (*gg_verify_callback)(const char *check_name, int passed,
                                   int simulation, double value, double bound,
                                   void *user_data);

/* Runs the oracle cross-check suite (Monte Carlo bands, quadrature vs
 * closed forms, market identities). Counts of failing checks are written to
 * the out parameters when non-null. */
GGAME_API gg_status gg_verify(uint64_t seed, gg_verify_callback cb,
                              void *user_data, int *out_failed_analytic,
                              int *out_failed_simulation);

#ifdef __cplusplus
}
#endif

#endif /* GGAME_H */
