#pragma once

#include <vector>

#include "equilibria.hpp"
#include "model.hpp"

namespace ggame {

/// Environment where agents observe the aggregate attack through
/// S = Phi^{-1}(A) + sigma_eps * eps. Observing S is informationally
/// equivalent to a fundamental signal of precision
/// alpha_z = alpha_x^2 / (sigma_eps^2 (alpha_x + alpha_p^2 sigma_mu^2)).
struct ActionSignalConfig {
  double sigma_eps = 1.0;
  double alpha_z = 0.0;  // implied, computed at construction
  double s = 0.0;        // realized signal
};

/// Validates and fills in the implied alpha_z. Throws DomainError on
/// sigma_eps <= 0.
ActionSignalConfig make_action_config(const GameParams& p, double sigma_eps,
                                      double s);

/// Root function in theta for a given realized S: Phi(arg(theta)) - c,
/// where arg collects the threshold, the Phi^{-1}(theta) feedback term and
/// the signal. Requires alpha_x > 0.
double residual_action(double theta, const GameParams& p,
                       const ActionSignalConfig& cfg);

/// psi* consistent with theta* under this environment's critical-mass map:
/// psi* = Phi^{-1}(theta*)/sqrt(alpha_psi) + w_x theta* + w_p E[mu].
double psi_star_action(double theta_star, const GameParams& p,
                       const ActionSignalConfig& cfg);

std::vector<Equilibrium> solve_action(const GameParams& p,
                                      const ActionSignalConfig& cfg,
                                      const SolveOptions& opt = {});

/// Per-realization threshold uniqueness:
/// lhs = ((alpha_x+alpha_z)/alpha_x) sqrt(alpha_x/alpha_p^2 + sigma_mu^2).
UniquenessReport threshold_uniqueness_action(const GameParams& p,
                                             const ActionSignalConfig& cfg);

/// Fundamental-equivalent signal Z(S) = (alpha/alpha_x)(psi*(S) - S/sqrt(alpha_psi)).
double equivalent_signal(double psi_star, double s, const GameParams& p,
                         const ActionSignalConfig& cfg);

/// dZ/dS along the implicit threshold branch, expressed through theta* in
/// (0,1). Throws SingularityError when the implicit-function denominator
/// magnitude drops below 1e-14.
double dZdS(double theta, const GameParams& p, const ActionSignalConfig& cfg);

/// Uniqueness of equilibria in strategies psi*(S). condition_e11 and
/// condition_e12 bound dZ/dS's numerator and denominator; their conjunction
/// defines strategies_unique. dZdS_max is the supremum over theta in (0,1)
/// on a 999-point grid in Phi^{-1} space plus the (finite, negative)
/// endpoint limit; +inf when the denominator changes sign.
struct StrategyReport {
  double lhs_e11 = 0.0;
  double lhs_e12 = 0.0;
  double dZdS_max = 0.0;
  bool condition_e11 = false;
  bool condition_e12 = false;
  bool strategies_unique = false;
};

StrategyReport strategy_uniqueness(const GameParams& p,
                                   const ActionSignalConfig& cfg);

}  // namespace ggame
