#pragma once

#include <vector>

#include "model.hpp"

namespace ggame {

struct SolveOptions {
  int grid_n = 4096;
  num::Tolerances tol{};
};

/// One-dimensional fixed-point residual of the threshold equation,
///   Phi(sqrt(alpha_psi)((alpha_z+alpha_p)/alpha * theta - (alpha_z/alpha) z
///       - (alpha_p/alpha) E[mu] - Phi^{-1}(c)/sqrt(alpha))) - theta,
/// with alpha = alpha_x + alpha_p + alpha_z. alpha_z = 0 gives the baseline.
double composite_residual(double theta, const GameParams& p, double alpha_z,
                          double z);

double residual_baseline(double theta, const GameParams& p);
double residual_exogenous(double theta, const GameParams& p, double alpha_z,
                          double z);

/// All threshold equilibria, sorted by theta_star. psi_star is recovered from
/// the indifference condition of the active environment. Throws SolverError
/// if no root is found or more than three non-degenerate crossings appear
/// (both indicate a numerics fault; the residual provably crosses 1..3 times).
std::vector<Equilibrium> solve_baseline(const GameParams& p,
                                        const SolveOptions& opt = {});
std::vector<Equilibrium> solve_exogenous(const GameParams& p, double alpha_z,
                                         double z, const SolveOptions& opt = {});

/// Environment dispatch covering all four settings.
std::vector<Equilibrium> solve(const GameParams& p, const Environment& env,
                               const SolveOptions& opt = {});

/// Closed-form uniqueness-for-all-parameter-pairs conditions.
UniquenessReport uniqueness_baseline(const GameParams& p);
UniquenessReport uniqueness_exogenous(const GameParams& p, double alpha_z);
UniquenessReport uniqueness_endogenous(const GameParams& p, double gamma,
                                       double sigma_eps);

/// Precision of the price signal: alpha_x^2 / (gamma * sigma_eps)^2.
double market_alpha_z(double alpha_x, double gamma, double sigma_eps);

/// The condition matching the active environment (threshold-uniqueness form
/// under ActionSignal).
UniquenessReport uniqueness(const GameParams& p, const Environment& env);

}  // namespace ggame
