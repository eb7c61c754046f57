#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace ggame::oracle {

/// Agent-level Monte Carlo draw of the attack mass against its closed form.
struct SimulationResult {
  double attack_fraction_hat = 0.0;  // empirical attack share
  double analytic_attack = 0.0;      // Phi(sqrt(alpha_psi)(psi* - E[psi|theta]))
  double std_error = 0.0;            // sqrt(A(1-A)/n), binomial
  std::uint64_t n_agents = 0;
  std::uint64_t seed = 0;
  double psi_sample_mean = 0.0;
  double psi_sample_var = 0.0;

  bool within_band() const;  // |hat - analytic| <= 3 * std_error
};

/// Draws mu_i ~ N(E[mu], sigma_mu^2) and x_i = theta + sigma_x xi_i, forms
/// psi_i, and attacks iff psi_i <= psi*. Identical seed gives identical
/// results regardless of thread count (fixed-size agent batches, one RNG
/// stream per batch, merged in batch order). Requires n >= 1000.
SimulationResult simulate_attack(double theta, double psi_star,
                                 const GameParams& p, const Environment& env,
                                 std::uint64_t n, std::uint64_t seed);

/// Fraction of theta_j ~ N(psi, 1/alpha) with theta_j <= theta_star; the
/// marginal agent's success probability, matching Phi(sqrt(alpha)(theta*-psi)).
double simulate_success_prob(double psi, double theta_star, const GameParams& p,
                             const Environment& env, std::uint64_t n,
                             std::uint64_t seed);

/// Closed-form attack mass at (theta, psi*) under env.
double analytic_attack_fraction(double theta, double psi_star,
                                const GameParams& p, const Environment& env);

/// Attack mass at theta* computed the long way: the marginal private-signal
/// cutoff x*(mu) from the indifference condition, integrated over the prior
/// population by Gauss-Hermite quadrature (baseline information set;
/// requires alpha_x > 0). At sigma_mu = 0 this is a single Phi evaluation.
double attack_mass_quadrature(double theta_star, const GameParams& p,
                              const num::QuadratureRule& rule);

/// E[exp(-t z^2)] for z ~ N(e_z, 1): (1+2t)^{-1/2} exp(-e_z^2 t / (1+2t)).
/// Requires t >= 0.
double mgf_noncentral_chi2(double t, double e_z);

/// The same expectation by Gauss-Hermite quadrature, centred on whichever
/// Gaussian factor is narrower so the residual factor stays smooth.
double mgf_noncentral_chi2_quadrature(double t, double e_z,
                                      const num::QuadratureRule& rule);

/// d(attack mass)/d(theta*) in closed form; uniqueness holds when its
/// supremum over theta* is <= 1. Requires alpha_x > 0.
double attack_mass_slope_closed_form(double theta_star, const GameParams& p);

/// The same derivative by quadrature over the prior population.
double attack_mass_slope_quadrature(double theta_star, const GameParams& p,
                                    const num::QuadratureRule& rule);

/// Supremum of the slope over theta*, attained where the exponential factor
/// is maximal.
double attack_mass_slope_supremum(const GameParams& p);

/// One named cross-check of the verification suite.
struct VerifyCheck {
  std::string name;
  bool pass = false;
  bool simulation = false;  // Monte Carlo band check (vs analytic identity)
  double value = 0.0;       // achieved discrepancy / statistic
  double bound = 0.0;       // tolerance it must satisfy
};

/// The full oracle cross-check suite: Monte Carlo bands, quadrature vs
/// closed forms, and market-clearing identities.
std::vector<VerifyCheck> run_verification(std::uint64_t seed);

}  // namespace ggame::oracle
