#pragma once

#include <variant>

#include "numerics.hpp"

namespace ggame {

using num::DomainError;
using num::SingularityError;
using num::SolverError;

/// Primitives of one game instance. The information structure is
/// parameterized in precisions: alpha_x = 1/sigma_x^2 for the private signal,
/// alpha_p = 1/sigma_p^2 for the subjective prior. Prior means are dispersed
/// across the population with standard deviation sigma_mu around mu_mean.
struct GameParams {
  double cost = 0.5;      // attack cost c, in (0,1)
  double alpha_x = 1.0;   // private-signal precision, >= 0
  double alpha_p = 1.0;   // prior precision, > 0
  double sigma_mu = 0.0;  // std dev of prior means, >= 0
  double mu_mean = 0.5;   // population mean of prior means, E[mu]
};

/// Throws DomainError on invalid primitives.
void validate(const GameParams& p);

struct Baseline {};
struct ExogenousSignal {
  double alpha_z = 1.0;  // public-signal precision, > 0
  double z = 0.0;        // realized signal
};
struct EndogenousMarket {
  double gamma = 1.0;      // CARA risk aversion, > 0
  double sigma_eps = 1.0;  // noise-trader supply std, > 0
  double z = 0.0;          // realized price signal
};
struct ActionSignal {
  double sigma_eps = 1.0;  // signal noise std, > 0
  double s = 0.0;          // realized signal
};

using Environment =
    std::variant<Baseline, ExogenousSignal, EndogenousMarket, ActionSignal>;

void validate(const Environment& env);

const char* environment_name(const Environment& env);

/// Precision the public signal contributes to posteriors under env.
/// Baseline: 0. Exogenous: as given. Market: alpha_x^2/(gamma*sigma_eps)^2.
/// Actions: alpha_x^2/(sigma_eps^2 (alpha_x + alpha_p^2 sigma_mu^2)).
double effective_alpha_z(const GameParams& p, const Environment& env);

/// Posterior and cross-sectional precision algebra shared by every solver:
///   alpha     = alpha_x + alpha_p + alpha_z(env)
///   alpha_psi = alpha^2 / (alpha_x + alpha_p^2 sigma_mu^2)
/// psi | theta ~ N(w_x*theta + w_p*E[mu], 1/alpha_psi).
struct BeliefAggregate {
  double alpha = 0.0;
  double alpha_psi = 0.0;
  double w_x = 0.0;                 // alpha_x / alpha
  double w_p = 0.0;                 // alpha_p / alpha
  double psi_mean_intercept = 0.0;  // w_p * E[mu]
};

BeliefAggregate belief_aggregate(const GameParams& p, const Environment& env);

/// Belief statistic psi = (alpha_x/alpha) x + (alpha_p/alpha) mu.
double psi_of(double x, double mu, const BeliefAggregate& agg);

/// One threshold equilibrium (theta*, psi*).
struct Equilibrium {
  double theta_star = 0.0;
  double psi_star = 0.0;
  double slope_at_root = 0.0;  // residual derivative at theta*
  bool degenerate = false;     // tangency (double root)
};

/// Closed-form uniqueness condition value against the 1/sqrt(2*pi) threshold.
struct UniquenessReport {
  double lhs = 0.0;
  double threshold = num::kInvSqrt2Pi;
  bool unique_for_all = false;  // lhs >= threshold
  double margin = 0.0;          // lhs - threshold
};

UniquenessReport make_uniqueness_report(double lhs);

}  // namespace ggame
