#pragma once

#include "model.hpp"

namespace ggame {

/// Linear rational-expectations price P = eta1*theta + eta2*eps + intercept
/// of the CARA-normal noise-trader market. Observing P is equivalent to a
/// fundamental signal Z = (P - intercept)/eta1 with precision alpha_z.
struct MarketEquilibrium {
  double eta1 = 0.0;       // > 0
  double eta2 = 0.0;       // < 0
  double intercept = 0.0;  // alpha_p E[mu] / alpha
  double alpha_z = 0.0;    // (eta1/eta2)^2 = alpha_x^2/(gamma sigma_eps)^2
};

/// Closed-form price coefficients. Throws DomainError when alpha_x = 0 (the
/// price then reveals nothing and the coefficients degenerate) or on
/// non-positive gamma / sigma_eps.
MarketEquilibrium solve_market(const GameParams& p, double gamma,
                               double sigma_eps);

/// Individual CARA demand given information (x, mu, z) and the price:
/// (posterior mean - price) * alpha / gamma.
double demand(double x, double mu, double z, double price, const GameParams& p,
              double gamma, double alpha_z);

/// Aggregate demand minus noise-trader supply at a realized (theta, eps);
/// identically zero at the solve_market coefficients.
double clearing_residual(double theta, double eps, const MarketEquilibrium& me,
                         const GameParams& p, double gamma, double sigma_eps);

}  // namespace ggame
