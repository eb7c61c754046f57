#include "market.hpp"

#include <cmath>

#include "equilibria.hpp"

namespace ggame {

MarketEquilibrium solve_market(const GameParams& p, double gamma,
                               double sigma_eps) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  if (!(sigma_eps > 0.0)) throw DomainError("sigma_eps must be > 0");
  if (!(p.alpha_x > 0.0))
    throw DomainError("solve_market: alpha_x = 0 leaves the price uninformative");
  MarketEquilibrium me;
  me.alpha_z = market_alpha_z(p.alpha_x, gamma, sigma_eps);
  const double alpha = p.alpha_x + p.alpha_p + me.alpha_z;
  me.eta1 = (p.alpha_x + me.alpha_z) / alpha;
  me.eta2 = -(gamma * sigma_eps / p.alpha_x) * me.eta1;
  me.intercept = p.alpha_p * p.mu_mean / alpha;
  return me;
}

double demand(double x, double mu, double z, double price, const GameParams& p,
              double gamma, double alpha_z) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  const double alpha = p.alpha_x + p.alpha_p + alpha_z;
  const double posterior_mean =
      (p.alpha_x * x + p.alpha_p * mu + alpha_z * z) / alpha;
  return (posterior_mean - price) * alpha / gamma;
}

double clearing_residual(double theta, double eps, const MarketEquilibrium& me,
                         const GameParams& p, double gamma, double sigma_eps) {
  const double price = me.eta1 * theta + me.eta2 * eps + me.intercept;
  const double z = (price - me.intercept) / me.eta1;
  const double aggregate_demand =
      demand(theta, p.mu_mean, z, price, p, gamma, me.alpha_z);
  return aggregate_demand - sigma_eps * eps;
}

}  // namespace ggame
