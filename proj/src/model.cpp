#include "model.hpp"

#include <cmath>

namespace ggame {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

void validate(const GameParams& p) {
  require_finite(p.cost, "cost");
  require_finite(p.alpha_x, "alpha_x");
  require_finite(p.alpha_p, "alpha_p");
  require_finite(p.sigma_mu, "sigma_mu");
  require_finite(p.mu_mean, "mu_mean");
  if (!(p.cost > 0.0 && p.cost < 1.0))
    throw DomainError("cost must lie strictly in (0,1)");
  if (!(p.alpha_x >= 0.0)) throw DomainError("alpha_x must be >= 0");
  if (!(p.alpha_p > 0.0)) throw DomainError("alpha_p must be > 0");
  if (!(p.sigma_mu >= 0.0)) throw DomainError("sigma_mu must be >= 0");
}

void validate(const Environment& env) {
  std::visit(
      [](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Baseline>) {
          // nothing to check
        } else if constexpr (std::is_same_v<T, ExogenousSignal>) {
          require_finite(e.alpha_z, "alpha_z");
          require_finite(e.z, "z");
          if (!(e.alpha_z > 0.0)) throw DomainError("alpha_z must be > 0");
        } else if constexpr (std::is_same_v<T, EndogenousMarket>) {
          require_finite(e.gamma, "gamma");
          require_finite(e.sigma_eps, "sigma_eps");
          require_finite(e.z, "z");
          if (!(e.gamma > 0.0)) throw DomainError("gamma must be > 0");
          if (!(e.sigma_eps > 0.0)) throw DomainError("sigma_eps must be > 0");
        } else {
          require_finite(e.sigma_eps, "sigma_eps");
          require_finite(e.s, "s");
          if (!(e.sigma_eps > 0.0)) throw DomainError("sigma_eps must be > 0");
        }
      },
      env);
}

const char* environment_name(const Environment& env) {
  switch (env.index()) {
    case 0: return "baseline";
    case 1: return "exogenous";
    case 2: return "market";
    default: return "actions";
  }
}

double effective_alpha_z(const GameParams& p, const Environment& env) {
  return std::visit(
      [&p](const auto& e) -> double {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Baseline>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ExogenousSignal>) {
          return e.alpha_z;
        } else if constexpr (std::is_same_v<T, EndogenousMarket>) {
          const double gs = e.gamma * e.sigma_eps;
          return (p.alpha_x * p.alpha_x) / (gs * gs);
        } else {
          if (p.alpha_x == 0.0) return 0.0;  // an uninformative attack signal
          const double disp = p.alpha_x + p.alpha_p * p.alpha_p * p.sigma_mu * p.sigma_mu;
          return (p.alpha_x * p.alpha_x) / (e.sigma_eps * e.sigma_eps * disp);
        }
      },
      env);
}

BeliefAggregate belief_aggregate(const GameParams& p, const Environment& env) {
  const double alpha_z = effective_alpha_z(p, env);
  const double alpha = p.alpha_x + p.alpha_p + alpha_z;
  if (!(alpha > 0.0)) throw DomainError("all precisions are zero");
  const double psi_disp = p.alpha_x + p.alpha_p * p.alpha_p * p.sigma_mu * p.sigma_mu;
  if (!(psi_disp > 0.0))
    throw DomainError(
        "psi is degenerate: alpha_x = 0 and sigma_mu = 0 leave no cross-sectional dispersion");
  BeliefAggregate agg;
  agg.alpha = alpha;
  agg.alpha_psi = alpha * alpha / psi_disp;
  agg.w_x = p.alpha_x / alpha;
  agg.w_p = p.alpha_p / alpha;
  agg.psi_mean_intercept = agg.w_p * p.mu_mean;
  return agg;
}

double psi_of(double x, double mu, const BeliefAggregate& agg) {
  return agg.w_x * x + agg.w_p * mu;
}

UniquenessReport make_uniqueness_report(double lhs) {
  UniquenessReport r;
  r.lhs = lhs;
  r.threshold = num::kInvSqrt2Pi;
  r.unique_for_all = lhs >= r.threshold;
  r.margin = lhs - r.threshold;
  return r;
}

}  // namespace ggame
