#include "actions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ggame {

namespace {

struct ActionTerms {
  double alpha;
  double sqrt_alpha;
  double inv_sqrt_alpha_psi;  // sqrt(alpha_x + alpha_p^2 sigma_mu^2) / alpha
  double load_theta;          // alpha_p / alpha
  double feedback;            // (alpha_x+alpha_z)/alpha_x * inv_sqrt_alpha_psi
  double prior_term;          // (alpha_x+alpha_z) alpha_p / (alpha_x alpha) * E[mu]
  double signal_term;         // alpha_z/alpha_x * inv_sqrt_alpha_psi * S
};

ActionTerms action_terms(const GameParams& p, const ActionSignalConfig& cfg) {
  if (!(p.alpha_x > 0.0))
    throw DomainError("action-signal environment requires alpha_x > 0");
  ActionTerms t;
  t.alpha = p.alpha_x + p.alpha_p + cfg.alpha_z;
  t.sqrt_alpha = std::sqrt(t.alpha);
  const double psi_disp =
      p.alpha_x + p.alpha_p * p.alpha_p * p.sigma_mu * p.sigma_mu;
  t.inv_sqrt_alpha_psi = std::sqrt(psi_disp) / t.alpha;
  t.load_theta = p.alpha_p / t.alpha;
  const double ratio = (p.alpha_x + cfg.alpha_z) / p.alpha_x;
  t.feedback = ratio * t.inv_sqrt_alpha_psi;
  t.prior_term = ratio * p.alpha_p / t.alpha * p.mu_mean;
  t.signal_term = cfg.alpha_z / p.alpha_x * t.inv_sqrt_alpha_psi * cfg.s;
  return t;
}

// arg as a function of y = Phi^{-1}(theta).
double action_arg(double y, const ActionTerms& t) {
  return t.sqrt_alpha * (t.load_theta * num::normal_cdf(y) - t.feedback * y -
                         t.prior_term + t.signal_term);
}

}  // namespace

ActionSignalConfig make_action_config(const GameParams& p, double sigma_eps,
                                      double s) {
  if (!(sigma_eps > 0.0) || !std::isfinite(sigma_eps))
    throw DomainError("sigma_eps must be > 0");
  if (!std::isfinite(s)) throw DomainError("s must be finite");
  ActionSignalConfig cfg;
  cfg.sigma_eps = sigma_eps;
  cfg.s = s;
  if (p.alpha_x == 0.0) {
    cfg.alpha_z = 0.0;  // the attack carries no private information
  } else {
    const double psi_disp =
        p.alpha_x + p.alpha_p * p.alpha_p * p.sigma_mu * p.sigma_mu;
    cfg.alpha_z = (p.alpha_x * p.alpha_x) / (sigma_eps * sigma_eps * psi_disp);
  }
  return cfg;
}

double residual_action(double theta, const GameParams& p,
                       const ActionSignalConfig& cfg) {
  const ActionTerms t = action_terms(p, cfg);
  return num::normal_cdf(action_arg(num::normal_quantile(theta), t)) - p.cost;
}

double psi_star_action(double theta_star, const GameParams& p,
                       const ActionSignalConfig& cfg) {
  const ActionTerms t = action_terms(p, cfg);
  return num::normal_quantile(theta_star) * t.inv_sqrt_alpha_psi +
         p.alpha_x / t.alpha * theta_star + t.load_theta * p.mu_mean;
}

std::vector<Equilibrium> solve_action(const GameParams& p,
                                      const ActionSignalConfig& cfg,
                                      const SolveOptions& opt) {
  const ActionTerms t = action_terms(p, cfg);
  // Scan in y = Phi^{-1}(theta); a uniform y grid resolves the boundary
  // behaviour of the Phi^{-1} feedback term far better than a theta grid.
  const auto g = [&](double y) {
    return num::normal_cdf(action_arg(y, t)) - p.cost;
  };
  const double clip = opt.tol.domain_clip;
  const double y_hi = num::normal_quantile(1.0 - clip);
  const double y_lo = -y_hi;
  auto roots = num::enumerate_roots(g, y_lo, y_hi, opt.grid_n, opt.tol);

  // The feedback term dominates in the far tails, so g -> 1-c > 0 as
  // y -> -inf and g -> -c < 0 as y -> +inf. If the sign at a scan end does
  // not match that limit, the outermost root lies beyond it; extend until
  // the argument is saturated.
  const double span =
      (std::abs(t.load_theta) + std::abs(t.prior_term) + std::abs(t.signal_term) +
       40.0 / t.sqrt_alpha) /
      std::max(t.feedback, std::numeric_limits<double>::min());
  const double g_lo = g(y_lo), g_hi = g(y_hi);
  if (g_lo < 0.0) {
    const double y_far = -span - 1.0;
    const double g_far = g(y_far);
    if (g_far > 0.0)
      roots.insert(roots.begin(),
                   num::refine_root(g, {y_far, y_lo, g_far, g_lo}, opt.tol));
  }
  if (g_hi > 0.0) {
    const double y_far = span + 1.0;
    const double g_far = g(y_far);
    if (g_far < 0.0)
      roots.push_back(num::refine_root(g, {y_hi, y_far, g_hi, g_far}, opt.tol));
  }

  std::vector<Equilibrium> out;
  int crossings = 0;
  for (const num::Root& r : roots) {
    double theta = num::normal_cdf(r.x);
    theta = std::clamp(theta, std::numeric_limits<double>::denorm_min(),
                       std::nextafter(1.0, 0.0));
    Equilibrium eq;
    eq.theta_star = theta;
    eq.psi_star = r.x * t.inv_sqrt_alpha_psi + p.alpha_x / t.alpha * theta +
                  t.load_theta * p.mu_mean;
    // d/dtheta of Phi(arg) - c through the chain y(theta).
    const double pdf_y = num::normal_pdf(r.x);
    const double darg_dtheta =
        t.sqrt_alpha *
        (t.load_theta - (pdf_y > 0.0
                             ? t.feedback / pdf_y
                             : std::numeric_limits<double>::infinity()));
    eq.slope_at_root = num::normal_pdf(action_arg(r.x, t)) * darg_dtheta;
    eq.degenerate = r.degenerate;
    if (!r.degenerate) ++crossings;
    out.push_back(eq);
  }
  if (out.empty())
    throw SolverError(
        "no action-signal threshold root found; the residual has opposite "
        "signs in the tails, so this is a numerics fault");
  if (crossings > 3)
    throw SolverError("more than three threshold crossings: numerics fault");
  return out;
}

UniquenessReport threshold_uniqueness_action(const GameParams& p,
                                             const ActionSignalConfig& cfg) {
  if (!(p.alpha_x > 0.0))
    throw DomainError("action-signal environment requires alpha_x > 0");
  const double ratio = (p.alpha_x + cfg.alpha_z) / p.alpha_x;
  const double lhs =
      ratio * std::sqrt(p.alpha_x / (p.alpha_p * p.alpha_p) +
                        p.sigma_mu * p.sigma_mu);
  return make_uniqueness_report(lhs);
}

double equivalent_signal(double psi_star, double s, const GameParams& p,
                         const ActionSignalConfig& cfg) {
  const ActionTerms t = action_terms(p, cfg);
  const double load = t.alpha / p.alpha_x;
  return load * psi_star - load * t.inv_sqrt_alpha_psi * s;
}

double dZdS(double theta, const GameParams& p, const ActionSignalConfig& cfg) {
  if (!(theta > 0.0 && theta < 1.0))
    throw DomainError("dZdS: theta must lie in (0,1)");
  if (!(p.alpha_x > 0.0))
    throw DomainError("action-signal environment requires alpha_x > 0");
  const double pdf_y = num::normal_pdf(num::normal_quantile(theta));
  const double psi_disp_rt =
      std::sqrt(p.alpha_x + p.alpha_p * p.alpha_p * p.sigma_mu * p.sigma_mu);
  const double numer = -(p.alpha_p + cfg.alpha_z) * pdf_y + psi_disp_rt;
  const double denom =
      pdf_y * p.alpha_p * p.alpha_x / psi_disp_rt - (p.alpha_x + cfg.alpha_z);
  if (std::abs(denom) < 1e-14)
    throw SingularityError("dZdS: implicit-function denominator vanishes");
  return numer / denom;
}

StrategyReport strategy_uniqueness(const GameParams& p,
                                   const ActionSignalConfig& cfg) {
  if (!(p.alpha_x > 0.0))
    throw DomainError("action-signal environment requires alpha_x > 0");
  StrategyReport rep;
  const double az = cfg.alpha_z;
  const double denom = p.alpha_p + az;
  rep.lhs_e11 = std::sqrt(p.alpha_x / (denom * denom) +
                          p.sigma_mu * p.sigma_mu / (1.0 + az / p.alpha_p));
  const double ratio2 = (p.alpha_x + az) * (p.alpha_x + az);
  rep.lhs_e12 = std::sqrt(ratio2 / (p.alpha_x * p.alpha_p * p.alpha_p) +
                          p.sigma_mu * p.sigma_mu * ratio2 /
                              (p.alpha_x * p.alpha_x));
  rep.condition_e11 = rep.lhs_e11 >= num::kInvSqrt2Pi;
  rep.condition_e12 = rep.lhs_e12 >= num::kInvSqrt2Pi;
  rep.strategies_unique = rep.condition_e11 && rep.condition_e12;

  // Supremum of dZ/dS over theta in (0,1): 999-point grid in y = Phi^{-1}
  // space plus the endpoint limit -sqrt(alpha_x+alpha_p^2 sigma_mu^2)/(alpha_x+alpha_z).
  const double psi_disp_rt =
      std::sqrt(p.alpha_x + p.alpha_p * p.alpha_p * p.sigma_mu * p.sigma_mu);
  double sup = -psi_disp_rt / (p.alpha_x + az);
  int denom_sign = 0;
  bool singular = false;
  for (int i = 0; i < 999; ++i) {
    const double y = -8.0 + 16.0 * i / 998.0;
    const double pdf_y = num::normal_pdf(y);
    const double numer = -(p.alpha_p + az) * pdf_y + psi_disp_rt;
    const double den =
        pdf_y * p.alpha_p * p.alpha_x / psi_disp_rt - (p.alpha_x + az);
    if (std::abs(den) < 1e-14) {
      singular = true;
      break;
    }
    const int s = den > 0.0 ? 1 : -1;
    if (denom_sign == 0) denom_sign = s;
    if (s != denom_sign) {
      singular = true;
      break;
    }
    sup = std::max(sup, numer / den);
  }
  rep.dZdS_max =
      singular ? std::numeric_limits<double>::infinity() : sup;
  return rep;
}

}  // namespace ggame
