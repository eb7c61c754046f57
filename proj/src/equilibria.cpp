#include "equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "actions.hpp"

namespace ggame {

namespace {

struct CompositeTerms {
  double sqrt_alpha;
  double sqrt_alpha_psi;
  double load_theta;  // (alpha_z + alpha_p)/alpha
  double load_z;      // alpha_z/alpha
  double prior_term;  // (alpha_p/alpha) * E[mu]
  double cost_term;   // Phi^{-1}(c)/sqrt(alpha)
};

CompositeTerms composite_terms(const GameParams& p, double alpha_z) {
  const double alpha = p.alpha_x + p.alpha_p + alpha_z;
  const double psi_disp =
      p.alpha_x + p.alpha_p * p.alpha_p * p.sigma_mu * p.sigma_mu;
  if (!(psi_disp > 0.0))
    throw DomainError("threshold residual undefined: psi has no dispersion");
  CompositeTerms t;
  t.sqrt_alpha = std::sqrt(alpha);
  t.sqrt_alpha_psi = alpha / std::sqrt(psi_disp);
  t.load_theta = (alpha_z + p.alpha_p) / alpha;
  t.load_z = alpha_z / alpha;
  t.prior_term = p.alpha_p / alpha * p.mu_mean;
  t.cost_term = num::normal_quantile(p.cost) / t.sqrt_alpha;
  return t;
}

double composite_arg(double theta, const CompositeTerms& t, double z) {
  return t.sqrt_alpha_psi *
         (t.load_theta * theta - t.load_z * z - t.prior_term - t.cost_term);
}

// d/dtheta of Phi(arg(theta)) - theta.
double composite_slope(double theta, const CompositeTerms& t, double z) {
  return num::normal_pdf(composite_arg(theta, t, z)) * t.sqrt_alpha_psi *
             t.load_theta -
         1.0;
}

// The residual's true limits are +Phi(arg(0)) at theta -> 0+ and
// Phi(arg(1)) - 1 < 0 at theta -> 1-. For very steep instances the outermost
// crossings sit inside the clipped slivers (0, clip) or (1-clip, 1) and the
// float sign at the clip boundary flips; bisect into the sliver using the
// known limit sign so no equilibrium is lost.
void add_sliver_roots(const std::function<double(double)>& f, double clip,
                      double f_at_lo_clip, double f_at_hi_clip,
                      const num::Tolerances& tol, std::vector<num::Root>* roots) {
  if (f_at_lo_clip < 0.0) {
    const double lo = std::numeric_limits<double>::denorm_min();
    const double flo = f(lo);
    if (flo > 0.0)
      roots->insert(roots->begin(),
                    num::refine_root(f, {lo, clip, flo, f_at_lo_clip}, tol));
    else
      // Root below the smallest positive double; |f(lo)| <= lo is already
      // within tolerance, so report the nearest representable location.
      roots->insert(roots->begin(), {lo, flo, false});
  }
  if (f_at_hi_clip > 0.0) {
    const double hi_open = std::nextafter(1.0, 0.0);
    const double fhi = f(hi_open);
    if (fhi < 0.0)
      roots->push_back(
          num::refine_root(f, {1.0 - clip, hi_open, f_at_hi_clip, fhi}, tol));
    else
      roots->push_back({hi_open, fhi, false});
  }
}

}  // namespace

double composite_residual(double theta, const GameParams& p, double alpha_z,
                          double z) {
  const CompositeTerms t = composite_terms(p, alpha_z);
  return num::normal_cdf(composite_arg(theta, t, z)) - theta;
}

double residual_baseline(double theta, const GameParams& p) {
  return composite_residual(theta, p, 0.0, 0.0);
}

double residual_exogenous(double theta, const GameParams& p, double alpha_z,
                          double z) {
  return composite_residual(theta, p, alpha_z, z);
}

std::vector<Equilibrium> solve_exogenous(const GameParams& p, double alpha_z,
                                         double z, const SolveOptions& opt) {
  const CompositeTerms t = composite_terms(p, alpha_z);
  const auto f = [&](double theta) {
    return num::normal_cdf(composite_arg(theta, t, z)) - theta;
  };
  const double clip = opt.tol.domain_clip;
  auto roots = num::enumerate_roots(f, clip, 1.0 - clip, opt.grid_n, opt.tol);
  add_sliver_roots(f, clip, f(clip), f(1.0 - clip), opt.tol, &roots);

  std::vector<Equilibrium> out;
  int crossings = 0;
  for (const num::Root& r : roots) {
    Equilibrium eq;
    eq.theta_star = r.x;
    eq.psi_star = r.x - t.load_z * z - t.cost_term;
    eq.slope_at_root = composite_slope(r.x, t, z);
    eq.degenerate = r.degenerate;
    if (!r.degenerate) ++crossings;
    out.push_back(eq);
  }
  if (out.empty())
    throw SolverError(
        "no threshold root found; the residual has opposite signs at the "
        "domain ends, so this is a numerics fault");
  if (crossings > 3)
    throw SolverError("more than three threshold crossings: numerics fault");
  return out;
}

std::vector<Equilibrium> solve_baseline(const GameParams& p,
                                        const SolveOptions& opt) {
  return solve_exogenous(p, 0.0, 0.0, opt);
}

std::vector<Equilibrium> solve(const GameParams& p, const Environment& env,
                               const SolveOptions& opt) {
  return std::visit(
      [&](const auto& e) -> std::vector<Equilibrium> {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Baseline>) {
          return solve_baseline(p, opt);
        } else if constexpr (std::is_same_v<T, ExogenousSignal>) {
          return solve_exogenous(p, e.alpha_z, e.z, opt);
        } else if constexpr (std::is_same_v<T, EndogenousMarket>) {
          return solve_exogenous(p, market_alpha_z(p.alpha_x, e.gamma, e.sigma_eps),
                                 e.z, opt);
        } else {
          return solve_action(p, make_action_config(p, e.sigma_eps, e.s), opt);
        }
      },
      env);
}

UniquenessReport uniqueness_exogenous(const GameParams& p, double alpha_z) {
  if (!(alpha_z >= 0.0)) throw DomainError("alpha_z must be >= 0");
  const double denom = p.alpha_p + alpha_z;
  const double shrink = 1.0 + alpha_z / p.alpha_p;
  const double lhs = std::sqrt(p.alpha_x / (denom * denom) +
                               p.sigma_mu * p.sigma_mu / (shrink * shrink));
  return make_uniqueness_report(lhs);
}

UniquenessReport uniqueness_baseline(const GameParams& p) {
  return uniqueness_exogenous(p, 0.0);
}

double market_alpha_z(double alpha_x, double gamma, double sigma_eps) {
  const double gs = gamma * sigma_eps;
  return (alpha_x * alpha_x) / (gs * gs);
}

UniquenessReport uniqueness_endogenous(const GameParams& p, double gamma,
                                       double sigma_eps) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  if (!(sigma_eps > 0.0)) throw DomainError("sigma_eps must be > 0");
  return uniqueness_exogenous(p, market_alpha_z(p.alpha_x, gamma, sigma_eps));
}

UniquenessReport uniqueness(const GameParams& p, const Environment& env) {
  return std::visit(
      [&](const auto& e) -> UniquenessReport {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Baseline>) {
          return uniqueness_baseline(p);
        } else if constexpr (std::is_same_v<T, ExogenousSignal>) {
          return uniqueness_exogenous(p, e.alpha_z);
        } else if constexpr (std::is_same_v<T, EndogenousMarket>) {
          return uniqueness_endogenous(p, e.gamma, e.sigma_eps);
        } else {
          return threshold_uniqueness_action(
              p, make_action_config(p, e.sigma_eps, e.s));
        }
      },
      env);
}

}  // namespace ggame
