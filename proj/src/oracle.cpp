#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "equilibria.hpp"
#include "market.hpp"

namespace ggame::oracle {

namespace {

constexpr std::uint64_t kBatchSize = 1u << 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform in (0,1), identical across platforms (mt19937_64 is fully
// specified); normals via the quantile keep the stream portable.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed, std::uint64_t stream)
      : engine(splitmix64(seed ^ splitmix64(stream + 1))) {}
  double uniform01() {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal() { return num::normal_quantile(uniform01()); }
};

int worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GGAME_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return static_cast<int>(std::min(n, 16u));
}

struct BatchStats {
  std::uint64_t attackers = 0;
  double psi_sum = 0.0;
  double psi_sq_sum = 0.0;
};

}  // namespace

bool SimulationResult::within_band() const {
  return std::abs(attack_fraction_hat - analytic_attack) <= 3.0 * std_error;
}

double analytic_attack_fraction(double theta, double psi_star,
                                const GameParams& p, const Environment& env) {
  const BeliefAggregate agg = belief_aggregate(p, env);
  return num::normal_cdf(std::sqrt(agg.alpha_psi) *
                         (psi_star - agg.w_x * theta - agg.psi_mean_intercept));
}

SimulationResult simulate_attack(double theta, double psi_star,
                                 const GameParams& p, const Environment& env,
                                 std::uint64_t n, std::uint64_t seed) {
  validate(p);
  if (n < 1000) throw DomainError("simulate_attack: n must be >= 1000");
  const bool needs_private =
      std::holds_alternative<EndogenousMarket>(env) ||
      std::holds_alternative<ActionSignal>(env);
  if (needs_private && p.alpha_x == 0.0)
    throw DomainError(
        "simulate_attack: sigma_x is undefined (alpha_x = 0) but the "
        "environment requires private signals");

  SimulationResult res;
  res.n_agents = n;
  res.seed = seed;

  if (p.alpha_x == 0.0 && p.sigma_mu == 0.0) {
    // psi is a point mass at w_p * E[mu]; compare indicators directly.
    const double alpha_z = effective_alpha_z(p, env);
    const double alpha = p.alpha_x + p.alpha_p + alpha_z;
    const double psi = p.alpha_p / alpha * p.mu_mean;
    const double indicator = psi <= psi_star ? 1.0 : 0.0;
    res.attack_fraction_hat = indicator;
    res.analytic_attack = indicator;
    res.std_error = 0.0;
    res.psi_sample_mean = psi;
    res.psi_sample_var = 0.0;
    return res;
  }

  const BeliefAggregate agg = belief_aggregate(p, env);
  const double sigma_x = p.alpha_x > 0.0 ? 1.0 / std::sqrt(p.alpha_x) : 0.0;

  const std::uint64_t n_batches = (n + kBatchSize - 1) / kBatchSize;
  std::vector<BatchStats> stats(n_batches);

  const auto run_range = [&](std::uint64_t b0, std::uint64_t b1) {
    for (std::uint64_t b = b0; b < b1; ++b) {
      Rng rng(seed, b);
      const std::uint64_t count =
          std::min<std::uint64_t>(kBatchSize, n - b * kBatchSize);
      BatchStats st;
      for (std::uint64_t i = 0; i < count; ++i) {
        const double mu =
            p.sigma_mu > 0.0 ? p.mu_mean + p.sigma_mu * rng.normal() : p.mu_mean;
        const double x = p.alpha_x > 0.0 ? theta + sigma_x * rng.normal() : 0.0;
        const double psi = agg.w_x * x + agg.w_p * mu;
        if (psi <= psi_star) ++st.attackers;
        st.psi_sum += psi;
        st.psi_sq_sum += psi * psi;
      }
      stats[b] = st;
    }
  };

  const int workers =
      static_cast<int>(std::min<std::uint64_t>(worker_count(), n_batches));
  if (workers <= 1) {
    run_range(0, n_batches);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n_batches + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t b0 = w * chunk;
      const std::uint64_t b1 = std::min<std::uint64_t>(n_batches, b0 + chunk);
      if (b0 < b1) pool.emplace_back(run_range, b0, b1);
    }
    for (auto& th : pool) th.join();
  }

  std::uint64_t attackers = 0;
  double psi_sum = 0.0, psi_sq = 0.0;
  for (const BatchStats& st : stats) {  // fixed merge order
    attackers += st.attackers;
    psi_sum += st.psi_sum;
    psi_sq += st.psi_sq_sum;
  }
  const double nd = static_cast<double>(n);
  res.attack_fraction_hat = static_cast<double>(attackers) / nd;
  res.analytic_attack = analytic_attack_fraction(theta, psi_star, p, env);
  res.std_error = std::sqrt(res.attack_fraction_hat *
                            (1.0 - res.attack_fraction_hat) / nd);
  res.psi_sample_mean = psi_sum / nd;
  res.psi_sample_var =
      (psi_sq - psi_sum * psi_sum / nd) / (nd - 1.0);
  return res;
}

double simulate_success_prob(double psi, double theta_star, const GameParams& p,
                             const Environment& env, std::uint64_t n,
                             std::uint64_t seed) {
  validate(p);
  if (n < 1000) throw DomainError("simulate_success_prob: n must be >= 1000");
  const BeliefAggregate agg = belief_aggregate(p, env);
  const double posterior_sd = 1.0 / std::sqrt(agg.alpha);
  const std::uint64_t n_batches = (n + kBatchSize - 1) / kBatchSize;
  std::uint64_t hits = 0;
  for (std::uint64_t b = 0; b < n_batches; ++b) {
    Rng rng(seed, b);
    const std::uint64_t count =
        std::min<std::uint64_t>(kBatchSize, n - b * kBatchSize);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double theta_draw = psi + posterior_sd * rng.normal();
      if (theta_draw <= theta_star) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

double attack_mass_quadrature(double theta_star, const GameParams& p,
                              const num::QuadratureRule& rule) {
  validate(p);
  if (!(p.alpha_x > 0.0))
    throw DomainError("attack_mass_quadrature requires alpha_x > 0");
  const double alpha = p.alpha_x + p.alpha_p;
  const double qc = num::normal_quantile(p.cost);
  const double sqrt_ax = std::sqrt(p.alpha_x);
  const auto integrand = [&](double mu) {
    const double x_cut = -qc * std::sqrt(alpha) / p.alpha_x +
                         theta_star * alpha / p.alpha_x -
                         p.alpha_p / p.alpha_x * mu;
    return num::normal_cdf(sqrt_ax * (x_cut - theta_star));
  };
  if (p.sigma_mu == 0.0) return integrand(p.mu_mean);
  double sum = 0.0;
  const double scale = std::sqrt(2.0) * p.sigma_mu;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    sum += rule.weights[k] * integrand(p.mu_mean + scale * rule.nodes[k]);
  return sum / num::kSqrtPi;
}

double mgf_noncentral_chi2(double t, double e_z) {
  if (!(t >= 0.0)) throw DomainError("mgf_noncentral_chi2: t must be >= 0");
  const double onep2t = 1.0 + 2.0 * t;
  return std::exp(-e_z * e_z * t / onep2t) / std::sqrt(onep2t);
}

double mgf_noncentral_chi2_quadrature(double t, double e_z,
                                      const num::QuadratureRule& rule) {
  if (!(t >= 0.0)) throw DomainError("mgf quadrature: t must be >= 0");
  double sum = 0.0;
  if (t <= 0.5) {
    // Centre on the density: z = e_z + sqrt(2) u.
    const double s = std::sqrt(2.0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double z = e_z + s * rule.nodes[k];
      sum += rule.weights[k] * std::exp(-t * z * z);
    }
    return sum / num::kSqrtPi;
  }
  // Centre on the exp(-t z^2) kernel: z = u / sqrt(t).
  const double inv_rt = 1.0 / std::sqrt(t);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    sum += rule.weights[k] * num::normal_pdf(rule.nodes[k] * inv_rt - e_z);
  return sum * inv_rt;
}

namespace {

// E[y] of the shifted cutoff variable entering the slope integrand.
double slope_mean_term(double theta_star, const GameParams& p) {
  const double alpha = p.alpha_x + p.alpha_p;
  return -num::normal_quantile(p.cost) * std::sqrt(alpha) / p.alpha_x +
         theta_star * p.alpha_p / p.alpha_x -
         p.alpha_p / p.alpha_x * p.mu_mean;
}

}  // namespace

double attack_mass_slope_closed_form(double theta_star, const GameParams& p) {
  validate(p);
  if (!(p.alpha_x > 0.0))
    throw DomainError("attack_mass_slope requires alpha_x > 0");
  const double sqrt_ax = std::sqrt(p.alpha_x);
  const double v = p.sigma_mu * p.alpha_p / sqrt_ax;
  const double onepv2 = 1.0 + v * v;
  const double ey = slope_mean_term(theta_star, p);
  const double expo = std::exp(-0.5 * p.alpha_x * ey * ey / onepv2);
  return p.alpha_p / sqrt_ax * num::kInvSqrt2Pi / std::sqrt(onepv2) * expo;
}

double attack_mass_slope_quadrature(double theta_star, const GameParams& p,
                                    const num::QuadratureRule& rule) {
  validate(p);
  if (!(p.alpha_x > 0.0))
    throw DomainError("attack_mass_slope requires alpha_x > 0");
  const double sqrt_ax = std::sqrt(p.alpha_x);
  const double alpha = p.alpha_x + p.alpha_p;
  const double qc = num::normal_quantile(p.cost);
  const auto integrand = [&](double mu) {
    const double y = -qc * std::sqrt(alpha) / p.alpha_x +
                     theta_star * p.alpha_p / p.alpha_x -
                     p.alpha_p / p.alpha_x * mu;
    return std::exp(-0.5 * p.alpha_x * y * y);
  };
  double inner;
  if (p.sigma_mu == 0.0) {
    inner = integrand(p.mu_mean);
  } else {
    double sum = 0.0;
    const double scale = std::sqrt(2.0) * p.sigma_mu;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      sum += rule.weights[k] * integrand(p.mu_mean + scale * rule.nodes[k]);
    inner = sum / num::kSqrtPi;
  }
  return p.alpha_p / sqrt_ax * num::kInvSqrt2Pi * inner;
}

double attack_mass_slope_supremum(const GameParams& p) {
  validate(p);
  if (!(p.alpha_x > 0.0))
    throw DomainError("attack_mass_slope requires alpha_x > 0");
  const double v = p.sigma_mu * p.alpha_p / std::sqrt(p.alpha_x);
  return p.alpha_p / std::sqrt(p.alpha_x) * num::kInvSqrt2Pi /
         std::sqrt(1.0 + v * v);
}

std::vector<VerifyCheck> run_verification(std::uint64_t seed) {
  std::vector<VerifyCheck> checks;
  const num::QuadratureRule gh128 = num::gauss_hermite(128);
  std::mt19937_64 gen(splitmix64(seed));
  auto uni = [&gen](double lo, double hi) {
    return lo + (hi - lo) * ((static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53);
  };

  {  // Monte Carlo attack mass vs closed form, symmetric point
    GameParams p{0.5, 1.0, 1.0, 1.0, 0.5};
    auto r = simulate_attack(0.5, 0.5, p, Baseline{}, 400000, seed);
    checks.push_back({"mc_attack_symmetric", r.within_band(), true,
                      std::abs(r.attack_fraction_hat - r.analytic_attack),
                      3.0 * r.std_error});
  }
  {  // generic point
    GameParams p{0.5, 2.0, 1.0, 0.5, 0.6};
    auto r = simulate_attack(0.3, 0.4, p, Baseline{}, 400000, seed + 1);
    checks.push_back({"mc_attack_generic", r.within_band(), true,
                      std::abs(r.attack_fraction_hat - r.analytic_attack),
                      3.0 * r.std_error});
  }
  {  // psi | theta sample moments vs the stated law
    GameParams p{0.5, 2.0, 1.0, 0.5, 0.6};
    const BeliefAggregate agg = belief_aggregate(p, Baseline{});
    auto r = simulate_attack(0.3, 0.4, p, Baseline{}, 1000000, seed + 2);
    const double mean_ref = agg.w_x * 0.3 + agg.psi_mean_intercept;
    const double var_ref = 1.0 / agg.alpha_psi;
    const double se_mean = std::sqrt(var_ref / 1e6);
    const double se_var = var_ref * std::sqrt(2.0 / (1e6 - 1.0));
    const bool ok = std::abs(r.psi_sample_mean - mean_ref) <= 4.0 * se_mean &&
                    std::abs(r.psi_sample_var - var_ref) <= 4.0 * se_var;
    checks.push_back({"mc_psi_conditional_law", ok, true,
                      std::abs(r.psi_sample_mean - mean_ref), 4.0 * se_mean});
  }
  {  // success probability vs Phi
    GameParams p{0.5, 2.0, 1.0, 0.0, 0.0};
    const BeliefAggregate agg = belief_aggregate(p, Baseline{});
    const double psi = 0.2;
    const double theta_star = psi + 2.0 / std::sqrt(agg.alpha);
    const double hat =
        simulate_success_prob(psi, theta_star, p, Baseline{}, 400000, seed + 3);
    const double ref = num::normal_cdf(2.0);
    const double se = std::sqrt(ref * (1.0 - ref) / 400000.0);
    checks.push_back({"mc_success_probability", std::abs(hat - ref) <= 3.0 * se,
                      true, std::abs(hat - ref), 3.0 * se});
  }
  {  // attack mass by quadrature vs closed form
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      GameParams p{uni(0.1, 0.9), uni(0.5, 4.0), uni(0.3, 2.0), uni(0.0, 0.6),
                   uni(-1.0, 2.0)};
      const double theta_star = uni(0.05, 0.95);
      const double psi_star =
          theta_star - num::normal_quantile(p.cost) /
                           std::sqrt(p.alpha_x + p.alpha_p);
      const double closed =
          analytic_attack_fraction(theta_star, psi_star, p, Baseline{});
      worst = std::max(
          worst, std::abs(attack_mass_quadrature(theta_star, p, gh128) - closed));
    }
    checks.push_back({"attack_mass_quadrature_vs_closed_form", worst <= 1e-8,
                      false, worst, 1e-8});
  }
  {  // MGF identity on the (t, E[z]) grid
    double worst = 0.0;
    for (int i = 0; i <= 50; ++i)
      for (int j = 0; j <= 50; ++j) {
        const double t = 10.0 * i / 50.0;
        const double ez = -5.0 + 10.0 * j / 50.0;
        worst = std::max(
            worst, std::abs(mgf_noncentral_chi2(t, ez) -
                            mgf_noncentral_chi2_quadrature(t, ez, gh128)));
      }
    checks.push_back({"mgf_identity_grid", worst <= 1e-8, false, worst, 1e-8});
  }
  {  // uniqueness slope: closed form vs quadrature, and supremum verdict
    double worst = 0.0;
    int verdict_mismatches = 0;
    for (int i = 0; i < 100; ++i) {
      GameParams p{uni(0.1, 0.9), uni(0.5, 4.0), uni(0.3, 2.0), uni(0.0, 0.6),
                   uni(-1.0, 2.0)};
      const double theta_star = uni(0.05, 0.95);
      worst = std::max(worst,
                       std::abs(attack_mass_slope_closed_form(theta_star, p) -
                                attack_mass_slope_quadrature(theta_star, p, gh128)));
      const bool by_supremum = attack_mass_slope_supremum(p) <= 1.0;
      const bool by_condition = uniqueness_baseline(p).unique_for_all;
      if (by_supremum != by_condition) ++verdict_mismatches;
    }
    checks.push_back({"attack_mass_slope_vs_quadrature", worst <= 1e-8, false,
                      worst, 1e-8});
    checks.push_back({"slope_supremum_matches_condition", verdict_mismatches == 0,
                      false, static_cast<double>(verdict_mismatches), 0.0});
  }
  {  // market clearing and demand aggregation
    GameParams p{0.5, 2.0, 1.0, 0.5, 0.3};
    const MarketEquilibrium me = solve_market(p, 1.3, 0.7);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double theta = uni(-5.0, 5.0);
      const double eps = uni(-5.0, 5.0);
      worst = std::max(worst,
                       std::abs(clearing_residual(theta, eps, me, p, 1.3, 0.7)));
    }
    checks.push_back({"market_clearing_residual", worst <= 1e-10, false, worst,
                      1e-10});

    const num::QuadratureRule gh32 = num::gauss_hermite(32);
    const double theta = 0.8, eps = -0.4;
    const double price = me.eta1 * theta + me.eta2 * eps + me.intercept;
    const double z = (price - me.intercept) / me.eta1;
    const double sigma_x = 1.0 / std::sqrt(p.alpha_x);
    double agg_quad = 0.0;
    for (std::size_t a = 0; a < gh32.nodes.size(); ++a)
      for (std::size_t b = 0; b < gh32.nodes.size(); ++b) {
        const double x = theta + sigma_x * std::sqrt(2.0) * gh32.nodes[a];
        const double mu = p.mu_mean + p.sigma_mu * std::sqrt(2.0) * gh32.nodes[b];
        agg_quad += gh32.weights[a] * gh32.weights[b] *
                    demand(x, mu, z, price, p, 1.3, me.alpha_z);
      }
    agg_quad /= num::kSqrtPi * num::kSqrtPi;
    const double agg_closed = demand(theta, p.mu_mean, z, price, p, 1.3, me.alpha_z);
    checks.push_back({"market_demand_quadrature", std::abs(agg_quad - agg_closed) <= 1e-8,
                      false, std::abs(agg_quad - agg_closed), 1e-8});
  }
  return checks;
}

}  // namespace ggame::oracle
