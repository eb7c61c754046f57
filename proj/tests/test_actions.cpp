#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "actions.hpp"
#include "test_helpers.hpp"

using namespace ggame;

namespace {

// Test-side chain: solve theta*(S) to machine precision near a guess, then
// evaluate Z(S) through the critical-mass map.
double chain_theta(const GameParams& p, double sigma_eps, double s,
                   double guess_lo, double guess_hi) {
  const auto cfg = make_action_config(p, sigma_eps, s);
  return testutil::bisect(
      [&](double t) { return residual_action(t, p, cfg); }, guess_lo, guess_hi,
      220);
}

double chain_Z(const GameParams& p, double sigma_eps, double s,
               double guess_lo, double guess_hi) {
  const auto cfg = make_action_config(p, sigma_eps, s);
  const double theta = chain_theta(p, sigma_eps, s, guess_lo, guess_hi);
  return equivalent_signal(psi_star_action(theta, p, cfg), s, p, cfg);
}

}  // namespace

TEST_CASE("implied signal precision of the attack signal") {
  GameParams p{0.5, 1.0, 10.0, 0.0, 0.5};
  const auto cfg = make_action_config(p, 0.1, 0.0);
  CHECK(cfg.alpha_z == doctest::Approx(100.0).epsilon(1e-15));

  // alpha_z falls strictly as priors disperse (at fixed sigma_eps).
  testutil::Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    GameParams q{0.5, rng.uniform(0.2, 4.0), rng.uniform(0.2, 4.0), 0.0, 0.0};
    const double se = rng.uniform(0.2, 3.0);
    double prev = make_action_config(q, se, 0.0).alpha_z;
    for (double sm : {0.2, 0.5, 1.0, 2.0, 5.0}) {
      q.sigma_mu = sm;
      const double cur = make_action_config(q, se, 0.0).alpha_z;
      CHECK(cur < prev);
      prev = cur;
    }
  }

  CHECK_THROWS_AS(make_action_config(p, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(make_action_config(p, -1.0, 0.0), DomainError);
}

TEST_CASE("threshold uniqueness condition") {
  {
    GameParams p{0.5, 1.0, 1e-8, 0.0, 0.5};
    const auto r =
        threshold_uniqueness_action(p, make_action_config(p, 1.0, 0.0));
    CHECK(r.unique_for_all);  // uninformative prior: always unique
    CHECK(r.lhs > 1e6);
  }
  {
    GameParams p{0.5, 1.0, 10.0, 0.0, 0.5};
    const auto r =
        threshold_uniqueness_action(p, make_action_config(p, 0.1, 0.0));
    CHECK(r.lhs == doctest::Approx(10.1).epsilon(1e-12));
    CHECK(r.unique_for_all);  // precise public signal restores uniqueness
  }
  {
    GameParams p{0.5, 1.0, 10.0, 0.0, 0.5};
    const auto r =
        threshold_uniqueness_action(p, make_action_config(p, 1e6, 0.0));
    CHECK(r.lhs == doctest::Approx(0.1).epsilon(1e-10));
    CHECK_FALSE(r.unique_for_all);  // reduces to the baseline condition
  }
}

TEST_CASE("residual_action: noisy-signal limit agrees with the baseline") {
  GameParams p{0.5, 1.0, 1.0, 0.0, 0.5};
  const auto cfg = make_action_config(p, 1e6, 0.0);
  CHECK(std::abs(residual_action(0.5, p, cfg)) <= 1e-10);

  // Cross-solver comparison: at sigma_eps = 1e6 the action-signal roots must
  // match the baseline composite roots.
  GameParams three{0.5, 1.0, 10.0, 0.0, 0.5};
  const auto cfg3 = make_action_config(three, 1e6, 0.0);
  const auto base = solve_baseline(three);
  const auto acts = solve_action(three, cfg3);
  REQUIRE(base.size() == 3);
  REQUIRE(acts.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(base[i].theta_star - acts[i].theta_star) <= 1e-8);
}

TEST_CASE("action equilibria satisfy the indifference condition through Z(S)") {
  testutil::Rng rng(32);
  for (int i = 0; i < 40; ++i) {
    GameParams p{rng.uniform(0.15, 0.85), rng.uniform(0.3, 3.0),
                 rng.uniform(0.3, 3.0), rng.uniform(0.0, 1.0),
                 rng.uniform(-0.5, 1.5)};
    const auto cfg = make_action_config(p, rng.uniform(0.4, 3.0),
                                        rng.uniform(-2.0, 2.0));
    const double alpha = p.alpha_x + p.alpha_p + cfg.alpha_z;
    for (const auto& e : solve_action(p, cfg)) {
      if (e.degenerate) continue;
      if (e.theta_star < 1e-9 || e.theta_star > 1.0 - 1e-9) continue;
      const double z = equivalent_signal(e.psi_star, cfg.s, p, cfg);
      const double pic = num::normal_cdf(
          std::sqrt(alpha) *
          (e.theta_star - e.psi_star - cfg.alpha_z / alpha * z));
      CHECK(std::abs(pic - p.cost) <= 1e-10);
    }
  }
}

TEST_CASE("multiplicity with a nearly uninformative action signal") {
  GameParams p{0.5, 1.0, 10.0, 0.0, 0.5};
  const auto cfg = make_action_config(p, 1e6, 0.0);
  CHECK_FALSE(threshold_uniqueness_action(p, cfg).unique_for_all);
  const auto eqs = solve_action(p, cfg);
  REQUIRE(eqs.size() == 3);
  CHECK(std::abs(eqs[1].theta_star - 0.5) <= 1e-8);
}

TEST_CASE("equivalent signal: coefficients and exact round trip") {
  {
    GameParams p{0.5, 1.0, 0.9, 0.0, 0.5};
    const auto cfg = make_action_config(p, std::sqrt(10.0), 0.0);
    CHECK(cfg.alpha_z == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(equivalent_signal(0.0, 0.0, p, cfg) == 0.0);
    CHECK(equivalent_signal(1.0, 0.0, p, cfg) ==
          doctest::Approx(2.0).epsilon(1e-12));
  }
  testutil::Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    GameParams p{0.5, rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0),
                 rng.uniform(0.0, 1.5), rng.uniform(-1.0, 1.0)};
    const double sigma_eps = rng.uniform(0.3, 3.0);
    const auto cfg0 = make_action_config(p, sigma_eps, 0.0);
    const double alpha = p.alpha_x + p.alpha_p + cfg0.alpha_z;
    const double inv_rt_psi =
        std::sqrt(p.alpha_x + p.alpha_p * p.alpha_p * p.sigma_mu * p.sigma_mu) /
        alpha;
    const double theta = rng.uniform(-1.0, 2.0);
    const double eps = rng.uniform(-3.0, 3.0);
    const double psi_star = rng.uniform(-1.0, 2.0);
    const double s = (psi_star - p.alpha_x / alpha * theta -
                      p.alpha_p / alpha * p.mu_mean) /
                         inv_rt_psi +
                     sigma_eps * eps;
    const auto cfg = make_action_config(p, sigma_eps, s);
    const double z = equivalent_signal(psi_star, s, p, cfg);
    const double expect = theta + p.alpha_p / p.alpha_x * p.mu_mean -
                          sigma_eps * alpha / p.alpha_x * inv_rt_psi * eps;
    CHECK(std::abs(z - expect) <= 1e-10 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("psi*(theta*) map is strictly increasing") {
  testutil::Rng rng(34);
  for (int i = 0; i < 30; ++i) {
    GameParams p{0.5, rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0),
                 rng.uniform(0.0, 1.5), rng.uniform(-0.5, 1.0)};
    const auto cfg = make_action_config(p, rng.uniform(0.3, 3.0), 0.0);
    double prev = psi_star_action(0.01, p, cfg);
    for (double t = 0.06; t < 1.0 - 1e-9; t += 0.05) {
      const double cur = psi_star_action(t, p, cfg);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("dZdS matches the finite-difference oracle through the solved chain") {
  GameParams p{0.5, 1.0, 1.0, 0.5, 0.5};
  const double sigma_eps = 0.5;
  {  // thresholds are unique here, so every branch is locally unique
    const auto cfg = make_action_config(p, sigma_eps, 0.0);
    CHECK(threshold_uniqueness_action(p, cfg).unique_for_all);
  }
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const double s = -2.5 + 5.0 * i / 49.0;
    const auto cfg = make_action_config(p, sigma_eps, s);
    const auto eqs = solve_action(p, cfg);
    REQUIRE(eqs.size() == 1);
    const double theta = eqs[0].theta_star;
    const double lo = std::max(1e-14, theta - 0.02);
    const double hi = std::min(1.0 - 1e-14, theta + 0.02);
    const double z_plus = chain_Z(p, sigma_eps, s + h, lo, hi);
    const double z_minus = chain_Z(p, sigma_eps, s - h, lo, hi);
    const double fd = (z_plus - z_minus) / (2.0 * h);
    const double analytic = dZdS(theta, p, cfg);
    CHECK(std::abs(analytic - fd) <= 1e-6 * (1.0 + std::abs(analytic)));
  }
}

TEST_CASE("strategy uniqueness: worked verdicts") {
  {  // large prior dispersion
    GameParams p{0.5, 1.0, 1.0, 1e3, 0.5};
    const auto rep = strategy_uniqueness(p, make_action_config(p, 1.0, 0.0));
    CHECK(rep.condition_e11);
    CHECK(rep.condition_e12);
    CHECK(rep.strategies_unique);
    CHECK(rep.dZdS_max < 0.0);
  }
  {  // very precise action signal: multiplicity in strategies
    GameParams p{0.5, 1.0, 1.0, 0.0, 0.5};
    const auto rep = strategy_uniqueness(p, make_action_config(p, 1e-4, 0.0));
    CHECK_FALSE(rep.condition_e11);
    CHECK_FALSE(rep.strategies_unique);
    CHECK(rep.dZdS_max > 0.0);
  }
}

TEST_CASE("the first strategy condition implies the second") {
  testutil::Rng rng(35);
  int holds = 0;
  for (int i = 0; i < 10000; ++i) {
    GameParams p{0.5, rng.uniform(0.05, 5.0), rng.uniform(0.05, 5.0),
                 rng.uniform(0.0, 3.0), 0.0};
    const auto rep =
        strategy_uniqueness(p, make_action_config(p, rng.uniform(0.05, 5.0), 0.0));
    if (rep.condition_e11) {
      ++holds;
      CHECK(rep.condition_e12);
    }
  }
  CHECK(holds > 100);  // the draw ranges exercise both sides
}

TEST_CASE("sharp numerator bound: squared variant with e12 forces dZdS < 0") {
  // The first condition with the dispersion term divided by the *squared*
  // precision ratio bounds the numerator globally; with the denominator
  // condition it forces a negative derivative everywhere.
  testutil::Rng rng(36);
  int exercised = 0;
  for (int i = 0; i < 4000 && exercised < 250; ++i) {
    GameParams p{0.5, rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0),
                 rng.uniform(0.0, 2.0), 0.0};
    const auto cfg = make_action_config(p, rng.uniform(0.2, 3.0), 0.0);
    const double denom = p.alpha_p + cfg.alpha_z;
    const double shrink = 1.0 + cfg.alpha_z / p.alpha_p;
    const double sharp_lhs =
        std::sqrt(p.alpha_x / (denom * denom) +
                  p.sigma_mu * p.sigma_mu / (shrink * shrink));
    const auto rep = strategy_uniqueness(p, cfg);
    if (sharp_lhs < num::kInvSqrt2Pi || !rep.condition_e12) continue;
    ++exercised;
    CHECK(rep.dZdS_max < 0.0);
    for (int k = 0; k < 999; ++k) {
      const double theta = num::normal_cdf(-8.0 + 16.0 * k / 998.0);
      if (theta <= 0.0 || theta >= 1.0) continue;
      CHECK(dZdS(theta, p, cfg) < 0.0);
    }
  }
  CHECK(exercised >= 250);
}

TEST_CASE("printed first condition does not bound the derivative: corner pin") {
  // alpha_z = 99 via sigma_eps^2 = 1/2079 with sigma_mu^2 = 20: both report
  // conditions hold as printed, yet dZdS(1/2) is positive. The squared
  // variant correctly fails here.
  GameParams p{0.5, 1.0, 1.0, std::sqrt(20.0), 0.5};
  const auto cfg = make_action_config(p, std::sqrt(1.0 / 2079.0), 0.0);
  CHECK(cfg.alpha_z == doctest::Approx(99.0).epsilon(1e-12));
  const auto rep = strategy_uniqueness(p, cfg);
  CHECK(rep.condition_e11);
  CHECK(rep.condition_e12);
  CHECK(rep.lhs_e11 == doctest::Approx(0.4473253849).epsilon(1e-9));
  CHECK(dZdS(0.5, p, cfg) == doctest::Approx(0.3534242016).epsilon(1e-9));
  CHECK(rep.dZdS_max >= 0.3534242016);
  const double denom = p.alpha_p + cfg.alpha_z;
  const double shrink = 1.0 + cfg.alpha_z / p.alpha_p;
  const double sharp_lhs = std::sqrt(
      p.alpha_x / (denom * denom) + 20.0 / (shrink * shrink));
  CHECK(sharp_lhs < num::kInvSqrt2Pi);
}

TEST_CASE("uninformative-prior collapse of the strategy condition") {
  GameParams p{0.5, 1.0, 1e-10, 0.0, 0.5};
  const auto cfg = make_action_config(p, 2.0, 0.0);
  CHECK(cfg.alpha_z == doctest::Approx(0.25).epsilon(1e-12));
  const auto rep = strategy_uniqueness(p, cfg);
  CHECK(std::abs(rep.lhs_e11 - std::sqrt(p.alpha_x) / cfg.alpha_z) <= 1e-8);
}

TEST_CASE("dZdS singularity raises and nearby evaluation stays finite") {
  GameParams p{0.5, 1.0, 30.0, 0.0, 0.5};
  const auto cfg = make_action_config(p, 1e6, 0.0);
  // Denominator zero where pdf(y) = (alpha_x+alpha_z) sqrt(alpha_x)/(alpha_p alpha_x).
  const double target = (p.alpha_x + cfg.alpha_z) / (p.alpha_p * p.alpha_x) *
                        std::sqrt(p.alpha_x);
  const double y_star = std::sqrt(-2.0 * std::log(target / num::kInvSqrt2Pi));
  double theta = num::normal_cdf(y_star);
  for (int k = 0; k < 200; ++k) theta = std::nextafter(theta, 0.0);
  bool threw = false;
  for (int k = 0; k < 400; ++k) {
    try {
      (void)dZdS(theta, p, cfg);
    } catch (const SingularityError&) {
      threw = true;
      break;
    }
    theta = std::nextafter(theta, 1.0);
  }
  CHECK(threw);
  CHECK(std::isfinite(dZdS(0.5, p, cfg)));
  CHECK_THROWS_AS(dZdS(0.0, p, cfg), DomainError);
  CHECK_THROWS_AS(dZdS(1.0, p, cfg), DomainError);
}

TEST_CASE("dispersion limit: both uniqueness layers hold on a coarse grid") {
  for (double sigma_mu : {10.0, 100.0, 1000.0})
    for (double ax : {0.5, 1.0, 2.0})
      for (double ap : {0.5, 1.0, 2.0})
        for (double se : {0.5, 1.0, 2.0}) {
          GameParams p{0.5, ax, ap, sigma_mu, 0.5};
          const auto cfg = make_action_config(p, se, 0.0);
          CHECK(threshold_uniqueness_action(p, cfg).unique_for_all);
          CHECK(strategy_uniqueness(p, cfg).strategies_unique);
        }
}
