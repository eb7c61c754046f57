#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "equilibria.hpp"
#include "market.hpp"
#include "test_helpers.hpp"

using namespace ggame;

TEST_CASE("price coefficients: worked example") {
  GameParams p{0.5, 2.0, 1.0, 0.0, 0.0};
  const auto me = solve_market(p, 1.0, 1.0);
  CHECK(me.alpha_z == 4.0);
  CHECK(me.eta1 == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK(me.eta2 == doctest::Approx(-3.0 / 7.0).epsilon(1e-15));
  CHECK(me.intercept == 0.0);
  CHECK(me.eta1 / me.eta2 == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("price intercept carries the prior level") {
  GameParams p{0.5, 1.0, 1.0, 0.0, 1.0};
  const auto me = solve_market(p, 1.0, 1.0);
  CHECK(me.alpha_z == 1.0);
  CHECK(me.intercept == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("coefficient identities hold across random draws") {
  testutil::Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    GameParams p{0.5, rng.uniform(0.1, 8.0), rng.uniform(0.1, 8.0),
                 rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)};
    const double gamma = rng.uniform(0.2, 4.0);
    const double sigma_eps = rng.uniform(0.2, 4.0);
    const auto me = solve_market(p, gamma, sigma_eps);
    CHECK(me.eta1 > 0.0);
    CHECK(me.eta2 < 0.0);
    CHECK(std::abs(me.eta1 / me.eta2 + p.alpha_x / (gamma * sigma_eps)) <=
          1e-12 * (1.0 + p.alpha_x / (gamma * sigma_eps)));
    const double ratio2 = (me.eta1 / me.eta2) * (me.eta1 / me.eta2);
    CHECK(std::abs(ratio2 - me.alpha_z) <= 1e-12 * (1.0 + me.alpha_z));

    // Both fixed-point equations of the linear guess.
    const double alpha = p.alpha_x + p.alpha_p + me.alpha_z;
    const double denom = alpha - me.alpha_z / me.eta1;
    CHECK(me.eta1 == doctest::Approx(p.alpha_x / denom).epsilon(1e-12));
    CHECK(me.eta2 ==
          doctest::Approx(-gamma * sigma_eps / denom).epsilon(1e-12));
  }
}

TEST_CASE("market clearing holds at the fixed point and only there") {
  testutil::Rng rng(42);
  GameParams p{0.5, 2.0, 1.0, 0.5, 0.3};
  const double gamma = 1.0, sigma_eps = 1.0;
  const auto me = solve_market(p, gamma, sigma_eps);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double theta = rng.uniform(-5.0, 5.0);
    const double eps = rng.uniform(-5.0, 5.0);
    worst = std::max(
        worst, std::abs(clearing_residual(theta, eps, me, p, gamma, sigma_eps)));
  }
  CHECK(worst <= 1e-10);

  GameParams zero{0.5, 2.0, 1.0, 0.5, 0.0};
  const auto me0 = solve_market(zero, gamma, sigma_eps);
  CHECK(me0.intercept == 0.0);
  CHECK(clearing_residual(0.0, 0.0, me0, zero, gamma, sigma_eps) == 0.0);

  MarketEquilibrium bent = me;
  bent.eta1 *= 1.01;
  CHECK(std::abs(clearing_residual(0.7, -0.9, bent, p, gamma, sigma_eps)) >
        1e-6);
}

TEST_CASE("observing the price recovers the linear fundamental signal") {
  testutil::Rng rng(43);
  GameParams p{0.5, 1.7, 0.8, 0.4, 0.9};
  const double gamma = 1.3, sigma_eps = 0.6;
  const auto me = solve_market(p, gamma, sigma_eps);
  for (int i = 0; i < 200; ++i) {
    const double theta = rng.uniform(-3.0, 3.0);
    const double eps = rng.uniform(-3.0, 3.0);
    const double price = me.eta1 * theta + me.eta2 * eps + me.intercept;
    const double z = (price - me.intercept) / me.eta1;
    const double expect = theta - gamma * sigma_eps / p.alpha_x * eps;
    CHECK(std::abs(z - expect) <= 1e-12 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("demand: zero at the posterior mean, worked value, linearity") {
  GameParams ones{0.5, 1.0, 1.0, 0.0, 0.0};
  // posterior mean equals the price
  const double pm = (1.0 * 0.4 + 1.0 * 0.1 + 1.0 * 0.7) / 3.0;
  CHECK(demand(0.4, 0.1, 0.7, pm, ones, 1.0, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(demand(3.0, 0.0, 0.0, 0.0, ones, 1.0, 1.0) ==
        doctest::Approx(3.0).epsilon(1e-15));

  testutil::Rng rng(44);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-2, 2), mu = rng.uniform(-2, 2);
    const double z = rng.uniform(-2, 2), price = rng.uniform(-2, 2);
    const double lam = rng.uniform(-3, 3);
    const double d1 = demand(x, mu, z, price, ones, 1.0, 1.0);
    const double dl = demand(lam * x, lam * mu, lam * z, lam * price, ones, 1.0, 1.0);
    CHECK(std::abs(dl - lam * d1) <= 1e-11 * (1.0 + std::abs(lam * d1)));
  }
}

TEST_CASE("aggregate demand by quadrature matches the closed form") {
  GameParams p{0.5, 2.0, 1.0, 0.5, 0.3};
  const double gamma = 1.0, sigma_eps = 1.0;
  const auto me = solve_market(p, gamma, sigma_eps);
  const auto rule = num::gauss_hermite(32);
  const double theta = 0.8, eps = -0.4;
  const double price = me.eta1 * theta + me.eta2 * eps + me.intercept;
  const double z = (price - me.intercept) / me.eta1;
  const double sigma_x = 1.0 / std::sqrt(p.alpha_x);
  double agg = 0.0;
  for (std::size_t a = 0; a < rule.nodes.size(); ++a)
    for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
      const double x = theta + sigma_x * std::sqrt(2.0) * rule.nodes[a];
      const double mu = p.mu_mean + p.sigma_mu * std::sqrt(2.0) * rule.nodes[b];
      agg += rule.weights[a] * rule.weights[b] *
             demand(x, mu, z, price, p, gamma, me.alpha_z);
    }
  agg /= num::kSqrtPi * num::kSqrtPi;
  const double closed = demand(theta, p.mu_mean, z, price, p, gamma, me.alpha_z);
  CHECK(std::abs(agg - closed) <= 1e-8);
}

TEST_CASE("signal precision scales with the inverse square of the noise") {
  GameParams p{0.5, 3.0, 1.0, 0.0, 0.0};
  const auto a = solve_market(p, 1.0, 0.7);
  const auto b = solve_market(p, 1.0, 1.4);
  CHECK(a.alpha_z == doctest::Approx(4.0 * b.alpha_z).epsilon(1e-14));
}

TEST_CASE("implied precision is shared bit-for-bit with the uniqueness check") {
  testutil::Rng rng(45);
  for (int i = 0; i < 300; ++i) {
    GameParams p{0.5, rng.uniform(0.1, 6.0), rng.uniform(0.1, 6.0),
                 rng.uniform(0.0, 2.0), 0.0};
    const double gamma = rng.uniform(0.2, 3.0);
    const double sigma_eps = rng.uniform(0.2, 3.0);
    const double az_solver = solve_market(p, gamma, sigma_eps).alpha_z;
    const double az_shared = market_alpha_z(p.alpha_x, gamma, sigma_eps);
    CHECK(std::memcmp(&az_solver, &az_shared, sizeof(double)) == 0);
    const auto via_market = uniqueness_endogenous(p, gamma, sigma_eps);
    const auto via_exo = uniqueness_exogenous(p, az_shared);
    CHECK(std::memcmp(&via_market.lhs, &via_exo.lhs, sizeof(double)) == 0);
  }
}

TEST_CASE("degenerate market inputs are rejected") {
  GameParams p{0.5, 0.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(solve_market(p, 1.0, 1.0), DomainError);
  GameParams ok{0.5, 1.0, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(solve_market(ok, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(solve_market(ok, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(demand(0, 0, 0, 0, ok, 0.0, 1.0), DomainError);
}
