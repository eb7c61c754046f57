// Shared test-side oracles, independent of the implementation paths they
// check: bisection root finding, a long-double tail integral for the normal
// CDF, and a tiny deterministic RNG for property tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace testutil {

// Plain bisection; the caller guarantees a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Upper tail of the standard normal by composite Simpson in long double over
// [x, x+16]; the remainder beyond is below 1e-60 for x >= 0.
inline long double normal_upper_tail(long double x) {
  const long double inv_sqrt_2pi = 0.3989422804014326779399460599343818685L;
  const auto pdf = [&](long double t) {
    return inv_sqrt_2pi * std::exp(-0.5L * t * t);
  };
  const int n = 200000;  // even
  const long double a = x, b = x + 16.0L;
  const long double h = (b - a) / n;
  long double sum = pdf(a) + pdf(b);
  for (int i = 1; i < n; ++i) sum += pdf(a + h * i) * ((i % 2) ? 4.0L : 2.0L);
  return sum * h / 3.0L;
}

inline long double normal_cdf_oracle(long double x) {
  return x >= 0 ? 1.0L - normal_upper_tail(x) : normal_upper_tail(-x);
}

// splitmix64: deterministic, seedable, good enough for parameter draws.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t x = (state += 0x9E3779B97F4A7C15ull);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }
  double uniform(double lo, double hi) {
    const double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
};

// Central difference with step h.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace testutil
