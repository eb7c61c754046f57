#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace ggame::num {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Standard normal CDF. Saturates to 0/1 in the far tails; never throws.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Inverse standard normal CDF, AS241-class rational approximation
/// (relative accuracy ~1e-16). Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

/// Shared numerical tolerances; the defaults are used everywhere unless a
/// caller overrides them explicitly.
struct Tolerances {
  double root_f_tol = 1e-12;    // |f| accepted at a refined root
  double bracket_tol = 1e-12;   // width of the final bracket
  double tangency_tol = 1e-9;   // |f| at a grid point that flags a grazing root
  int grid_n = 4096;            // default scan resolution
  double domain_clip = 1e-12;   // open clipping of (0,1) scan domains
};

/// Sign-change interval: lo < hi and f_lo * f_hi <= 0.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

struct Root {
  double x = 0.0;
  double f = 0.0;          // residual at x
  bool degenerate = false; // grazing (double) root, no sign change
};

/// Every sign-change root of a continuous f on [lo, hi], located by a uniform
/// scan of grid_n points and refined to |f| <= root_f_tol and bracket width
/// <= bracket_tol, sorted ascending. Grid points where |f| < tangency_tol
/// without a nearby sign change are investigated: a local extremum grazing
/// zero is reported as a degenerate root; an extremum that dips through zero
/// yields the two enclosing simple roots.
std::vector<Root> enumerate_roots(const std::function<double(double)>& f,
                                  double lo, double hi, int grid_n,
                                  const Tolerances& tol = {});

/// Refine a sign-change bracket to the shared tolerances.
Root refine_root(const std::function<double(double)>& f, Bracket br,
                 const Tolerances& tol = {});

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive; sum to sqrt(pi)
};

/// Gauss-Hermite rule: sum_i w_i f(x_i) ~= integral f(t) exp(-t^2) dt,
/// exact for polynomials of degree <= 2*order-1. Orders 2..256.
QuadratureRule gauss_hermite(int order);

}  // namespace ggame::num
