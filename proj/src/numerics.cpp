#include "numerics.hpp"

#include <algorithm>
#include <cmath>

namespace ggame::num {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

namespace {

// Wichura's PPND16 coefficients (AS 241).
constexpr double kA[8] = {
    3.3871328727963666080e0,  1.3314166789178437745e+2, 1.9715909503065514427e+3,
    1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
    3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kB[8] = {
    1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
    5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
    2.8729085735721942674e+4, 5.2264952788528545610e+3};
constexpr double kC[8] = {
    1.42343711074968357734e0,  4.63033784615654529590e0,  5.76949722146069140550e0,
    3.64784832476320460504e0,  1.27045825245236838258e0,  2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kD[8] = {
    1.0,                       2.05319162663775882187e0,  1.67638483018380384940e0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
constexpr double kE[8] = {
    6.65790464350110377720e0,  5.46378491116411436990e0,  1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kF[8] = {
    1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

double poly7(const double (&c)[8], double x) {
  double r = c[7];
  for (int i = 6; i >= 0; --i) r = r * x + c[i];
  return r;
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw DomainError("normal_quantile: p must lie strictly in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly7(kA, r) / poly7(kB, r);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = poly7(kC, r) / poly7(kD, r);
  } else {
    r -= 5.0;
    val = poly7(kE, r) / poly7(kF, r);
  }
  return (q < 0.0) ? -val : val;
}

Root refine_root(const std::function<double(double)>& f, Bracket br,
                 const Tolerances& tol) {
  if (br.f_lo == 0.0) return {br.lo, 0.0, false};
  if (br.f_hi == 0.0) return {br.hi, 0.0, false};
  while (br.hi - br.lo > tol.bracket_tol) {
    const double mid = 0.5 * (br.lo + br.hi);
    if (!(mid > br.lo && mid < br.hi)) break;  // denormal floor
    const double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0, false};
    if (sign_of(fm) == sign_of(br.f_lo)) {
      br.lo = mid;
      br.f_lo = fm;
    } else {
      br.hi = mid;
      br.f_hi = fm;
    }
  }
  // Secant polish inside the final bracket.
  double x0 = br.lo, f0 = br.f_lo, x1 = br.hi, f1 = br.f_hi;
  double best_x = std::abs(f0) <= std::abs(f1) ? x0 : x1;
  double best_f = std::abs(f0) <= std::abs(f1) ? f0 : f1;
  for (int it = 0; it < 12 && std::abs(best_f) > tol.root_f_tol; ++it) {
    const double denom = f1 - f0;
    if (denom == 0.0) break;
    double x2 = x1 - f1 * (x1 - x0) / denom;
    if (!(x2 >= br.lo && x2 <= br.hi)) x2 = 0.5 * (br.lo + br.hi);
    const double f2 = f(x2);
    if (std::abs(f2) < std::abs(best_f)) {
      best_f = f2;
      best_x = x2;
    }
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (f2 == 0.0) break;
  }
  return {best_x, best_f, false};
}

namespace {

// Locate the extremum of s*f (s = sign of f around a grazing grid point) on
// [lo, hi] by golden-section search; f has no detected sign change there.
double argmin_signed(const std::function<double(double)>& f, double lo,
                     double hi, double s) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = s * f(c), fd = s * f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = s * f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = s * f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<Root> enumerate_roots(const std::function<double(double)>& f,
                                  double lo, double hi, int grid_n,
                                  const Tolerances& tol) {
  if (!(lo < hi)) throw DomainError("enumerate_roots: requires lo < hi");
  if (grid_n < 2) throw DomainError("enumerate_roots: requires grid_n >= 2");

  std::vector<double> xs(grid_n), fs(grid_n);
  const double h = (hi - lo) / (grid_n - 1);
  for (int i = 0; i < grid_n; ++i) {
    xs[i] = (i == grid_n - 1) ? hi : lo + i * h;
    fs[i] = f(xs[i]);
  }

  std::vector<Root> roots;
  std::vector<char> consumed(grid_n, 0);  // grid zeros already emitted

  for (int i = 0; i < grid_n; ++i) {
    if (fs[i] == 0.0 && !consumed[i]) {
      roots.push_back({xs[i], 0.0, false});
      consumed[i] = 1;
    }
  }
  for (int i = 0; i + 1 < grid_n; ++i) {
    if (fs[i] == 0.0 || fs[i + 1] == 0.0) continue;
    if (sign_of(fs[i]) != sign_of(fs[i + 1]))
      roots.push_back(refine_root(f, {xs[i], xs[i + 1], fs[i], fs[i + 1]}, tol));
  }

  // Grazing candidates: small |f| at an interior grid point, same sign on both
  // neighbours, locally minimal magnitude, and no refined root nearby.
  for (int i = 1; i + 1 < grid_n; ++i) {
    if (fs[i] == 0.0) continue;
    if (std::abs(fs[i]) >= tol.tangency_tol) continue;
    const int s = sign_of(fs[i]);
    if (sign_of(fs[i - 1]) != s || sign_of(fs[i + 1]) != s) continue;
    if (std::abs(fs[i]) > std::abs(fs[i - 1]) ||
        std::abs(fs[i]) > std::abs(fs[i + 1]))
      continue;
    const double a = xs[i - 1], b = xs[i + 1];
    bool near_existing = false;
    for (const Root& r : roots)
      if (r.x >= a - h && r.x <= b + h) near_existing = true;
    if (near_existing) continue;

    const double xe = argmin_signed(f, a, b, static_cast<double>(s));
    const double fe = f(xe);
    if (sign_of(fe) == -s) {
      // The dip actually crosses zero: two simple roots around the extremum.
      roots.push_back(refine_root(f, {a, xe, fs[i - 1], fe}, tol));
      roots.push_back(refine_root(f, {xe, b, fe, fs[i + 1]}, tol));
    } else if (std::abs(fe) < tol.tangency_tol) {
      roots.push_back({xe, fe, true});
    }
  }

  std::sort(roots.begin(), roots.end(),
            [](const Root& a, const Root& b) { return a.x < b.x; });
  // Merge duplicates produced by a zero landing exactly on a grid node.
  std::vector<Root> out;
  for (const Root& r : roots) {
    if (!out.empty() && std::abs(r.x - out.back().x) <= 4.0 * tol.bracket_tol &&
        r.degenerate == out.back().degenerate) {
      if (std::abs(r.f) < std::abs(out.back().f)) out.back() = r;
      continue;
    }
    out.push_back(r);
  }
  return out;
}

namespace {

// Orthonormal Hermite polynomial (weight exp(-x^2)) of degree n at z, plus
// its derivative sqrt(2n) * H~_{n-1}(z).
void hermite_eval(int n, double z, double* value, double* deriv) {
  constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}
  double p1 = kPiQuarterInv, p2 = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
  }
  *value = p1;
  *deriv = std::sqrt(2.0 * n) * p2;
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
  if (order < 2 || order > 256)
    throw DomainError("gauss_hermite: order must lie in [2,256]");
  const int n = order;
  const int m = n / 2;  // strictly positive roots; odd orders add z = 0

  // All positive roots lie below sqrt(2n+1); their minimal spacing is
  // ~pi/sqrt(2n), so an 8n-point scan brackets every sign change.
  const double z_max = std::sqrt(2.0 * n + 1.0);
  const int scan_n = 8 * n;
  std::vector<double> pos, wpos;  // ascending positive roots
  pos.reserve(m);
  // Start just above zero: odd orders have their root at z = 0 handled
  // explicitly, and the smallest positive root is O(1/sqrt(n)) away.
  double v_prev, d_unused;
  const double z0 = z_max * 0.5 / scan_n;
  hermite_eval(n, z0, &v_prev, &d_unused);
  double zl = z0;
  for (int i = 1; i <= scan_n && static_cast<int>(pos.size()) < m; ++i) {
    const double zr = z0 + (z_max - z0) * i / scan_n;
    double v, d;
    hermite_eval(n, zr, &v, &d);
    if ((v_prev > 0) != (v > 0)) {
      double lo = zl, hi = zr, flo = v_prev;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        double fm, dm;
        hermite_eval(n, mid, &fm, &dm);
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double z = 0.5 * (lo + hi);
      for (int it = 0; it < 4; ++it) {  // Newton polish
        double f, df;
        hermite_eval(n, z, &f, &df);
        const double dz = f / df;
        if (!std::isfinite(dz)) break;
        z -= dz;
        if (std::abs(dz) <= 1e-16 * z) break;
      }
      pos.push_back(z);
    }
    v_prev = v;
    zl = zr;
  }
  if (static_cast<int>(pos.size()) != m)
    throw SolverError("gauss_hermite: root scan lost a node");

  const auto weight_at = [&](double z) {
    double f, df;
    hermite_eval(n, z, &f, &df);
    return 2.0 / (df * df);
  };

  QuadratureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  for (int i = m - 1; i >= 0; --i) {  // ascending negatives
    rule.nodes.push_back(-pos[i]);
    rule.weights.push_back(weight_at(pos[i]));
  }
  if (n % 2 == 1) {
    rule.nodes.push_back(0.0);
    rule.weights.push_back(weight_at(0.0));
  }
  for (int i = 0; i < m; ++i) {  // ascending positives
    rule.nodes.push_back(pos[i]);
    rule.weights.push_back(rule.weights[m - 1 - i]);
  }
  return rule;
}

}  // namespace ggame::num
