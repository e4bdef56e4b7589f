#include "isoprofile/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isoprofile {
namespace {

constexpr double kPiHalf = 1.5707963267948966;

double checked_eval(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw DomainError("integrand evaluated non-finite at x=" + std::to_string(x));
  }
  return v;
}

struct SimpsonPanel {
  double fa, fm, fb, estimate;
};

SimpsonPanel simpson_panel(const std::function<double(double)>& f, double a,
                           double b, double fa, double fb) {
  const double m = 0.5 * (a + b);
  const double fm = checked_eval(f, m);
  return {fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb)};
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, const SimpsonPanel& whole, double budget,
                        int depth) {
  const double m = 0.5 * (a + b);
  const SimpsonPanel left = simpson_panel(f, a, m, whole.fa, whole.fm);
  const SimpsonPanel right = simpson_panel(f, m, b, whole.fm, whole.fb);
  const double two = left.estimate + right.estimate;
  const double err = two - whole.estimate;
  if (std::abs(err) <= 15.0 * budget || (b - a) <= std::abs(m) * 1e-15) {
    return two + err / 15.0;
  }
  if (depth <= 0) {
    throw NonConvergence("adaptive quadrature exhausted max_depth on [" +
                         std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return adaptive_simpson(f, a, m, left, 0.5 * budget, depth - 1) +
         adaptive_simpson(f, m, b, right, 0.5 * budget, depth - 1);
}

// Tanh-sinh (double exponential) rule: open, spectrally accurate for
// integrands analytic on the open interval, robust to integrable endpoint
// singularities.  Nodes are parameterized by the distance to the nearer
// endpoint so evaluation points never collapse onto a or b.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);

  // One term of the trapezoid sum at parameter v >= 0 (and its mirror -v).
  const auto term = [&](double v, double& out) -> bool {
    const double s = kPiHalf * std::sinh(v);
    const double w = kPiHalf * std::cosh(v) / std::pow(std::cosh(s), 2);
    // Distance from the mapped node to the near endpoint:
    // half*(1 - tanh(s)) = half * 2 / (1 + e^{2s}).
    const double dist = half * 2.0 / (1.0 + std::exp(2.0 * s));
    if (!(dist > 0.0) || !(w > 1e-300)) return false;  // underflow: stop
    double sum = 0.0;
    if (v == 0.0) {
      sum = w * checked_eval(f, mid);
    } else {
      sum = w * (checked_eval(f, a + dist) + checked_eval(f, b - dist));
    }
    out = sum;
    return true;
  };

  double prev = std::numeric_limits<double>::quiet_NaN();
  const int max_level = std::min(tol.max_depth, 12);
  // Level l: step h = 1/2^l over v in [0, v_max]; v_max grows mildly with l.
  for (int level = 2; level <= max_level; ++level) {
    const double h = 1.0 / static_cast<double>(1 << level);
    const double v_max = 6.0;
    double sum = 0.0;
    for (double v = 0.0; v <= v_max; v += h) {
      double t = 0.0;
      if (!term(v, t)) break;
      sum += t;
    }
    const double estimate = sum * h * half;
    if (level > 2) {
      const double err = std::abs(estimate - prev);
      if (err <= std::max(tol.abs_tol, tol.rel_tol * std::abs(estimate))) {
        return estimate;
      }
    }
    prev = estimate;
  }
  throw NonConvergence("tanh-sinh quadrature did not settle within level cap");
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol >= 0.0) || max_depth < 1) {
    throw DomainError("invalid Tolerance: abs_tol must be > 0, rel_tol >= 0, max_depth >= 1");
  }
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol, bool endpoint_singular) {
  tol.validate();
  if (!(a <= b)) {
    throw DomainError("integrate: require a <= b");
  }
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: endpoints must be finite");
  }
  if (endpoint_singular) {
    return tanh_sinh(f, a, b, tol);
  }
  // Coarse pass to scale the relative part of the budget.
  const double fa = checked_eval(f, a);
  const double fb = checked_eval(f, b);
  const SimpsonPanel whole = simpson_panel(f, a, b, fa, fb);
  double scale = std::abs(whole.estimate);
  // One refinement to stabilize the scale estimate for oscillatory f.
  {
    const double m = 0.5 * (a + b);
    const SimpsonPanel l = simpson_panel(f, a, m, whole.fa, whole.fm);
    const SimpsonPanel r = simpson_panel(f, m, b, whole.fm, whole.fb);
    scale = std::max(scale, std::abs(l.estimate) + std::abs(r.estimate));
  }
  const double budget = std::max(tol.abs_tol, tol.rel_tol * scale);
  return adaptive_simpson(f, a, b, whole, budget, tol.max_depth);
}

double solve_monotone(const std::function<double(double)>& f, double target,
                      double lo, double hi, const Tolerance& tol) {
  tol.validate();
  if (!(lo <= hi)) {
    throw DomainError("solve_monotone: require lo <= hi");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw DomainError("solve_monotone: endpoint evaluation non-finite");
  }
  double sign = 1.0;
  if (flo > fhi) {  // decreasing: solve -f(r) = -target instead
    sign = -1.0;
    flo = -flo;
    fhi = -fhi;
  }
  const double t = sign * target;
  const double slack = 1e-12 * std::max(1.0, std::abs(flo) + std::abs(fhi));
  if (t < flo - slack || t > fhi + slack) {
    throw BracketError("solve_monotone: target outside bracketed range");
  }
  if (std::abs(flo - t) <= tol.abs_tol) return lo;
  if (std::abs(fhi - t) <= tol.abs_tol) return hi;

  double a = lo, b = hi, ga = flo - t, gb = fhi - t;
  double x = 0.5 * (a + b);
  const int cap = std::max(tol.max_depth * 3, 120);
  for (int it = 0; it < cap; ++it) {
    // Secant proposal clipped into the bracket; fall back to bisection.
    double prop = x;
    if (gb != ga) {
      prop = b - gb * (b - a) / (gb - ga);
    }
    const double mid = 0.5 * (a + b);
    if (!(prop > a && prop < b)) prop = mid;
    // Alternate with bisection to guarantee bracket shrink.
    x = (it % 2 == 0) ? prop : mid;
    const double gx = sign * f(x) - t;
    if (!std::isfinite(gx)) {
      throw DomainError("solve_monotone: evaluation non-finite inside bracket");
    }
    if (std::abs(gx) <= tol.abs_tol) return x;
    if (gx < 0.0) {
      a = x;
      ga = gx;
    } else {
      b = x;
      gb = gx;
    }
    if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, std::abs(a) + std::abs(b))) {
      // Bracket collapsed to rounding width; accept the better endpoint.
      return (std::abs(ga) < std::abs(gb)) ? a : b;
    }
  }
  throw NonConvergence("solve_monotone: iteration cap reached before |f-target| <= abs_tol");
}

double central_difference(const std::function<double(double)>& f, double x,
                          double h) {
  if (!(h > 0.0)) {
    throw DomainError("central_difference: step must be positive");
  }
  const double fp = f(x + h);
  const double fm = f(x - h);
  if (!std::isfinite(fp) || !std::isfinite(fm)) {
    throw DomainError("central_difference: stencil evaluation non-finite");
  }
  return (fp - fm) / (2.0 * h);
}

double default_fd_step(double x) {
  return std::max(1e-6, 1e-4 * std::abs(x));
}

}  // namespace isoprofile
