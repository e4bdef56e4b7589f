#include "isoprofile/spaceform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace isoprofile {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSeriesGuard = 1e-12;  // |k| t^2 below this: series paths
constexpr double kEdgeGuard = 1e-12;    // relative volume guard at endpoints

double require_radius_in_domain(const SpaceForm& m, double r) {
  if (!(r > 0.0) || !(r < m.radial_limit())) {
    throw DomainError("radius " + std::to_string(r) +
                      " outside the model radial domain");
  }
  return r;
}

}  // namespace

void SpaceForm::validate() const {
  if (n < 2) throw DomainError("SpaceForm: dimension must be >= 2");
  if (!std::isfinite(k)) throw DomainError("SpaceForm: curvature must be finite");
}

double SpaceForm::radial_limit() const {
  return k > 0.0 ? kPi / std::sqrt(k) : std::numeric_limits<double>::infinity();
}

double SpaceForm::total_volume() const {
  if (!(k > 0.0)) {
    throw DomainError("total_volume: finite only for k > 0");
  }
  return unit_sphere_area(n) * sn_power_integral(n, k, radial_limit());
}

double sn(double k, double t) {
  const double kt2 = std::abs(k) * t * t;
  if (kt2 < kSeriesGuard) {
    return t * (1.0 - k * t * t / 6.0 + k * k * t * t * t * t / 120.0);
  }
  if (k > 0.0) {
    const double s = std::sqrt(k);
    return std::sin(s * t) / s;
  }
  const double s = std::sqrt(-k);
  return std::sinh(s * t) / s;
}

double cs(double k, double t) {
  const double kt2 = std::abs(k) * t * t;
  if (kt2 < kSeriesGuard) {
    return 1.0 - k * t * t / 2.0 + k * k * t * t * t * t / 24.0;
  }
  if (k > 0.0) {
    return std::cos(std::sqrt(k) * t);
  }
  return std::cosh(std::sqrt(-k) * t);
}

double unit_sphere_area(int n) {
  if (n < 1) throw DomainError("unit_sphere_area: dimension must be >= 1");
  if (n == 1) return 2.0;  // two-point sphere; avoids Gamma(1/2) rounding
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double unit_ball_volume(int n) {
  return unit_sphere_area(n) / n;
}

namespace {

// Series window for sn_power_integral.  The closed-form recurrence loses
// ~eps / (k r^2)^{(m+1)/2} relative accuracy to cancellation as r -> 0, so
// small radii take a series path instead: (sn(k,t)/t)^m is a polynomial in
// x = k t^2 (from sn/t = sum_j (-1)^j x^j / (2j+1)!), integrated term by
// term.  24 terms leave truncation below 1e-20 at |x| = 0.25 for any
// realistic power m.
constexpr int kSnSeriesTerms = 24;
constexpr double kSnSeriesWindow = 0.25;

using SnSeries = std::array<double, kSnSeriesTerms>;

SnSeries sn_series_product(const SnSeries& a, const SnSeries& b) {
  SnSeries c{};
  for (int i = 0; i < kSnSeriesTerms; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; i + j < kSnSeriesTerms; ++j) {
      c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

SnSeries sn_power_series_compute(int m) {
  SnSeries base{};
  double factorial = 1.0;  // (2j+1)!
  for (int j = 0; j < kSnSeriesTerms; ++j) {
    if (j > 0) factorial *= (2.0 * j) * (2.0 * j + 1.0);
    base[j] = (j % 2 == 0 ? 1.0 : -1.0) / factorial;
  }
  SnSeries result{};
  result[0] = 1.0;
  int e = m;
  while (e > 0) {
    if (e & 1) result = sn_series_product(result, base);
    e >>= 1;
    if (e > 0) base = sn_series_product(base, base);
  }
  return result;
}

// Coefficients of (sn/t)^m, cached per power (they do not depend on k).
const SnSeries& sn_power_series(int m) {
  thread_local std::vector<std::unique_ptr<SnSeries>> cache;
  if (m >= static_cast<int>(cache.size())) {
    cache.resize(static_cast<std::size_t>(m) + 1);
  }
  if (!cache[m]) {
    cache[m] = std::make_unique<SnSeries>(sn_power_series_compute(m));
  }
  return *cache[m];
}

}  // namespace

double sn_power_integral(int n, double k, double r) {
  if (n < 1) throw DomainError("sn_power_integral: dimension must be >= 1");
  if (!(r >= 0.0)) throw DomainError("sn_power_integral: radius must be >= 0");
  if (r == 0.0) return 0.0;
  const int m = n - 1;  // power of sn under the integral
  const double kr2 = std::abs(k) * r * r;
  if (kr2 < kSnSeriesWindow) {
    const SnSeries& b = sn_power_series(m);
    const double x = k * r * r;
    double acc = 0.0;
    for (int j = kSnSeriesTerms - 1; j >= 0; --j) {
      acc = acc * x + b[j] / (m + 1 + 2 * j);
    }
    return std::pow(r, m + 1) * acc;
  }
  // Stable two-term recurrence:
  //   I_m = [ (m-1) I_{m-2} - sn^{m-1}(r) cs(r) ] / (k m),  m >= 2,
  // with I_0 = r and I_1 = (1 - cs(r)) / k, the latter in half-angle form
  // to avoid the cancellation in 1 - cs.
  const double snr = sn(k, r);
  const double csr = cs(k, r);
  double even = r;  // I_0
  double odd;       // I_1
  if (k > 0.0) {
    const double s = std::sin(0.5 * std::sqrt(k) * r);
    odd = 2.0 * s * s / k;
  } else {
    const double s = std::sinh(0.5 * std::sqrt(-k) * r);
    odd = -2.0 * s * s / k;
  }
  if (m == 0) return even;
  if (m == 1) return odd;
  double result = 0.0;
  for (int mm = 2; mm <= m; ++mm) {
    const double prev = (mm % 2 == 0) ? even : odd;
    const double value =
        ((mm - 1) * prev - std::pow(snr, mm - 1) * csr) / (k * mm);
    if (mm % 2 == 0) {
      even = value;
    } else {
      odd = value;
    }
    result = value;
  }
  return result;
}

double model_area(const SpaceForm& m, double r) {
  m.validate();
  if (!(r >= 0.0) || !(r <= m.radial_limit())) {
    throw DomainError("model_area: radius outside [0, radial limit]");
  }
  return unit_sphere_area(m.n) * std::pow(sn(m.k, r), m.n - 1);
}

double model_volume(const SpaceForm& m, double r) {
  m.validate();
  if (!(r >= 0.0) || !(r <= m.radial_limit())) {
    throw DomainError("model_volume: radius outside [0, radial limit]");
  }
  return unit_sphere_area(m.n) * sn_power_integral(m.n, m.k, r);
}

double model_mean_curvature(const SpaceForm& m, double r) {
  m.validate();
  require_radius_in_domain(m, r);
  return (m.n - 1) * cs(m.k, r) / sn(m.k, r);
}

ModelGeometry model_geometry(const SpaceForm& m, double r) {
  return ModelGeometry{r, model_volume(m, r), model_area(m, r),
                       model_mean_curvature(m, r)};
}

double model_radius_for_volume(const SpaceForm& m, double volume) {
  m.validate();
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw DomainError("model_radius_for_volume: volume must be positive finite");
  }
  double hi;
  if (m.k > 0.0) {
    const double total = m.total_volume();
    if (volume >= total) {
      throw DomainError("model_radius_for_volume: volume exceeds model total");
    }
    hi = m.radial_limit();
  } else {
    hi = 1.0;
    while (model_volume(m, hi) < volume) {
      hi *= 2.0;
      if (hi > 1e5 || !std::isfinite(model_volume(m, hi))) {
        throw NonConvergence("model_radius_for_volume: volume target too large");
      }
    }
  }
  Tolerance tol;
  tol.abs_tol = std::max(1e-280, 1e-13 * volume);
  return solve_monotone([&](double r) { return model_volume(m, r); }, volume,
                        0.0, hi, tol);
}

double model_h2(const SpaceForm& m, double beta) {
  m.validate();
  if (m.k > 0.0) {
    const double total = m.total_volume();
    if (!(beta >= kEdgeGuard * total) || !(beta <= (1.0 - kEdgeGuard) * total)) {
      throw DomainError("model_h2: volume outside the open model range");
    }
  } else if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("model_h2: volume must be positive finite");
  }
  return model_area(m, model_radius_for_volume(m, beta));
}

double model_h1(const SpaceForm& m, double beta) {
  m.validate();
  if (!(m.k > 0.0)) {
    throw DomainError("model_h1: normalized profile needs k > 0");
  }
  if (!(beta >= kEdgeGuard) || !(beta <= 1.0 - kEdgeGuard)) {
    throw DomainError("model_h1: volume fraction outside (0, 1)");
  }
  const double total = m.total_volume();
  return model_h2(m, beta * total) / total;
}

double half_space_h2(const SpaceForm& m, double beta) {
  m.validate();
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("half_space_h2: volume must be positive finite");
  }
  if (m.k > 0.0 && !(beta <= (1.0 - kEdgeGuard) * 0.5 * m.total_volume())) {
    throw DomainError("half_space_h2: volume exceeds the half-space total");
  }
  const double r = model_radius_for_volume(m, 2.0 * beta);
  return 0.5 * model_area(m, r);
}

LevyGromovConstants levy_gromov_constants(const SpaceForm& m, double diam,
                                          double alpha) {
  m.validate();
  if (!(m.k > 0.0)) {
    throw DomainError("levy_gromov_constants: k > 0 required");
  }
  if (!(diam > 0.0)) {
    throw DomainError("levy_gromov_constants: diameter must be positive");
  }
  if (!(alpha >= 1.0)) {
    throw DomainError("levy_gromov_constants: alpha must be >= 1");
  }
  LevyGromovConstants out;
  const double limit = m.radial_limit();
  out.d_prime = std::min(limit, diam);
  out.gamma_n = sn_power_integral(m.n, m.k, limit);
  out.lambda = sn_power_integral(m.n, m.k, out.d_prime);
  out.L = std::pow(out.gamma_n / out.lambda, 1.0 / m.n);
  // Normalizer: integral of sin(sqrt(k) t) over (0, pi/sqrt(k)) = 2/sqrt(k).
  const double denom = 2.0 / std::sqrt(m.k);
  out.epsilon = (alpha - 1.0) / alpha * out.L / denom;
  return out;
}

std::vector<double> log_symmetric_grid(double vmax, int count,
                                       double margin_frac) {
  if (!(vmax > 0.0) || !std::isfinite(vmax)) {
    throw DomainError("log_symmetric_grid: vmax must be positive finite");
  }
  if (count < 1) throw DomainError("log_symmetric_grid: count must be >= 1");
  if (!(margin_frac > 0.0) || !(margin_frac < 0.5)) {
    throw DomainError("log_symmetric_grid: margin_frac must lie in (0, 0.5)");
  }
  std::vector<double> grid;
  grid.reserve(count);
  const int half = count / 2;
  const double lo = margin_frac * vmax;
  const double center = 0.5 * vmax;
  for (int i = 0; i < half; ++i) {
    // Log-spaced on [lo, center), last point strictly below the center.
    const double f = static_cast<double>(i) / half;
    grid.push_back(lo * std::pow(center / lo, f));
  }
  if (count % 2 == 1) grid.push_back(center);
  for (int i = half - 1; i >= 0; --i) {
    grid.push_back(vmax - grid[i]);
  }
  return grid;
}

}  // namespace isoprofile
