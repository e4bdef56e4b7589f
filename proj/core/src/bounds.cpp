#include "isoprofile/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "isoprofile/errors.hpp"
#include "isoprofile/numerics.hpp"

namespace isoprofile {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.693147180559945309417232121458176568;

// Relative slack absorbing solver/quadrature noise in exact-inequality checks.
constexpr double kCheckSlack = 1e-10;

void require_finite_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw DomainError(std::string(what) + " must be finite and positive");
  }
}

// (1 - cs_k(r)) / k with a series fallback where the subtraction cancels;
// smooth in k through 0 (limit r^2/2).
double one_minus_cs_over_k(double k, double r) {
  if (std::abs(k) * r * r < 1e-8) {
    const double x = k * r * r;
    return 0.5 * r * r * (1.0 - x / 12.0 + x * x / 360.0);
  }
  return (1.0 - cs(k, r)) / k;
}

// Model volume raised to -1/(2p), stable for arbitrarily large radii when
// k < 0 (log-asymptotic form past sqrt(-k) t > 30) and saturating at the
// total volume beyond the conjugate radius when k > 0.
double inverse_volume_power(const SpaceForm& m, double t, double inv2p) {
  const double tc = std::min(t, m.radial_limit());
  if (tc < 1e-8) {
    // Near the pole the volume is omega_n t^n up to O(k t^2); evaluate in
    // logs so the open quadrature rule's extreme nodes (t down to ~1e-300,
    // where t^n underflows) stay finite.  n/(2p) < 1 keeps the result below
    // overflow.
    return std::exp(-inv2p *
                    (std::log(unit_ball_volume(m.n)) + m.n * std::log(tc)));
  }
  if (m.k < 0.0) {
    const double a = std::sqrt(-m.k);
    if (a * tc > 30.0) {
      // integral_0^t sn^m ~ e^{m a t} / (m a 2^m |k|^{m/2}); relative error
      // below e^{-60}.
      const double mm = m.n - 1;
      const double log_vol = std::log(unit_sphere_area(m.n)) + mm * a * tc -
                             std::log(mm * a) - mm * kLn2 -
                             0.5 * mm * std::log(-m.k);
      return std::exp(-inv2p * log_vol);
    }
  }
  return std::pow(model_volume(m, tc), -inv2p);
}

double gap_leading_term(const BoundParams& params, double beta) {
  return std::sqrt(kappa(params.n, params.p) * params.norm) *
         std::pow(beta, (2.0 * params.p - 1.0) / (2.0 * params.p));
}

// integral_0^rb [ mbar(r/Lambda) - mbar(r) ] * weight * Abar(r) dr.  The
// bracket behaves like (n-1)(Lambda-1)/r near the pole, so the full
// integrand extends continuously with value ~ r^{n-2}.
double f_gap_integral(const SpaceForm& m, double lambda_factor, double rb,
                      double weight) {
  const int n = m.n;
  const double area_const = unit_sphere_area(n);
  const double tiny = 1e-9 * std::max(1.0, rb);
  auto integrand = [&m, lambda_factor, n, area_const, tiny](double r) {
    if (r <= tiny) {
      return (n - 1.0) * (lambda_factor - 1.0) * area_const *
             std::pow(r, n - 2);
    }
    const double gap = model_mean_curvature(m, r / lambda_factor) -
                       model_mean_curvature(m, r);
    return gap * area_const * std::pow(sn(m.k, r), n - 1);
  };
  return weight *
         integrate(integrand, 0.0, rb, Tolerance{1e-13, 1e-11, 60}, false);
}

double dilation_factor(const BoundParams& params, bool relative) {
  if (params.norm == 0.0) return 1.0;
  const double c =
      relative ? C1_constant(params) : C_constant(params);
  return std::pow(1.0 + c * std::sqrt(params.norm),
                  q_exponent(params.n, params.p, params.k));
}

// Run fn(0..count-1), optionally on several threads; each index writes only
// its own slot, so results do not depend on the schedule.  The first
// exception is rethrown after all workers finish.
template <typename Fn>
void parallel_rows(std::size_t count, int jobs, Fn&& fn) {
  if (jobs < 1) throw DomainError("jobs must be >= 1");
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          break;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> sorted_betas(const std::vector<double>& betas,
                                 double ceiling, const char* what) {
  if (betas.empty()) throw DomainError(std::string(what) + ": empty beta grid");
  std::vector<double> sorted = betas;
  std::sort(sorted.begin(), sorted.end());
  for (double b : sorted) {
    if (!std::isfinite(b) || !(b > 0.0) || !(b < ceiling)) {
      throw DomainError(std::string(what) + ": beta " + format_double(b) +
                        " outside (0, " + format_double(ceiling) + ")");
    }
  }
  return sorted;
}

std::vector<std::pair<std::string, std::string>> base_inputs(
    const BoundParams& params) {
  return {{"n", format_double(params.n)},
          {"p", format_double(params.p)},
          {"k", format_double(params.k)},
          {"d", format_double(params.d)},
          {"norm", format_double(params.norm)}};
}

}  // namespace

double kappa(int n, double p) {
  if (n < 2) throw DomainError("kappa: dimension must be >= 2");
  if (!std::isfinite(p) || !(2.0 * p > n)) {
    throw DomainError("kappa: requires p > n/2");
  }
  return (n - 1.0) * (2.0 * p - 1.0) / (2.0 * p - n);
}

double q_exponent(int n, double p, double k) {
  if (n < 2) throw DomainError("q_exponent: dimension must be >= 2");
  if (!std::isfinite(p) || !(2.0 * p > n)) {
    throw DomainError("q_exponent: requires p > n/2");
  }
  if (!std::isfinite(k)) throw DomainError("q_exponent: curvature must be finite");
  return k > 0.0 ? 2.0 * p : 2.0 * p / n;
}

void BoundParams::validate() const {
  if (n < 2) throw DomainError("BoundParams: dimension must be >= 2");
  if (!std::isfinite(p) || !(2.0 * p > n)) {
    throw DomainError("BoundParams: requires p > n/2");
  }
  if (!std::isfinite(k)) {
    throw DomainError("BoundParams: curvature must be finite");
  }
  if (std::isnan(d) || !(d > 0.0)) {
    throw DomainError("BoundParams: diameter must be positive");
  }
  if (!std::isfinite(norm) || norm < 0.0) {
    throw DomainError("BoundParams: norm must be finite and >= 0");
  }
}

double C_constant(const BoundParams& params) {
  params.validate();
  const SpaceForm m{params.n, params.k};
  m.validate();
  const double inv2p = 1.0 / (2.0 * params.p);
  const double sqrt_kappa = std::sqrt(kappa(params.n, params.p));
  auto integrand = [&m, inv2p](double t) {
    return inverse_volume_power(m, t, inv2p);
  };
  if (std::isinf(params.d)) {
    if (params.k >= 0.0) {
      throw NonConvergence(
          "C_constant: integral diverges for k >= 0 with infinite diameter");
    }
    // Truncate the exponentially decaying tail by interval doubling.
    double acc = integrate(integrand, 0.0, 1.0, Tolerance{1e-15, 1e-12, 60},
                           true);
    double t_lo = 1.0;
    for (int iter = 0; iter < 64; ++iter) {
      const double chunk = integrate(integrand, t_lo, 2.0 * t_lo,
                                     Tolerance{1e-16, 1e-12, 60}, false);
      acc += chunk;
      t_lo *= 2.0;
      if (chunk <= 1e-14 * acc) return sqrt_kappa * acc;
    }
    throw NonConvergence("C_constant: tail truncation did not converge");
  }
  const double integral =
      integrate(integrand, 0.0, params.d, Tolerance{1e-15, 1e-12, 60}, true);
  return sqrt_kappa * integral;
}

double C1_constant(const BoundParams& params) {
  return std::pow(2.0, 1.0 / (2.0 * params.p)) * C_constant(params);
}

bool check_radius_dilation(int n, double k, double alpha, double r,
                           double rbar) {
  if (n < 2) throw DomainError("check_radius_dilation: dimension must be >= 2");
  if (!std::isfinite(k)) {
    throw DomainError("check_radius_dilation: curvature must be finite");
  }
  require_finite_positive(alpha, "check_radius_dilation: alpha");
  require_finite_positive(r, "check_radius_dilation: r");
  require_finite_positive(rbar, "check_radius_dilation: rbar");
  if (k > 0.0) {
    if (!(alpha >= 1.0 && alpha <= 2.0)) {
      throw DomainError("check_radius_dilation: k > 0 requires alpha in [1, 2]");
    }
    const double limit = kPi / std::sqrt(k);
    if (!(r <= 0.5 * limit * (1.0 + 1e-12))) {
      throw DomainError(
          "check_radius_dilation: k > 0 requires r <= pi/(2 sqrt(k))");
    }
    if (!(rbar <= limit * (1.0 + 1e-12))) {
      throw DomainError(
          "check_radius_dilation: rbar exceeds the conjugate radius");
    }
  } else if (!(alpha >= 1.0)) {
    throw DomainError("check_radius_dilation: requires alpha >= 1");
  }
  const double vol_big = sn_power_integral(n, k, rbar);
  const double vol_small = alpha * sn_power_integral(n, k, r);
  if (vol_big > vol_small * (1.0 + kCheckSlack)) {
    throw DomainError(
        "check_radius_dilation: volume hypothesis not satisfied");
  }
  const double bound = k > 0.0 ? alpha * r : std::pow(alpha, 1.0 / n) * r;
  return rbar <= bound * (1.0 + kCheckSlack);
}

double smallness_factor(const BoundParams& params) {
  params.validate();
  if (params.norm == 0.0) return 1.0;
  const double c = C_constant(params);
  return std::pow(1.0 + c * std::sqrt(params.norm), 2.0 * params.p);
}

double relative_smallness_factor(const BoundParams& params) {
  params.validate();
  if (params.norm == 0.0) return 1.0;
  const double c = C1_constant(params);
  return std::pow(1.0 + c * std::sqrt(params.norm), 2.0 * params.p);
}

bool smallness_ok(const BoundParams& params) {
  params.validate();
  if (params.k <= 0.0) return true;
  return smallness_factor(params) <= 2.0;
}

bool relative_smallness_ok(const BoundParams& params) {
  params.validate();
  if (params.k <= 0.0) return true;
  return relative_smallness_factor(params) <= 2.0;
}

bool in_regime(const BoundParams& params, bool relative) {
  params.validate();
  if (params.k <= 0.0) return true;
  const double half_limit = 0.5 * kPi / std::sqrt(params.k);
  if (!(params.d < half_limit)) return false;
  return relative ? relative_smallness_ok(params) : smallness_ok(params);
}

double f_error(const BoundParams& params, double beta) {
  params.validate();
  require_finite_positive(beta, "f_error: beta");
  const SpaceForm m{params.n, params.k};
  m.validate();
  if (params.k > 0.0 && !(beta < m.total_volume())) {
    throw DomainError("f_error: beta must be below the model total volume");
  }
  if (params.norm == 0.0) return 0.0;
  const double lambda_factor = dilation_factor(params, /*relative=*/false);
  const double rb = model_radius_for_volume(m, beta);
  return f_gap_integral(m, lambda_factor, rb, 1.0);
}

double relative_error_term(const BoundParams& params, double beta) {
  params.validate();
  require_finite_positive(beta, "relative_error_term: beta");
  const SpaceForm m{params.n, params.k};
  m.validate();
  if (params.k > 0.0 && !(2.0 * beta < m.total_volume())) {
    throw DomainError(
        "relative_error_term: 2*beta must be below the model total volume");
  }
  if (params.norm == 0.0) return 0.0;
  const double lambda_factor = dilation_factor(params, /*relative=*/true);
  const double rb = model_radius_for_volume(m, 2.0 * beta);
  return f_gap_integral(m, lambda_factor, rb, 0.5);
}

double main_bound(const BoundParams& params, double beta,
                  SmallnessPolicy policy) {
  params.validate();
  require_finite_positive(beta, "main_bound: beta");
  if (policy == SmallnessPolicy::kThrow && params.k > 0.0 &&
      !smallness_ok(params)) {
    throw SmallnessViolation("main_bound: smallness factor " +
                             format_double(smallness_factor(params)) +
                             " exceeds 2");
  }
  return gap_leading_term(params, beta) + f_error(params, beta);
}

double relative_bound(const BoundParams& params, double beta,
                      SmallnessPolicy policy) {
  params.validate();
  require_finite_positive(beta, "relative_bound: beta");
  if (policy == SmallnessPolicy::kThrow && params.k > 0.0 &&
      !relative_smallness_ok(params)) {
    throw SmallnessViolation("relative_bound: smallness factor " +
                             format_double(relative_smallness_factor(params)) +
                             " exceeds 2");
  }
  return gap_leading_term(params, beta) + relative_error_term(params, beta);
}

double mid_gap_bound(const WarpedManifold& manifold, const BoundParams& params,
                     double beta) {
  params.validate();
  require_finite_positive(beta, "mid_gap_bound: beta");
  if (params.n != manifold.dimension()) {
    throw DomainError("mid_gap_bound: params.n must match the manifold");
  }
  if (!(beta < manifold.total_volume())) {
    throw DomainError("mid_gap_bound: beta must be below the manifold volume");
  }
  const SpaceForm m{params.n, params.k};
  m.validate();
  const double r_top = manifold.radius_for_volume(beta);
  const double tiny = 1e-10 * std::max(1.0, r_top);
  auto integrand = [&manifold, &m, tiny](double r) {
    if (r <= tiny) return 0.0;
    const double volume = manifold.ball_volume(r);
    const double rbar = model_radius_for_volume(m, volume);
    const double gap =
        model_mean_curvature(m, r) - model_mean_curvature(m, rbar);
    return gap * manifold.ball_area(r);
  };
  const double integral =
      integrate(integrand, 0.0, r_top, Tolerance{1e-10, 1e-8, 60}, false);
  return gap_leading_term(params, beta) + integral;
}

double cap_area_witness(const SpaceForm& model, double ball_radius, double r) {
  model.validate();
  require_finite_positive(ball_radius, "cap_area_witness: ball_radius");
  require_finite_positive(r, "cap_area_witness: r");
  if (model.k > 0.0 &&
      !(ball_radius <= 0.5 * model.radial_limit() * (1.0 + 1e-12))) {
    throw DomainError(
        "cap_area_witness: ball_radius exceeds half the conjugate radius");
  }
  if (!(r < 2.0 * ball_radius)) {
    throw DomainError("cap_area_witness: requires r < 2 * ball_radius");
  }
  // Opening angle of the cap at distance r from a boundary point: law of
  // cosines in curvature k, written with the k-smooth ratio (1 - cs)/k so
  // one expression serves every sign of k.
  double cos_angle;
  if (model.k == 0.0) {
    cos_angle = r / (2.0 * ball_radius);
  } else {
    cos_angle = cs(model.k, ball_radius) * one_minus_cs_over_k(model.k, r) /
                (sn(model.k, r) * sn(model.k, ball_radius));
  }
  cos_angle = std::min(1.0, std::max(-1.0, cos_angle));
  const double angle = std::acos(cos_angle);
  return unit_sphere_area(model.n - 1) *
         std::pow(sn(model.k, r), model.n - 1) *
         sn_power_integral(model.n - 1, 1.0, angle);
}

double cap_volume(const SpaceForm& model, double ball_radius, double r) {
  model.validate();
  require_finite_positive(ball_radius, "cap_volume: ball_radius");
  require_finite_positive(r, "cap_volume: r");
  if (model.k > 0.0 &&
      !(ball_radius <= 0.5 * model.radial_limit() * (1.0 + 1e-12))) {
    throw DomainError(
        "cap_volume: ball_radius exceeds half the conjugate radius");
  }
  if (!(r <= 2.0 * ball_radius * (1.0 + 1e-12))) {
    throw DomainError("cap_volume: requires r <= 2 * ball_radius");
  }
  const double top = std::min(r, 2.0 * ball_radius);
  auto integrand = [&model, ball_radius](double s) {
    if (s >= 2.0 * ball_radius) return 0.0;
    return cap_area_witness(model, ball_radius, s);
  };
  // The area has a sqrt cusp where the sphere closes at r = 2*ball_radius;
  // the open rule absorbs it.
  return integrate(integrand, 0.0, top, Tolerance{1e-13, 1e-12, 60}, true);
}

double relative_profile_witness(const SpaceForm& model, double ball_radius,
                                double beta) {
  model.validate();
  require_finite_positive(ball_radius, "relative_profile_witness: ball_radius");
  const double domain_volume = model_volume(model, ball_radius);
  if (!std::isfinite(beta) || !(beta > 0.0) || !(beta < domain_volume)) {
    throw DomainError(
        "relative_profile_witness: beta outside (0, ball volume)");
  }
  auto volume_at = [&model, ball_radius](double r) {
    return cap_volume(model, ball_radius, r);
  };
  const double lo = 1e-9 * ball_radius;
  const double hi = 2.0 * ball_radius * (1.0 - 1e-13);
  const double r_star =
      solve_monotone(volume_at, beta, lo, hi,
                     Tolerance{1e-9 * std::max(1.0, domain_volume), 1e-12, 60});
  return cap_area_witness(model, ball_radius, r_star);
}

BoundParams params_for_manifold(const WarpedManifold& manifold, double p,
                                double k) {
  BoundParams params;
  params.n = manifold.dimension();
  params.p = p;
  params.k = k;
  params.d = manifold.diameter();
  params.norm = manifold.whole_manifold_ricci_norm(p, k).value;
  params.validate();
  return params;
}

double beta_ceiling(const WarpedManifold& manifold, double k) {
  double ceiling = manifold.total_volume();
  if (k > 0.0) {
    const SpaceForm m{manifold.dimension(), k};
    ceiling = std::min(ceiling, m.total_volume());
  }
  return ceiling;
}

std::vector<ComparisonReport> verify_h2(const WarpedManifold& manifold,
                                        const BoundParams& params,
                                        const std::vector<double>& betas,
                                        double tol, int jobs,
                                        const std::string& theorem_id) {
  params.validate();
  require_finite_positive(tol, "verify_h2: tol");
  if (params.n != manifold.dimension()) {
    throw DomainError("verify_h2: params.n must match the manifold dimension");
  }
  const SpaceForm m{params.n, params.k};
  m.validate();
  const std::vector<double> grid =
      sorted_betas(betas, beta_ceiling(manifold, params.k), "verify_h2");
  const std::string id =
      theorem_id.empty() ? (params.k > 0.0 ? "1.2" : "1.1") : theorem_id;
  const bool regime = in_regime(params, /*relative=*/false);
  const double lambda_factor =
      params.norm > 0.0 ? dilation_factor(params, /*relative=*/false) : 1.0;
  auto inputs = base_inputs(params);
  inputs.insert(inputs.begin(), {"manifold", manifold.name()});

  std::vector<ComparisonReport> rows(grid.size());
  parallel_rows(grid.size(), jobs, [&](std::size_t i) {
    const double beta = grid[i];
    ComparisonReport row;
    row.theorem_id = id;
    row.beta = beta;
    row.lhs = manifold.ball_profile(beta) - model_h2(m, beta);
    row.rhs = params.norm == 0.0
                  ? 0.0
                  : gap_leading_term(params, beta) +
                        f_gap_integral(m, lambda_factor,
                                       model_radius_for_volume(m, beta), 1.0);
    row.margin = row.rhs - row.lhs;
    row.pass = row.margin >= -tol;
    row.tolerance = tol;
    row.in_regime = regime;
    row.inputs = inputs;
    rows[i] = std::move(row);
  });
  return rows;
}

std::vector<ComparisonReport> verify_relative(const SpaceForm& model,
                                              double ball_radius,
                                              const BoundParams& params,
                                              const std::vector<double>& betas,
                                              double tol, int jobs,
                                              const std::string& theorem_id) {
  params.validate();
  model.validate();
  require_finite_positive(tol, "verify_relative: tol");
  if (params.n != model.n || params.k != model.k) {
    throw DomainError("verify_relative: params must match the model space");
  }
  require_finite_positive(ball_radius, "verify_relative: ball_radius");
  if (model.k > 0.0 &&
      !(ball_radius <= 0.5 * model.radial_limit() * (1.0 + 1e-12))) {
    throw DomainError(
        "verify_relative: ball_radius exceeds half the conjugate radius");
  }
  const double domain_volume = model_volume(model, ball_radius);
  const std::vector<double> grid =
      sorted_betas(betas, domain_volume, "verify_relative");
  const std::string id =
      theorem_id.empty() ? (params.k > 0.0 ? "2.4" : "2.3") : theorem_id;
  const bool regime = in_regime(params, /*relative=*/true);
  const double lambda_factor =
      params.norm > 0.0 ? dilation_factor(params, /*relative=*/true) : 1.0;
  auto inputs = base_inputs(params);
  inputs.insert(inputs.begin(),
                {"ball_radius", format_double(ball_radius)});

  std::vector<ComparisonReport> rows(grid.size());
  parallel_rows(grid.size(), jobs, [&](std::size_t i) {
    const double beta = grid[i];
    ComparisonReport row;
    row.theorem_id = id;
    row.beta = beta;
    row.lhs = relative_profile_witness(model, ball_radius, beta) -
              half_space_h2(model, beta);
    row.rhs = params.norm == 0.0
                  ? 0.0
                  : gap_leading_term(params, beta) +
                        f_gap_integral(model, lambda_factor,
                                       model_radius_for_volume(model, 2.0 * beta),
                                       0.5);
    row.margin = row.rhs - row.lhs;
    row.pass = row.margin >= -tol;
    row.tolerance = tol;
    row.in_regime = regime;
    row.inputs = inputs;
    rows[i] = std::move(row);
  });
  return rows;
}

}  // namespace isoprofile
