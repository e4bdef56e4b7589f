#include "isoprofile/warped.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

#include "isoprofile/errors.hpp"
#include "isoprofile/numerics.hpp"

namespace isoprofile {

namespace {

double ipow(double x, int e) {
  double out = 1.0;
  while (e > 0) {
    if (e & 1) out *= x;
    x *= x;
    e >>= 1;
  }
  return out;
}

// Natural/clamped cubic spline through (x_i, y_i), evaluated via the moment
// (second-derivative) representation. Immutable after construction.
class CubicSpline {
 public:
  // left_slope is always enforced; right_slope is enforced when
  // clamp_right is true, otherwise the right end is natural (S'' = 0).
  CubicSpline(std::vector<double> x, std::vector<double> y, double left_slope,
              bool clamp_right, double right_slope)
      : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    std::vector<double> diag(n), off(n), rhs(n);
    const double h0 = x_[1] - x_[0];
    diag[0] = h0 / 3.0;
    off[0] = h0 / 6.0;
    rhs[0] = (y_[1] - y_[0]) / h0 - left_slope;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1];
      const double hr = x_[i + 1] - x_[i];
      diag[i] = (hl + hr) / 3.0;
      off[i] = hr / 6.0;
      rhs[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    const double hn = x_[n - 1] - x_[n - 2];
    if (clamp_right) {
      diag[n - 1] = hn / 3.0;
      rhs[n - 1] = right_slope - (y_[n - 1] - y_[n - 2]) / hn;
    } else {
      diag[n - 1] = 1.0;
      rhs[n - 1] = 0.0;
    }
    // Thomas elimination; subdiagonal entries mirror the superdiagonal except
    // at the natural right end, where the last row is just M = 0.
    for (std::size_t i = 1; i < n; ++i) {
      const double sub =
          (i == n - 1) ? (clamp_right ? hn / 6.0 : 0.0) : (x_[i] - x_[i - 1]) / 6.0;
      const double w = sub / diag[i - 1];
      diag[i] -= w * off[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m_[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      m_[i] = (rhs[i] - off[i] * m_[i + 1]) / diag[i];
    }
  }

  double value(double t) const {
    const auto [i, a, b, h] = locate(t);
    return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * a +
           (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
  }

  double deriv(double t) const {
    const auto [i, a, b, h] = locate(t);
    return -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) +
           (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0;
  }

  double second(double t) const {
    const auto [i, a, b, h] = locate(t);
    return (m_[i] * a + m_[i + 1] * b) / h;
  }

  double first_interior_knot() const { return x_[1]; }

 private:
  struct Cell {
    std::size_t i;
    double a;  // x_{i+1} - t
    double b;  // t - x_i
    double h;  // x_{i+1} - x_i
  };

  Cell locate(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    return Cell{i, x_[i + 1] - t, t - x_[i], x_[i + 1] - x_[i]};
  }

  std::vector<double> x_, y_, m_;
};

const char* kName = "WarpedManifold";

}  // namespace

WarpedManifold::WarpedManifold(int n, double R, WarpingFunction w, bool closed,
                               std::string name)
    : n_(n), R_(R), w_(std::move(w)), closed_(closed), name_(std::move(name)) {
  if (n_ < 2) throw DomainError(std::string(kName) + ": dimension must be >= 2");
  if (!(std::isfinite(R_) && R_ > 0.0)) {
    throw DomainError(std::string(kName) + ": radial extent must be positive");
  }
  if (!w_.phi || !w_.dphi || !w_.ddphi) {
    throw DomainError(std::string(kName) +
                      ": phi and both derivatives are required");
  }
  // Pole smoothness: phi(h) = h + O(h^3) and phi''(h) -> 0. A smooth pole
  // has |phi''(h)| ~ |phi'''(0)| h; the 1e-3 bound at h = 1e-4 admits
  // third derivatives up to ~10 (covering every preset family) while still
  // rejecting a genuinely nonvanishing phi''(0), which shows up as O(1).
  const double h = 1e-4;
  if (std::abs(w_.phi(h) / h - 1.0) > 1e-6) {
    throw DomainError(std::string(kName) + ": phi(h)/h - 1 too large at pole");
  }
  if (std::abs(w_.ddphi(h)) > 1e-3) {
    throw DomainError(std::string(kName) + ": phi'' too large at pole");
  }
  const int samples = 512;
  for (int i = 0; i < samples; ++i) {
    const double r = R_ * (i + 0.5) / samples;
    const double v = w_.phi(r);
    if (!(std::isfinite(v) && v > 0.0)) {
      throw DomainError(std::string(kName) +
                        ": phi must be positive on the interior");
    }
  }
  if (closed_) {
    if (std::abs(w_.phi(R_)) > 1e-6 * std::max(1.0, R_)) {
      throw DomainError(std::string(kName) +
                        ": closed manifold requires phi(R) = 0");
    }
    if (std::abs(w_.dphi(R_) + 1.0) > 1e-6) {
      throw DomainError(std::string(kName) +
                        ": closed manifold requires phi'(R) = -1");
    }
  }
  pole_guard_ = 1e-9 * std::max(1.0, R_);
  if (w_.volume) {
    total_volume_ = w_.volume(R_);
  } else {
    Tolerance tol;
    tol.abs_tol = 1e-14;
    tol.rel_tol = 1e-12;
    total_volume_ =
        unit_sphere_area(n_) *
        integrate([this](double r) { return ipow(w_.phi(r), n_ - 1); }, 0.0,
                  R_, tol);
  }
  if (!(std::isfinite(total_volume_) && total_volume_ > 0.0)) {
    throw DomainError(std::string(kName) + ": total volume not positive");
  }
}

WarpedManifold WarpedManifold::euclidean_ball(int n, double R) {
  WarpingFunction w;
  w.phi = [](double r) { return r; };
  w.dphi = [](double) { return 1.0; };
  w.ddphi = [](double) { return 0.0; };
  w.tangential_defect = [](double) { return 0.0; };
  w.ricci_radial = [](double) { return 0.0; };
  w.ricci_tangential = [](double) { return 0.0; };
  w.mean_curvature = [n](double r) {
    return model_mean_curvature(SpaceForm{n, 0.0}, r);
  };
  w.volume = [n](double r) { return model_volume(SpaceForm{n, 0.0}, r); };
  return WarpedManifold(n, R, std::move(w), /*closed=*/false, "euclidean");
}

WarpedManifold WarpedManifold::round_sphere(int n, double k) {
  if (!(std::isfinite(k) && k > 0.0)) {
    throw DomainError("round_sphere: curvature must be positive");
  }
  const double rho = (n - 1.0) * k;
  WarpingFunction w;
  w.phi = [k](double r) { return sn(k, r); };
  w.dphi = [k](double r) { return cs(k, r); };
  w.ddphi = [k](double r) { return -k * sn(k, r); };
  w.tangential_defect = [k](double) { return k; };
  w.ricci_radial = [rho](double) { return rho; };
  w.ricci_tangential = [rho](double) { return rho; };
  w.mean_curvature = [n, k](double r) {
    return model_mean_curvature(SpaceForm{n, k}, r);
  };
  w.volume = [n, k](double r) { return model_volume(SpaceForm{n, k}, r); };
  return WarpedManifold(n, M_PI / std::sqrt(k), std::move(w), /*closed=*/true,
                        "sphere");
}

WarpedManifold WarpedManifold::hyperbolic_ball(int n, double R) {
  const double rho = (n - 1.0) * (-1.0);
  WarpingFunction w;
  w.phi = [](double r) { return sn(-1.0, r); };
  w.dphi = [](double r) { return cs(-1.0, r); };
  w.ddphi = [](double r) { return sn(-1.0, r); };
  w.tangential_defect = [](double) { return -1.0; };
  w.ricci_radial = [rho](double) { return rho; };
  w.ricci_tangential = [rho](double) { return rho; };
  w.mean_curvature = [n](double r) {
    return model_mean_curvature(SpaceForm{n, -1.0}, r);
  };
  w.volume = [n](double r) { return model_volume(SpaceForm{n, -1.0}, r); };
  return WarpedManifold(n, R, std::move(w), /*closed=*/false, "hyperbolic");
}

WarpedManifold WarpedManifold::perturbed_sphere(int n, double delta) {
  if (!(std::isfinite(delta) && delta >= 0.0 && delta <= 0.2)) {
    throw DomainError("perturbed_sphere: delta must lie in [0, 0.2]");
  }
  const double d = delta;
  WarpingFunction w;
  w.phi = [d](double r) {
    const double s = std::sin(r);
    return s * (1.0 + d * s * s);
  };
  w.dphi = [d](double r) {
    const double s = std::sin(r);
    return std::cos(r) * (1.0 + 3.0 * d * s * s);
  };
  w.ddphi = [d](double r) {
    const double s = std::sin(r), c = std::cos(r);
    return -s * (1.0 - 6.0 * d * c * c + 3.0 * d * s * s);
  };
  // (1 - phi'^2)/phi^2 with the sin^2 factor cancelled analytically.
  w.tangential_defect = [d](double r) {
    const double s = std::sin(r), c = std::cos(r);
    const double u = 1.0 + d * s * s;
    return (1.0 - 6.0 * d * c * c - 9.0 * d * d * s * s * c * c) / (u * u);
  };
  w.ricci_radial = [n, d](double r) {
    const double s = std::sin(r), c = std::cos(r);
    return (n - 1.0) * (1.0 - 6.0 * d * c * c + 3.0 * d * s * s) /
           (1.0 + d * s * s);
  };
  w.ricci_tangential = [n, d](double r) {
    const double s = std::sin(r), c = std::cos(r);
    const double u = 1.0 + d * s * s;
    return (1.0 - 6.0 * d * c * c + 3.0 * d * s * s) / u +
           (n - 2.0) *
               (1.0 - 6.0 * d * c * c - 9.0 * d * d * s * s * c * c) / (u * u);
  };
  return WarpedManifold(n, M_PI, std::move(w), /*closed=*/true,
                        "perturbed_sphere");
}

WarpedManifold WarpedManifold::flared_euclidean_ball(int n, double R,
                                                     double delta) {
  if (!(std::isfinite(delta) && delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("flared_euclidean_ball: delta must lie in [0, 1]");
  }
  const double d = delta;
  WarpingFunction w;
  w.phi = [d](double r) { return r * (1.0 + d * r * r); };
  w.dphi = [d](double r) { return 1.0 + 3.0 * d * r * r; };
  w.ddphi = [d](double r) { return 6.0 * d * r; };
  w.tangential_defect = [d](double r) {
    const double u = 1.0 + d * r * r;
    return -(6.0 * d + 9.0 * d * d * r * r) / (u * u);
  };
  w.ricci_radial = [n, d](double r) {
    return -(n - 1.0) * 6.0 * d / (1.0 + d * r * r);
  };
  w.ricci_tangential = [n, d](double r) {
    const double u = 1.0 + d * r * r;
    return -6.0 * d / u - (n - 2.0) * (6.0 * d + 9.0 * d * d * r * r) / (u * u);
  };
  return WarpedManifold(n, R, std::move(w), /*closed=*/false,
                        "flared_euclidean");
}

WarpedManifold WarpedManifold::perturbed_hyperbolic_ball(int n, double R,
                                                         double delta) {
  if (!(std::isfinite(delta) && delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("perturbed_hyperbolic_ball: delta must lie in [0, 1]");
  }
  const double d = delta;
  WarpingFunction w;
  w.phi = [d](double r) {
    const double s = std::sinh(r);
    return s * (1.0 + d * s * s);
  };
  w.dphi = [d](double r) {
    const double s = std::sinh(r);
    return std::cosh(r) * (1.0 + 3.0 * d * s * s);
  };
  w.ddphi = [d](double r) {
    const double s = std::sinh(r), c = std::cosh(r);
    return s * (1.0 + 6.0 * d * c * c + 3.0 * d * s * s);
  };
  w.tangential_defect = [d](double r) {
    const double s = std::sinh(r), c = std::cosh(r);
    const double u = 1.0 + d * s * s;
    return -(1.0 + c * c * (6.0 * d + 9.0 * d * d * s * s)) / (u * u);
  };
  w.ricci_radial = [n, d](double r) {
    const double s = std::sinh(r), c = std::cosh(r);
    return -(n - 1.0) * (1.0 + 6.0 * d * c * c + 3.0 * d * s * s) /
           (1.0 + d * s * s);
  };
  w.ricci_tangential = [n, d](double r) {
    const double s = std::sinh(r), c = std::cosh(r);
    const double u = 1.0 + d * s * s;
    return -(1.0 + 6.0 * d * c * c + 3.0 * d * s * s) / u -
           (n - 2.0) * (1.0 + c * c * (6.0 * d + 9.0 * d * d * s * s)) /
               (u * u);
  };
  return WarpedManifold(n, R, std::move(w), /*closed=*/false,
                        "perturbed_hyperbolic");
}

WarpedManifold WarpedManifold::from_table(int n, const std::vector<double>& r,
                                          const std::vector<double>& phi,
                                          bool closed, std::string name) {
  if (r.size() != phi.size()) {
    throw DomainError("from_table: column lengths differ");
  }
  if (r.size() < 4) {
    throw DomainError("from_table: need at least 4 samples");
  }
  if (r.front() != 0.0 || phi.front() != 0.0) {
    throw DomainError("from_table: first sample must be (0, 0)");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(phi[i])) {
      throw DomainError("from_table: non-finite sample");
    }
    if (i > 0 && !(r[i] > r[i - 1])) {
      throw DomainError("from_table: radii must be strictly ascending");
    }
  }
  auto spline = std::make_shared<const CubicSpline>(
      r, phi, /*left_slope=*/1.0, /*clamp_right=*/closed, /*right_slope=*/-1.0);
  WarpingFunction w;
  w.phi = [spline](double t) { return spline->value(t); };
  w.dphi = [spline](double t) { return spline->deriv(t); };
  w.ddphi = [spline](double t) { return spline->second(t); };
  WarpedManifold out(n, r.back(), std::move(w), closed, std::move(name));
  // Curvature quotients are meaningless below the table's own resolution:
  // the spline's phi'' carries O(h^2) interpolation noise that a 1/phi
  // division would amplify without bound near the pole.
  out.pole_guard_ = std::max(out.pole_guard_, spline->first_interior_knot());
  return out;
}

WarpedManifold WarpedManifold::load_table(int n, const std::string& path,
                                          bool closed, std::string name) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("load_table: cannot open '" + path + "'");
  }
  std::vector<double> r, phi;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a >> b)) {
      throw DomainError("load_table: malformed row at line " +
                        std::to_string(lineno) + " of '" + path + "'");
    }
    std::string extra;
    if (row >> extra) {
      throw DomainError("load_table: trailing tokens at line " +
                        std::to_string(lineno) + " of '" + path + "'");
    }
    r.push_back(a);
    phi.push_back(b);
  }
  return from_table(n, r, phi, closed, std::move(name));
}

RicciEigenvalues WarpedManifold::ricci_eigenvalues(double r) const {
  if (!(r > 0.0 && r < R_)) {
    throw DomainError("ricci_eigenvalues: radius must be interior");
  }
  RicciEigenvalues out;
  if (w_.ricci_radial && w_.ricci_tangential) {
    out.radial = w_.ricci_radial(r);
    out.tangential = w_.ricci_tangential(r);
    return out;
  }
  const double p = w_.phi(r);
  const double quot = w_.ddphi(r) / p;
  const double defect = w_.tangential_defect
                            ? w_.tangential_defect(r)
                            : (1.0 - w_.dphi(r) * w_.dphi(r)) / (p * p);
  out.radial = -(n_ - 1.0) * quot;
  out.tangential = -quot + (n_ - 2.0) * defect;
  return out;
}

double WarpedManifold::ricci_min(double r) const {
  return ricci_eigenvalues(r).min();
}

double WarpedManifold::rho_min_clamped(double r) const {
  if (!(w_.ricci_radial && w_.ricci_tangential)) {
    const double hi = closed_ ? R_ - pole_guard_ : R_;
    r = std::clamp(r, pole_guard_, hi);
  } else {
    r = std::clamp(r, 0.0, R_);
  }
  if (w_.ricci_radial && w_.ricci_tangential) {
    return std::min(w_.ricci_radial(r), w_.ricci_tangential(r));
  }
  const double p = w_.phi(r);
  const double quot = w_.ddphi(r) / p;
  const double defect = w_.tangential_defect
                            ? w_.tangential_defect(r)
                            : (1.0 - w_.dphi(r) * w_.dphi(r)) / (p * p);
  return std::min(-(n_ - 1.0) * quot, -quot + (n_ - 2.0) * defect);
}

IntegralNorm WarpedManifold::integral_ricci_norm(double p, double k,
                                                 double radius) const {
  if (!(p > n_ / 2.0)) {
    throw DomainError("integral_ricci_norm: require p > n/2");
  }
  if (!(radius > 0.0 && radius <= R_ * (1.0 + 1e-12))) {
    throw DomainError("integral_ricci_norm: radius outside (0, R]");
  }
  radius = std::min(radius, R_);
  const double target = (n_ - 1.0) * k;
  Tolerance tol;
  tol.abs_tol = 1e-14;
  tol.rel_tol = 1e-12;
  const double integral = integrate(
      [&](double r) {
        const double deficit = target - rho_min_clamped(r);
        if (deficit <= 0.0) return 0.0;
        return std::pow(deficit, p) * ipow(w_.phi(r), n_ - 1);
      },
      0.0, radius, tol);
  IntegralNorm out;
  out.p = p;
  out.k = k;
  out.radius = radius;
  out.whole_manifold = (radius == R_);
  out.value = std::pow(std::max(0.0, integral) * unit_sphere_area(n_), 1.0 / p);
  return out;
}

IntegralNorm WarpedManifold::whole_manifold_ricci_norm(double p,
                                                       double k) const {
  return integral_ricci_norm(p, k, R_);
}

ModelGeometry WarpedManifold::ball_geometry(double r) const {
  if (!(r > 0.0 && r <= R_ * (1.0 + 1e-12))) {
    throw DomainError("ball_geometry: radius outside (0, R]");
  }
  r = std::min(r, R_);
  ModelGeometry out;
  out.r = r;
  out.volume = ball_volume(r);
  out.area = ball_area(r);
  out.mean_curv = (closed_ && r >= R_ * (1.0 - 1e-14))
                      ? -std::numeric_limits<double>::infinity()
                      : ball_mean_curvature(r);
  return out;
}

double WarpedManifold::ball_volume(double r) const {
  if (!(r >= 0.0 && r <= R_ * (1.0 + 1e-12))) {
    throw DomainError("ball_volume: radius outside [0, R]");
  }
  r = std::min(r, R_);
  if (r == 0.0) return 0.0;
  if (w_.volume) return w_.volume(r);
  Tolerance tol;
  tol.abs_tol = 1e-14;
  tol.rel_tol = 1e-12;
  return unit_sphere_area(n_) *
         integrate([this](double t) { return ipow(w_.phi(t), n_ - 1); }, 0.0,
                   r, tol);
}

double WarpedManifold::ball_area(double r) const {
  if (!(r > 0.0 && r <= R_ * (1.0 + 1e-12))) {
    throw DomainError("ball_area: radius outside (0, R]");
  }
  r = std::min(r, R_);
  return unit_sphere_area(n_) * ipow(w_.phi(r), n_ - 1);
}

double WarpedManifold::ball_mean_curvature(double r) const {
  const double hi = closed_ ? R_ : R_ * (1.0 + 1e-12);
  if (!(r > 0.0 && r < hi)) {
    throw DomainError("ball_mean_curvature: radius outside the open range");
  }
  r = std::min(r, R_);
  if (w_.mean_curvature) return w_.mean_curvature(r);
  return (n_ - 1.0) * w_.dphi(r) / w_.phi(r);
}

double WarpedManifold::radius_for_volume(double volume) const {
  if (!(volume > 0.0 && volume < total_volume_)) {
    throw DomainError("radius_for_volume: volume outside (0, total volume)");
  }
  Tolerance tol;
  tol.abs_tol = 1e-11 * std::max(1.0, total_volume_);
  return solve_monotone([this](double r) { return ball_volume(r); }, volume,
                        0.0, R_, tol);
}

double WarpedManifold::ball_profile(double beta) const {
  return ball_area(std::max(radius_for_volume(beta),
                            std::numeric_limits<double>::min()));
}

IntegralNorm WarpedManifold::m_plus_norm(double p, double k,
                                         double radius) const {
  if (!(p > n_ / 2.0)) {
    throw DomainError("m_plus_norm: require p > n/2");
  }
  if (!(radius > 0.0 && radius <= R_ * (1.0 + 1e-12))) {
    throw DomainError("m_plus_norm: radius outside (0, R]");
  }
  radius = std::min(radius, R_);
  if (k > 0.0 && !(radius < M_PI / std::sqrt(k))) {
    throw DomainError(
        "m_plus_norm: radius must stay below the model's conjugate radius "
        "pi/sqrt(k)");
  }
  const SpaceForm model{n_, k};
  const double tiny = 1e-12 * std::max(1.0, R_);
  const double two_p = 2.0 * p;
  Tolerance tol;
  tol.abs_tol = 1e-14;
  tol.rel_tol = 1e-12;
  const double integral = integrate(
      [&](double r) {
        // Both mean curvatures diverge like (n-1)/r at the pole with a
        // difference tending to 0; below the guard the limit value is used.
        if (r <= tiny) return 0.0;
        const double m = w_.mean_curvature ? w_.mean_curvature(r)
                                           : (n_ - 1.0) * w_.dphi(r) / w_.phi(r);
        const double excess = m - model_mean_curvature(model, r);
        if (excess <= 0.0) return 0.0;
        return std::pow(excess, two_p) * ipow(w_.phi(r), n_ - 1);
      },
      0.0, radius, tol);
  IntegralNorm out;
  out.p = p;
  out.k = k;
  out.radius = radius;
  out.whole_manifold = (radius == R_);
  out.value =
      std::pow(std::max(0.0, integral) * unit_sphere_area(n_), 1.0 / two_p);
  return out;
}

}  // namespace isoprofile
