#pragma once

/// Simply connected constant-curvature comparison spaces: the generalized
/// sine/cosine pair, geodesic-ball geometry, isoperimetric profiles (plain,
/// normalized, and half-space), and the constants entering the
/// diameter-improved lower profile bound.

#include <vector>

#include "isoprofile/numerics.hpp"

namespace isoprofile {

/// Dimension and sectional curvature of a model space.
struct SpaceForm {
  int n = 2;
  double k = 0.0;

  void validate() const;
  /// Upper end of the radial domain: pi/sqrt(k) for k > 0, +inf otherwise.
  double radial_limit() const;
  /// Total volume; finite only for k > 0.
  double total_volume() const;
};

/// Generalized sine: sin(sqrt(k) t)/sqrt(k), t, or sinh(sqrt(-k) t)/sqrt(-k).
double sn(double k, double t);
/// Its derivative: cos(sqrt(k) t), 1, or cosh(sqrt(-k) t).
double cs(double k, double t);

/// Area of the unit (n-1)-sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
/// Defined for n >= 1 (n = 1 gives the two-point sphere, area 2).
double unit_sphere_area(int n);
/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Integral of sn_k^{n-1} from 0 to r (radial volume density), by stable
/// closed-form recurrence with a series fallback near k = 0.
double sn_power_integral(int n, double k, double r);

/// Geometry of the geodesic ball of radius r about a point.
struct ModelGeometry {
  double r = 0.0;
  double volume = 0.0;
  double area = 0.0;
  double mean_curv = 0.0;
};

ModelGeometry model_geometry(const SpaceForm& m, double r);
double model_area(const SpaceForm& m, double r);
double model_volume(const SpaceForm& m, double r);
double model_mean_curvature(const SpaceForm& m, double r);

/// Radius of the ball enclosing the given volume (monotone inversion).
double model_radius_for_volume(const SpaceForm& m, double volume);

/// Isoperimetric profile: least boundary area among ball volumes, evaluated
/// at volume beta (balls are minimizers in a space form).
double model_h2(const SpaceForm& m, double beta);

/// Normalized profile on volume fractions, k > 0 only:
/// h1(beta) = h2(beta * |M|) / |M|.
double model_h1(const SpaceForm& m, double beta);

/// Profile of the half-space: half-ball area at half-ball volume beta.
double half_space_h2(const SpaceForm& m, double beta);

/// Constants of the diameter-improved lower bound: with d' = min(pi/sqrt(k),
/// diam), gamma_n and lambda the full and truncated radial volume integrals,
/// L = (gamma_n/lambda)^{1/n} and epsilon the alpha-dependent improvement.
struct LevyGromovConstants {
  double d_prime = 0.0;
  double gamma_n = 0.0;
  double lambda = 0.0;
  double L = 1.0;
  double epsilon = 0.0;
};

LevyGromovConstants levy_gromov_constants(const SpaceForm& m, double diam,
                                          double alpha);

/// count volume points on (0, vmax), log-spaced from the margin toward the
/// center and mirrored symmetrically about vmax/2 (center included when count
/// is odd); endpoints stay away from 0 and vmax by margin_frac * vmax.
std::vector<double> log_symmetric_grid(double vmax, int count,
                                       double margin_frac = 1e-3);

}  // namespace isoprofile
