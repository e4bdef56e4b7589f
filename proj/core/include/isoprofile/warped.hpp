#pragma once

/// Rotationally symmetric manifolds dr^2 + phi(r)^2 g_{S^{n-1}}: curvature
/// eigenvalues, integral curvature-deficit norms, geodesic-ball geometry about
/// the pole, and mean-curvature excess norms.

#include <functional>
#include <string>
#include <vector>

#include "isoprofile/spaceform.hpp"

namespace isoprofile {

/// Warping function with derivatives. The optional closures carry analytically
/// simplified expressions: curvature quotients such as phi''/phi suffer 0/0
/// cancellation at the pole, and equality-case manifolds (round spheres,
/// Euclidean and hyperbolic balls) should report exactly zero deficit rather
/// than rounding noise. When a closure is absent the generic quotient formula
/// is used.
struct WarpingFunction {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> ddphi;

  /// Optional: (1 - phi'(r)^2) / phi(r)^2 in a cancellation-free form.
  std::function<double(double)> tangential_defect;
  /// Optional: the two Ricci eigenvalues in closed form.
  std::function<double(double)> ricci_radial;
  std::function<double(double)> ricci_tangential;
  /// Optional: mean curvature (n-1) phi'/phi of the distance sphere; equality
  /// cases route this through the same model-space code path used for the
  /// comparison value, making the excess vanish identically.
  std::function<double(double)> mean_curvature;
  /// Optional: ball volume about the pole in closed form (replaces radial
  /// quadrature).
  std::function<double(double)> volume;
};

/// Ricci eigenvalue pair of a rotationally symmetric metric at radius r.
struct RicciEigenvalues {
  double radial = 0.0;
  double tangential = 0.0;
  double min() const { return radial < tangential ? radial : tangential; }
};

/// Result of an integral curvature or mean-curvature-excess norm.
struct IntegralNorm {
  double p = 0.0;
  double k = 0.0;
  double radius = 0.0;
  bool whole_manifold = false;
  double value = 0.0;
};

/// Immutable rotationally symmetric manifold of dimension n with radial
/// extent R. Closed means two poles (phi(R) = 0, phi'(R) = -1); otherwise the
/// manifold is a metric ball with boundary at r = R. All operations are pure
/// and safe to call concurrently.
class WarpedManifold {
 public:
  /// Validates pole smoothness (phi(h)/h - 1 and phi''(h) small at h = 1e-4),
  /// positivity of phi on (0, R), and the far-pole conditions when closed.
  WarpedManifold(int n, double R, WarpingFunction w, bool closed,
                 std::string name = "custom");

  // ---- presets -------------------------------------------------------------

  /// phi = r on (0, R): flat ball.
  static WarpedManifold euclidean_ball(int n, double R);
  /// phi = sn_k, k > 0, both poles: the round sphere of curvature k.
  static WarpedManifold round_sphere(int n, double k);
  /// phi = sinh r on (0, R): hyperbolic (curvature -1) ball.
  static WarpedManifold hyperbolic_ball(int n, double R);
  /// phi = sin r (1 + delta sin^2 r), both poles: a sphere-like metric whose
  /// Ricci curvature dips below n-1 in an equatorial band (delta in [0, 0.2]).
  static WarpedManifold perturbed_sphere(int n, double delta);
  /// phi = r (1 + delta r^2) on (0, R): flat-like ball with negative Ricci
  /// (delta in [0, 1]).
  static WarpedManifold flared_euclidean_ball(int n, double R, double delta);
  /// phi = sinh r (1 + delta sinh^2 r) on (0, R): hyperbolic-like ball with
  /// Ricci below -(n-1) (delta in [0, 1]).
  static WarpedManifold perturbed_hyperbolic_ball(int n, double R,
                                                  double delta);

  /// Build from samples (r_i, phi_i), r ascending from exactly 0 with
  /// phi_0 = 0, interpolated by a cubic spline clamped to phi'(0) = 1 (and
  /// phi'(R) = -1 when closed). Derivatives come from the spline polynomials.
  static WarpedManifold from_table(int n, const std::vector<double>& r,
                                   const std::vector<double>& phi, bool closed,
                                   std::string name = "table");
  /// Load a two-column whitespace-separated "r phi" file (ascending r, first
  /// row "0 0"; blank lines and lines starting with '#' are skipped).
  static WarpedManifold load_table(int n, const std::string& path, bool closed,
                                   std::string name = "table");

  // ---- basic queries -------------------------------------------------------

  int dimension() const { return n_; }
  double radial_extent() const { return R_; }
  bool is_closed() const { return closed_; }
  const std::string& name() const { return name_; }
  /// Declared diameter: R when closed (pole-to-pole), 2R for a ball (a
  /// conservative upper bound on intrinsic diameter).
  double diameter() const { return closed_ ? R_ : 2.0 * R_; }
  double total_volume() const { return total_volume_; }

  double phi(double r) const { return w_.phi(r); }
  double dphi(double r) const { return w_.dphi(r); }
  double ddphi(double r) const { return w_.ddphi(r); }

  // ---- curvature -----------------------------------------------------------

  /// Ricci eigenvalues at interior radius r (DomainError at r = 0 or r = R):
  /// radial = -(n-1) phi''/phi, tangential = -phi''/phi +
  /// (n-2)(1 - phi'^2)/phi^2.
  RicciEigenvalues ricci_eigenvalues(double r) const;
  /// Smallest Ricci eigenvalue at radius r.
  double ricci_min(double r) const;

  /// ( |S^{n-1}| Int_0^radius max(0, (n-1)k - rho)^p phi^{n-1} dr )^{1/p},
  /// the L^p norm of the curvature deficit below (n-1)k inside the ball of
  /// the given radius. Requires p > n/2 and 0 < radius <= R.
  IntegralNorm integral_ricci_norm(double p, double k, double radius) const;
  /// The same norm over the whole manifold (radius = R).
  IntegralNorm whole_manifold_ricci_norm(double p, double k) const;

  // ---- geodesic balls about the pole ---------------------------------------

  /// Volume, area, and mean curvature of the radius-r ball about the pole
  /// (0 < r <= R): volume = |S^{n-1}| Int_0^r phi^{n-1}, area =
  /// |S^{n-1}| phi(r)^{n-1}, mean_curv = (n-1) phi'(r)/phi(r).
  ModelGeometry ball_geometry(double r) const;
  double ball_volume(double r) const;  // defined on [0, R]
  double ball_area(double r) const;
  double ball_mean_curvature(double r) const;

  /// Monotone inverse of ball_volume on (0, total volume).
  double radius_for_volume(double volume) const;

  /// Area of the pole-centered sphere enclosing volume beta: the ball upper
  /// bound for the isoperimetric profile at beta, exact on round models.
  double ball_profile(double beta) const;

  /// ( |S^{n-1}| Int_0^radius max(0, m - m_k)^{2p} phi^{n-1} dr )^{1/(2p)}
  /// where m is the distance-sphere mean curvature and m_k the model value at
  /// equal radius. Requires p > n/2, 0 < radius <= R, and radius < pi/sqrt(k)
  /// when k > 0 (the model comparison value must exist).
  IntegralNorm m_plus_norm(double p, double k, double radius) const;

 private:
  int n_;
  double R_;
  WarpingFunction w_;
  bool closed_;
  std::string name_;
  double total_volume_ = 0.0;
  // Curvature quotients are evaluated no closer to a pole than this when only
  // generic (quotient-form) closures are available.
  double pole_guard_ = 0.0;

  double rho_min_clamped(double r) const;
};

}  // namespace isoprofile
