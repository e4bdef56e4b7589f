#pragma once

/// Normalized-profile machinery: sampled profile curves with CSV I/O, the
/// radial ODE identity satisfied by the model profile, the alpha-super-
/// solution residual check, and the diameter-improved lower-bound
/// verification.

#include <string>
#include <vector>

#include "isoprofile/report.hpp"
#include "isoprofile/spaceform.hpp"

namespace isoprofile {

/// Origin of a sampled curve: the model normalized profile, a ball-profile
/// upper bound, or externally supplied data.
enum class CurveKind { kModelH1, kBallUpper, kExternal };

/// A profile sampled on a strictly ascending volume grid.  Normalized
/// curves live on (0, 1); unnormalized ones on (0, total volume).
struct ProfileCurve {
  std::vector<double> grid;
  std::vector<double> values;
  CurveKind kind = CurveKind::kExternal;

  /// Sizes match (>= 2), grid strictly ascending and positive, values
  /// positive and finite.  Model curves must lie in (0, 1) and, when the
  /// grid itself is symmetric about 1/2, carry symmetric values.
  void validate() const;
};

/// Sample the model normalized profile (k > 0) on the given grid.
ProfileCurve sample_model_h1(const SpaceForm& m,
                             const std::vector<double>& grid);

/// CSV with header "beta,value"; one row per sample, shortest round-trip
/// numbers.
void save_curve_csv(const ProfileCurve& curve, const std::string& path);
ProfileCurve load_curve_csv(const std::string& path,
                            CurveKind kind = CurveKind::kExternal);

/// Piecewise-linear interpolation; DomainError outside the grid range.
double curve_value_at(const ProfileCurve& curve, double beta);

/// Second-order derivative estimates at the interior points of a possibly
/// non-uniform grid (three-point formula, exact for quadratics).  Returns
/// size() - 2 values; requires at least three points.
std::vector<double> grid_derivative(const std::vector<double>& grid,
                                    const std::vector<double>& values);

/// Residuals of the alpha-super-solution inequality at the interior grid
/// points of a curve psi:
///   residual = alpha psi (k + (psi'/(n-1))^2)^{(n-1)/2} - 1/lambda,
/// where lambda is the truncated radial volume integral for d' =
/// min(pi/sqrt(k), diam).  The super-solution property is residual >= 0
/// everywhere.
struct OdeCheck {
  double alpha = 1.0;
  double k = 0.0;
  int n = 0;
  double d_prime = 0.0;
  double lambda = 0.0;
  std::vector<double> betas;      // interior grid points
  std::vector<double> residuals;  // one per interior point

  double min_residual() const;
  double max_abs_residual() const;
};

/// Evaluate the residuals for a normalized curve (grid inside (0, 1)) with
/// psi' by the grid derivative above.  DomainError when k <= 0 or
/// alpha <= 1.
OdeCheck supersolution_residuals(const ProfileCurve& curve, double alpha,
                                 const SpaceForm& m, double diam);

/// The model profile solves the identity version exactly: with
/// phi = model_h1 and phi'(beta) = mbar(rbar(beta |M|)) computed
/// analytically, returns
///   phi (k + (phi'/(n-1))^2)^{(n-1)/2} - 1/gamma_n,
/// which vanishes up to rounding.  Requires k > 0 and 0 < beta < 1.
double model_ode_residual(const SpaceForm& m, double beta);

/// Lower-bound verification rows: at each grid point,
///   lhs = curve value,  rhs = L * model_h1(beta) - epsilon,
/// with L and epsilon from levy_gromov_constants(m, diam, alpha); a row
/// passes when lhs >= rhs - tol (margin = lhs - rhs).  Row label "1.4".
std::vector<ComparisonReport> levy_gromov_check(const ProfileCurve& curve,
                                                const SpaceForm& m,
                                                double diam, double alpha,
                                                double tol = 1e-7);

}  // namespace isoprofile
