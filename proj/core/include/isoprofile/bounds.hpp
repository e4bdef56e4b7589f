#pragma once

/// Quantitative comparison machinery: the curvature-concentration constants
/// kappa and C, the volume-dilation check, the error integrals entering the
/// profile gap bounds, and batch verification of the gap inequalities against
/// warped-product manifolds and geodesic-ball domains.

#include <limits>
#include <string>
#include <vector>

#include "isoprofile/report.hpp"
#include "isoprofile/spaceform.hpp"
#include "isoprofile/warped.hpp"

namespace isoprofile {

/// Sentinel for an unbounded diameter (valid only with k < 0).
inline constexpr double kInfiniteDiameter =
    std::numeric_limits<double>::infinity();

/// kappa(n, p) = (n-1)(2p-1)/(2p-n); requires n >= 2 and p > n/2.
double kappa(int n, double p);

/// Dilation exponent: 2p when k > 0, 2p/n otherwise.
double q_exponent(int n, double p, double k);

/// Inputs of the gap bounds: dimension, integrability exponent p > n/2,
/// reference curvature k, diameter d (kInfiniteDiameter allowed only for
/// k < 0), and the p-norm of the curvature deficit.
struct BoundParams {
  int n = 2;
  double p = 2.0;
  double k = 0.0;
  double d = 1.0;
  double norm = 0.0;

  void validate() const;
};

/// C(n, p, k, d) = sqrt(kappa) * integral_0^d Vbar(t)^{-1/(2p)} dt, where
/// Vbar is the model ball volume (saturating at the total volume beyond the
/// conjugate radius when k > 0).  The integrand has an integrable t^{-n/(2p)}
/// singularity at 0.  Throws NonConvergence when the integral diverges
/// (d = kInfiniteDiameter with k >= 0).
double C_constant(const BoundParams& params);

/// Constant of the relative (boundary) case: 2^{1/(2p)} * C.
double C1_constant(const BoundParams& params);

/// Volume-comparison dilation check.  Given that the model ball of radius
/// rbar holds at most alpha times the volume of the ball of radius r
/// (verified numerically; DomainError when violated), returns whether the
/// radius conclusion holds: rbar <= alpha * r for k > 0 (requires
/// 1 <= alpha <= 2 and r <= pi/(2 sqrt(k))), rbar <= alpha^{1/n} * r for
/// k <= 0 (requires alpha >= 1).
bool check_radius_dilation(int n, double k, double alpha, double r,
                           double rbar);

/// (1 + C sqrt(norm))^{2p}, the quantity the smallness condition restricts.
double smallness_factor(const BoundParams& params);
/// Same with C1 in place of C.
double relative_smallness_factor(const BoundParams& params);

/// Whether the smallness condition holds: factor <= 2 when k > 0 (the
/// condition is vacuous for k <= 0).
bool smallness_ok(const BoundParams& params);
bool relative_smallness_ok(const BoundParams& params);

/// Whether the hypotheses of the gap bound hold at these inputs: for k > 0,
/// the diameter restriction d < pi/(2 sqrt(k)) and the smallness condition
/// (with C1 when relative); always true for k <= 0.
bool in_regime(const BoundParams& params, bool relative = false);

/// Error integral of the gap bound: with Lambda = (1 + C sqrt(norm))^q,
///   f(beta) = integral_0^beta [ mbar(rbar(t)/Lambda) - mbar(rbar(t)) ] dt,
/// where rbar(t) inverts the model ball volume and mbar is the model mean
/// curvature.  Evaluated after substituting t = Vbar(rbar).  Zero when
/// norm = 0.  For k = 0 this collapses to the closed form
/// (Lambda - 1) n omega_n^{1/n} beta^{(n-1)/n}, which the quadrature must
/// reproduce.  DomainError when beta <= 0 or (k > 0) beta >= total volume.
double f_error(const BoundParams& params, double beta);

/// Relative-case error integral: C1 and the dilation exponent q as for
/// f_error, but rtilde(t) inverts the HALF model ball volume,
/// Vbar(rtilde)/2 = t.
double relative_error_term(const BoundParams& params, double beta);

/// What to do when the smallness condition fails for k > 0: refuse (throw
/// SmallnessViolation) or evaluate anyway and let the caller flag the row.
enum class SmallnessPolicy { kThrow, kReport };

/// Upper bound for the profile gap h2(beta) - h2bar(beta):
///   sqrt(kappa * norm) * beta^{(2p-1)/(2p)} + f_error(beta).
double main_bound(const BoundParams& params, double beta,
                  SmallnessPolicy policy = SmallnessPolicy::kThrow);

/// Relative-case bound: same leading term plus relative_error_term.
double relative_bound(const BoundParams& params, double beta,
                      SmallnessPolicy policy = SmallnessPolicy::kThrow);

/// Sharper gap bound using the manifold's own radius map r(t):
///   sqrt(kappa * norm) * beta^{(2p-1)/(2p)}
///     + integral_0^beta [ mbar(r(t)) - mbar(rbar(t)) ] dt.
/// DomainError when a required model radius leaves the radial domain.
double mid_gap_bound(const WarpedManifold& manifold, const BoundParams& params,
                     double beta);

/// Area of the intersection of the geodesic sphere of radius r about a
/// boundary point of the ball of radius ball_radius with that ball: the
/// polar-cap opening angle comes from the law of cosines in curvature k.
/// Requires 0 < r < 2 * ball_radius (and ball_radius <= half the conjugate
/// radius when k > 0).  For n = 2 the "cap" is a pair of arcs.
double cap_area_witness(const SpaceForm& model, double ball_radius, double r);

/// Volume of that intersection: integral of cap_area_witness from 0 to r
/// (r = 2 * ball_radius reaches the full ball volume).
double cap_volume(const SpaceForm& model, double ball_radius, double r);

/// The relative-profile witness: cap area at prescribed intersection volume
/// beta in (0, |ball|); inverts cap_volume in the sphere radius.
double relative_profile_witness(const SpaceForm& model, double ball_radius,
                                double beta);

/// BoundParams for a warped manifold: n from the manifold, d its diameter,
/// norm its whole-manifold curvature deficit norm against k.
BoundParams params_for_manifold(const WarpedManifold& manifold, double p,
                                double k);

/// Largest admissible ball volume for gap verification on this manifold
/// against curvature k: the manifold total, capped by the model total when
/// k > 0.
double beta_ceiling(const WarpedManifold& manifold, double k);

/// Evaluate the gap inequality rows
///   ball_profile(beta) - model_h2(beta) <= main_bound(beta)
/// on the given volumes (reported in ascending beta order).  The smallness
/// condition never throws here; rows outside the hypotheses carry
/// in_regime = false.  jobs > 1 evaluates rows concurrently with bitwise
/// identical results.  theorem_id overrides the default row label ("1.1" for
/// k <= 0, "1.2" for k > 0).
std::vector<ComparisonReport> verify_h2(const WarpedManifold& manifold,
                                        const BoundParams& params,
                                        const std::vector<double>& betas,
                                        double tol, int jobs = 1,
                                        const std::string& theorem_id = "");

/// Evaluate the relative gap rows for the geodesic-ball domain:
///   witness_profile(beta) - half_space_h2(beta) <= relative_bound(beta).
/// Default labels: "2.3" for k <= 0, "2.4" for k > 0.
std::vector<ComparisonReport> verify_relative(const SpaceForm& model,
                                              double ball_radius,
                                              const BoundParams& params,
                                              const std::vector<double>& betas,
                                              double tol, int jobs = 1,
                                              const std::string& theorem_id = "");

}  // namespace isoprofile
