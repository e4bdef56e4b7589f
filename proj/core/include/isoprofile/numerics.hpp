#pragma once

/// Scalar numerical kernels shared by the geometry layers: adaptive
/// quadrature (closed Simpson for piecewise-smooth integrands, tanh-sinh for
/// integrable endpoint singularities), bracketing root solves on monotone
/// functions, and central finite differences.

#include <functional>

#include "isoprofile/errors.hpp"

namespace isoprofile {

/// Absolute/relative stopping targets plus a recursion / iteration cap.
struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 60;

  void validate() const;
};

/// Integrate f over [a, b] so that |result - integral| <= max(abs_tol,
/// rel_tol*|integral|). With endpoint_singular the rule never evaluates the
/// endpoints and tolerates integrable algebraic singularities there.
///
/// Throws DomainError on a > b or a non-finite integrand evaluation,
/// NonConvergence when the refinement cap is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol = {}, bool endpoint_singular = false);

/// Solve f(r) = target for strictly monotone f on [lo, hi] by bracketing
/// bisection with secant acceleration; stops when |f(r) - target| <= abs_tol.
/// Decreasing f is handled by sign flip. Throws BracketError when the target
/// is not enclosed by [f(lo), f(hi)].
double solve_monotone(const std::function<double(double)>& f, double target,
                      double lo, double hi, const Tolerance& tol = {});

/// Symmetric difference quotient (f(x+h) - f(x-h)) / (2h).
double central_difference(const std::function<double(double)>& f, double x,
                          double h);

/// Default step for central differences: max(1e-6, 1e-4*|x|).
double default_fd_step(double x);

}  // namespace isoprofile
