#include "isoprofile/profile_ode.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "isoprofile/errors.hpp"
#include "isoprofile/report.hpp"
#include "isoprofile/spaceform.hpp"

namespace isoprofile {

namespace {

// Grid symmetry about mid = (front + back)/2 is a precondition for checking
// value symmetry of model curves; detect it rather than require it.
bool grid_symmetric_about_half(const std::vector<double>& grid) {
  const std::size_t count = grid.size();
  for (std::size_t i = 0; i < count; ++i) {
    if (std::fabs(grid[i] + grid[count - 1 - i] - 1.0) > 1e-9) return false;
  }
  return true;
}

void check_normalized_grid(const ProfileCurve& curve, const char* who) {
  if (!(curve.grid.back() < 1.0)) {
    throw DomainError(std::string(who) +
                      ": curve grid must lie inside (0, 1)");
  }
}

double residual_value(double alpha, double psi, double dpsi, double k, int n,
                      double lambda) {
  const double slope = dpsi / static_cast<double>(n - 1);
  const double base = k + slope * slope;
  return alpha * psi * std::pow(base, 0.5 * (n - 1)) - 1.0 / lambda;
}

}  // namespace

void ProfileCurve::validate() const {
  if (grid.size() != values.size()) {
    throw DomainError("ProfileCurve: grid/value size mismatch");
  }
  if (grid.size() < 2) {
    throw DomainError("ProfileCurve: at least two samples required");
  }
  if (!(grid.front() > 0.0)) {
    throw DomainError("ProfileCurve: grid must be positive");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) {
      throw DomainError("ProfileCurve: non-finite sample");
    }
    if (!(values[i] > 0.0)) {
      throw DomainError("ProfileCurve: values must be positive");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError("ProfileCurve: grid must be strictly ascending");
    }
  }
  if (kind == CurveKind::kModelH1) {
    if (!(grid.back() < 1.0)) {
      throw DomainError("ProfileCurve: model curve grid must lie in (0, 1)");
    }
    if (grid_symmetric_about_half(grid)) {
      const std::size_t count = grid.size();
      for (std::size_t i = 0; i < count; ++i) {
        const double a = values[i];
        const double b = values[count - 1 - i];
        if (std::fabs(a - b) > 1e-8 + 1e-6 * std::max(a, b)) {
          throw DomainError(
              "ProfileCurve: model curve must be symmetric about 1/2");
        }
      }
    }
  }
}

ProfileCurve sample_model_h1(const SpaceForm& m,
                             const std::vector<double>& grid) {
  m.validate();
  if (!(m.k > 0.0)) {
    throw DomainError("sample_model_h1: k > 0 required");
  }
  ProfileCurve curve;
  curve.kind = CurveKind::kModelH1;
  curve.grid = grid;
  curve.values.reserve(grid.size());
  for (double beta : grid) curve.values.push_back(model_h1(m, beta));
  curve.validate();
  return curve;
}

void save_curve_csv(const ProfileCurve& curve, const std::string& path) {
  curve.validate();
  std::ofstream out(path);
  if (!out) {
    throw DomainError("save_curve_csv: cannot open " + path);
  }
  out << "beta,value\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << format_double(curve.grid[i]) << ','
        << format_double(curve.values[i]) << '\n';
  }
  if (!out) {
    throw DomainError("save_curve_csv: write failed for " + path);
  }
}

ProfileCurve load_curve_csv(const std::string& path, CurveKind kind) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("load_curve_csv: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DomainError("load_curve_csv: empty file " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "beta,value") {
    throw DomainError("load_curve_csv: expected header 'beta,value' in " +
                      path);
  }
  ProfileCurve curve;
  curve.kind = kind;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw DomainError("load_curve_csv: missing comma at line " +
                        std::to_string(lineno) + " of " + path);
    }
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    double beta = 0.0;
    double value = 0.0;
    try {
      beta = std::stod(line.substr(0, comma), &used_a);
      value = std::stod(line.substr(comma + 1), &used_b);
    } catch (const std::exception&) {
      throw DomainError("load_curve_csv: malformed number at line " +
                        std::to_string(lineno) + " of " + path);
    }
    if (used_a != comma || comma + 1 + used_b != line.size()) {
      throw DomainError("load_curve_csv: trailing characters at line " +
                        std::to_string(lineno) + " of " + path);
    }
    curve.grid.push_back(beta);
    curve.values.push_back(value);
  }
  curve.validate();
  return curve;
}

double curve_value_at(const ProfileCurve& curve, double beta) {
  curve.validate();
  if (!(beta >= curve.grid.front()) || !(beta <= curve.grid.back())) {
    throw DomainError("curve_value_at: beta outside the sampled range");
  }
  // Rightmost interval whose left endpoint is <= beta; nodes are returned
  // exactly.
  std::size_t hi = 1;
  while (hi + 1 < curve.grid.size() && curve.grid[hi] < beta) ++hi;
  const std::size_t lo = hi - 1;
  if (beta == curve.grid[lo]) return curve.values[lo];
  if (beta == curve.grid[hi]) return curve.values[hi];
  const double t =
      (beta - curve.grid[lo]) / (curve.grid[hi] - curve.grid[lo]);
  return curve.values[lo] + t * (curve.values[hi] - curve.values[lo]);
}

std::vector<double> grid_derivative(const std::vector<double>& grid,
                                    const std::vector<double>& values) {
  if (grid.size() != values.size()) {
    throw DomainError("grid_derivative: grid/value size mismatch");
  }
  if (grid.size() < 3) {
    throw DomainError("grid_derivative: at least three points required");
  }
  std::vector<double> out;
  out.reserve(grid.size() - 2);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double hl = grid[i] - grid[i - 1];
    const double hr = grid[i + 1] - grid[i];
    if (!(hl > 0.0) || !(hr > 0.0)) {
      throw DomainError("grid_derivative: grid must be strictly ascending");
    }
    const double num = hl * hl * values[i + 1] +
                       (hr * hr - hl * hl) * values[i] -
                       hr * hr * values[i - 1];
    out.push_back(num / (hl * hr * (hl + hr)));
  }
  return out;
}

double OdeCheck::min_residual() const {
  if (residuals.empty()) {
    throw DomainError("OdeCheck: no residuals");
  }
  double best = residuals.front();
  for (double r : residuals) best = std::min(best, r);
  return best;
}

double OdeCheck::max_abs_residual() const {
  if (residuals.empty()) {
    throw DomainError("OdeCheck: no residuals");
  }
  double best = 0.0;
  for (double r : residuals) best = std::max(best, std::fabs(r));
  return best;
}

OdeCheck supersolution_residuals(const ProfileCurve& curve, double alpha,
                                 const SpaceForm& m, double diam) {
  curve.validate();
  m.validate();
  if (!(m.k > 0.0)) {
    throw DomainError("supersolution_residuals: k > 0 required");
  }
  if (!(alpha > 1.0)) {
    throw DomainError("supersolution_residuals: alpha > 1 required");
  }
  if (!(diam > 0.0) || !std::isfinite(diam)) {
    throw DomainError(
        "supersolution_residuals: diameter must be positive finite");
  }
  check_normalized_grid(curve, "supersolution_residuals");
  if (curve.grid.size() < 3) {
    throw DomainError(
        "supersolution_residuals: at least three samples required");
  }
  const LevyGromovConstants lg = levy_gromov_constants(m, diam, alpha);
  const std::vector<double> deriv = grid_derivative(curve.grid, curve.values);
  OdeCheck out;
  out.alpha = alpha;
  out.k = m.k;
  out.n = m.n;
  out.d_prime = lg.d_prime;
  out.lambda = lg.lambda;
  out.betas.reserve(deriv.size());
  out.residuals.reserve(deriv.size());
  for (std::size_t i = 1; i + 1 < curve.grid.size(); ++i) {
    out.betas.push_back(curve.grid[i]);
    out.residuals.push_back(residual_value(alpha, curve.values[i],
                                           deriv[i - 1], m.k, m.n,
                                           lg.lambda));
  }
  return out;
}

double model_ode_residual(const SpaceForm& m, double beta) {
  m.validate();
  if (!(m.k > 0.0)) {
    throw DomainError("model_ode_residual: k > 0 required");
  }
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw DomainError("model_ode_residual: beta must lie in (0, 1)");
  }
  const double total = model_volume(m, m.radial_limit());
  const double phi = model_h1(m, beta);
  // Chain rule through the radius parametrization: d(h2)/dvolume at the ball
  // of volume v is area'(r)/area(r) = mean curvature, so the normalization
  // factors cancel and phi'(beta) = mbar(rbar(beta |M|)).
  const double rbar = model_radius_for_volume(m, beta * total);
  const double dphi = model_mean_curvature(m, rbar);
  const double gamma_n = sn_power_integral(m.n, m.k, m.radial_limit());
  return residual_value(1.0, phi, dphi, m.k, m.n, gamma_n);
}

std::vector<ComparisonReport> levy_gromov_check(const ProfileCurve& curve,
                                                const SpaceForm& m,
                                                double diam, double alpha,
                                                double tol) {
  curve.validate();
  m.validate();
  if (!(m.k > 0.0)) {
    throw DomainError("levy_gromov_check: k > 0 required");
  }
  if (!(alpha > 1.0)) {
    throw DomainError("levy_gromov_check: alpha > 1 required");
  }
  if (!(diam > 0.0) || !std::isfinite(diam)) {
    throw DomainError("levy_gromov_check: diameter must be positive finite");
  }
  if (!(tol >= 0.0)) {
    throw DomainError("levy_gromov_check: tolerance must be >= 0");
  }
  check_normalized_grid(curve, "levy_gromov_check");
  const LevyGromovConstants lg = levy_gromov_constants(m, diam, alpha);
  std::vector<std::pair<std::string, std::string>> inputs = {
      {"n", format_double(m.n)},
      {"k", format_double(m.k)},
      {"diam", format_double(diam)},
      {"alpha", format_double(alpha)},
      {"L", format_double(lg.L)},
      {"epsilon", format_double(lg.epsilon)},
  };
  std::vector<ComparisonReport> rows;
  rows.reserve(curve.grid.size());
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    ComparisonReport row;
    row.theorem_id = "1.4";
    row.beta = curve.grid[i];
    row.lhs = curve.values[i];
    row.rhs = lg.L * model_h1(m, curve.grid[i]) - lg.epsilon;
    row.margin = row.lhs - row.rhs;
    row.pass = row.margin >= -tol;
    row.tolerance = tol;
    row.in_regime = true;
    row.inputs = inputs;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace isoprofile
