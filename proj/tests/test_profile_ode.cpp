#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "isoprofile/errors.hpp"
#include "isoprofile/profile_ode.hpp"
#include "isoprofile/report.hpp"
#include "isoprofile/spaceform.hpp"

using namespace isoprofile;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = lo + (hi - lo) * i / (count - 1);
  }
  return grid;
}

}  // namespace

TEST_CASE("model ODE residual: identity across dimensions and curvatures") {
  for (int n : {2, 3, 4}) {
    for (double k : {0.5, 1.0, 4.0}) {
      const SpaceForm m{n, k};
      for (double beta : uniform_grid(0.01, 0.99, 25)) {
        CHECK(std::fabs(model_ode_residual(m, beta)) <= 1e-7);
      }
    }
  }

  // Center of the two-sphere profile: phi = 1/2, phi' = 0, gamma = 2.
  const SpaceForm s2{2, 1.0};
  CHECK(model_h1(s2, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::fabs(model_ode_residual(s2, 0.5)) <= 1e-10);

  CHECK_THROWS_AS(model_ode_residual(s2, 0.0), DomainError);
  CHECK_THROWS_AS(model_ode_residual(s2, 1.0), DomainError);
  CHECK_THROWS_AS(model_ode_residual(s2, -0.2), DomainError);
  CHECK_THROWS_AS(model_ode_residual((SpaceForm{2, 0.0}), 0.5), DomainError);
  CHECK_THROWS_AS(model_ode_residual((SpaceForm{3, -1.0}), 0.5), DomainError);
}

TEST_CASE("model ODE residual: analytic derivative matches finite difference") {
  const SpaceForm m{2, 1.0};
  const double beta = 0.3;
  const double total = m.total_volume();
  const double analytic =
      model_mean_curvature(m, model_radius_for_volume(m, beta * total));
  const double h = 1e-5;
  const double fd = (model_h1(m, beta + h) - model_h1(m, beta - h)) / (2 * h);
  CHECK(analytic == doctest::Approx(fd).epsilon(1e-8));

  // Same cross-check in a higher dimension away from the symmetry point.
  const SpaceForm m3{3, 1.0};
  const double total3 = m3.total_volume();
  const double analytic3 =
      model_mean_curvature(m3, model_radius_for_volume(m3, 0.2 * total3));
  const double fd3 = (model_h1(m3, 0.2 + h) - model_h1(m3, 0.2 - h)) / (2 * h);
  CHECK(analytic3 == doctest::Approx(fd3).epsilon(1e-8));
}

TEST_CASE("grid_derivative: quadratic exactness and central differences") {
  const std::vector<double> grid = {0.1, 0.15, 0.3, 0.55, 0.8, 1.2};
  std::vector<double> quad;
  for (double x : grid) quad.push_back(3.0 * x * x - 2.0 * x + 0.5);
  const auto dq = grid_derivative(grid, quad);
  REQUIRE(dq.size() == grid.size() - 2);
  for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
    CHECK(dq[i] == doctest::Approx(6.0 * grid[i + 1] - 2.0).epsilon(1e-12));
  }

  // On a uniform grid the formula reduces to the usual central difference.
  const auto ugrid = uniform_grid(0.0, 1.0, 11);
  std::vector<double> vals;
  for (double x : ugrid) vals.push_back(std::sin(x));
  const auto ds = grid_derivative(ugrid, vals);
  for (std::size_t i = 0; i + 2 < ugrid.size(); ++i) {
    const double central = (vals[i + 2] - vals[i]) / (ugrid[i + 2] - ugrid[i]);
    CHECK(ds[i] == doctest::Approx(central).epsilon(1e-14));
  }

  CHECK_THROWS_AS(grid_derivative({0.1, 0.2}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(grid_derivative({0.1, 0.2, 0.3}, {1.0, 2.0}), DomainError);
}

TEST_CASE("supersolution residuals: model curve is a strict supersolution") {
  const SpaceForm m{2, 1.0};
  const auto grid = uniform_grid(0.01, 0.99, 257);
  const auto curve = sample_model_h1(m, grid);

  const OdeCheck check = supersolution_residuals(curve, 1.05, m, kPi);
  CHECK(check.alpha == 1.05);
  CHECK(check.k == 1.0);
  CHECK(check.n == 2);
  CHECK(check.d_prime == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(check.lambda == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(check.residuals.size() == grid.size() - 2);
  REQUIRE(check.betas.size() == grid.size() - 2);
  CHECK(check.betas.front() == grid[1]);
  CHECK(check.betas.back() == grid[grid.size() - 2]);
  CHECK(check.min_residual() >= 0.0);

  // Residuals grow pointwise with alpha.
  const OdeCheck looser = supersolution_residuals(curve, 1.5, m, kPi);
  for (std::size_t i = 0; i < check.residuals.size(); ++i) {
    CHECK(looser.residuals[i] > check.residuals[i]);
  }
  CHECK(looser.min_residual() >= 0.0);

  // As alpha -> 1+ the residuals approach the discretization floor.
  const auto fine = sample_model_h1(m, uniform_grid(0.01, 0.99, 2049));
  const OdeCheck tight = supersolution_residuals(fine, 1.0 + 1e-9, m, kPi);
  CHECK(tight.min_residual() >= 0.0);
  CHECK(tight.max_abs_residual() <= 2e-3);
  CHECK(tight.max_abs_residual() <
        supersolution_residuals(fine, 1.05, m, kPi).max_abs_residual());

  // Doubling the curve keeps it strictly above the threshold.
  ProfileCurve doubled = curve;
  for (double& v : doubled.values) v *= 2.0;
  const OdeCheck big = supersolution_residuals(doubled, 1.05, m, kPi);
  CHECK(big.min_residual() > 0.4);

  // Truncated diameter shows up in d' and lambda.
  const OdeCheck trunc = supersolution_residuals(curve, 1.05, m, 0.5 * kPi);
  CHECK(trunc.d_prime == doctest::Approx(0.5 * kPi).epsilon(1e-15));
  CHECK(trunc.lambda == doctest::Approx(1.0).epsilon(1e-12));

  const SpaceForm m3{3, 1.0};
  const auto curve3 = sample_model_h1(m3, uniform_grid(0.01, 0.99, 257));
  CHECK(supersolution_residuals(curve3, 1.05, m3, kPi).min_residual() >= 0.0);

  CHECK_THROWS_AS(supersolution_residuals(curve, 1.0, m, kPi), DomainError);
  CHECK_THROWS_AS(supersolution_residuals(curve, 0.9, m, kPi), DomainError);
  CHECK_THROWS_AS(supersolution_residuals(curve, 1.05, (SpaceForm{2, 0.0}), kPi),
                  DomainError);
  CHECK_THROWS_AS(supersolution_residuals(curve, 1.05, m, 0.0), DomainError);
  ProfileCurve wide = curve;
  wide.grid.push_back(1.5);
  wide.values.push_back(0.1);
  CHECK_THROWS_AS(supersolution_residuals(wide, 1.05, m, kPi), DomainError);
  ProfileCurve tiny;
  tiny.grid = {0.4, 0.6};
  tiny.values = {0.5, 0.5};
  CHECK_THROWS_AS(supersolution_residuals(tiny, 1.05, m, kPi), DomainError);
}

TEST_CASE("profile curve: validation, sampling, and interpolation") {
  const SpaceForm m{2, 1.0};
  const auto grid = log_symmetric_grid(1.0, 21);
  const auto curve = sample_model_h1(m, grid);
  CHECK(curve.kind == CurveKind::kModelH1);
  CHECK_NOTHROW(curve.validate());

  // Interpolation: exact at the nodes, linear between them.
  CHECK(curve_value_at(curve, grid[5]) == curve.values[5]);
  const double mid = 0.5 * (grid[3] + grid[4]);
  CHECK(curve_value_at(curve, mid) ==
        doctest::Approx(0.5 * (curve.values[3] + curve.values[4]))
            .epsilon(1e-14));
  CHECK_THROWS_AS(curve_value_at(curve, grid.front() - 1e-6), DomainError);
  CHECK_THROWS_AS(curve_value_at(curve, grid.back() + 1e-6), DomainError);

  ProfileCurve bad = curve;
  bad.values.pop_back();
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = curve;
  bad.values[4] = -bad.values[4];
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = curve;
  bad.values[4] = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = curve;
  bad.grid[4] = bad.grid[6];
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = curve;
  bad.grid[0] = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = curve;
  bad.values[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.validate(), DomainError);
  ProfileCurve empty;
  CHECK_THROWS_AS(empty.validate(), DomainError);
  ProfileCurve single;
  single.grid = {0.5};
  single.values = {0.5};
  CHECK_THROWS_AS(single.validate(), DomainError);

  // Model-kind curves must be symmetric about 1/2 on symmetric grids and
  // must stay inside (0, 1).
  bad = curve;
  bad.values[2] *= 1.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.kind = CurveKind::kExternal;
  CHECK_NOTHROW(bad.validate());
  bad = curve;
  bad.grid.back() = 1.0;
  bad.grid[bad.grid.size() - 2] = 0.9995;
  CHECK_THROWS_AS(bad.validate(), DomainError);

  // Asymmetric grids skip the symmetry check but keep the range check.
  ProfileCurve skew;
  skew.kind = CurveKind::kModelH1;
  skew.grid = {0.1, 0.2, 0.4};
  skew.values = {0.3, 0.4, 0.49};
  CHECK_NOTHROW(skew.validate());

  CHECK_THROWS_AS(sample_model_h1((SpaceForm{2, 0.0}), grid), DomainError);
  CHECK_THROWS_AS(sample_model_h1((SpaceForm{2, -1.0}), grid), DomainError);
}

TEST_CASE("profile curve: CSV round trip and parse errors") {
  const std::string path = "profile_curve_test.csv";
  const SpaceForm m{2, 1.0};
  const auto curve = sample_model_h1(m, log_symmetric_grid(1.0, 21));
  save_curve_csv(curve, path);

  const ProfileCurve loaded = load_curve_csv(path, CurveKind::kModelH1);
  CHECK(loaded.kind == CurveKind::kModelH1);
  REQUIRE(loaded.grid.size() == curve.grid.size());
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    CHECK(loaded.grid[i] == curve.grid[i]);
    CHECK(loaded.values[i] == curve.values[i]);
  }

  {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "beta,value");
  }

  // Carriage returns and blank lines are tolerated.
  {
    std::ofstream out(path);
    out << "beta,value\r\n0.1,0.5\r\n\n0.2,0.6\r\n";
  }
  const ProfileCurve crlf = load_curve_csv(path);
  CHECK(crlf.kind == CurveKind::kExternal);
  REQUIRE(crlf.grid.size() == 2);
  CHECK(crlf.grid[1] == 0.2);
  CHECK(crlf.values[1] == 0.6);

  {
    std::ofstream out(path);
    out << "beta;value\n0.1,0.5\n";
  }
  CHECK_THROWS_AS(load_curve_csv(path), DomainError);
  {
    std::ofstream out(path);
    out << "beta,value\n0.1,oops\n";
  }
  CHECK_THROWS_AS(load_curve_csv(path), DomainError);
  {
    std::ofstream out(path);
    out << "beta,value\n0.1,0.5,0.7\n";
  }
  CHECK_THROWS_AS(load_curve_csv(path), DomainError);
  {
    std::ofstream out(path);
    out << "beta,value\n0.3,0.5\n0.2,0.6\n";
  }
  CHECK_THROWS_AS(load_curve_csv(path), DomainError);
  {
    std::ofstream out(path);
    out << "beta,value\n0.1 0.5\n";
  }
  CHECK_THROWS_AS(load_curve_csv(path), DomainError);
  {
    std::ofstream out(path);
  }
  CHECK_THROWS_AS(load_curve_csv(path), DomainError);
  CHECK_THROWS_AS(load_curve_csv("no_such_curve.csv"), DomainError);
  CHECK_THROWS_AS(save_curve_csv(curve, "no_such_dir/curve.csv"), DomainError);
  std::remove(path.c_str());
}

TEST_CASE("levy_gromov_check: self comparison and rescaled witness") {
  const SpaceForm m{2, 1.0};
  const auto grid = log_symmetric_grid(1.0, 21);
  const auto model_curve = sample_model_h1(m, grid);

  // Full diameter: L = 1 and the margin is exactly epsilon.
  const auto trivial = levy_gromov_check(model_curve, m, kPi, 1.1, 1e-7);
  REQUIRE(trivial.size() == grid.size());
  CHECK(all_pass(trivial));
  const LevyGromovConstants full = levy_gromov_constants(m, kPi, 1.1);
  CHECK(full.L == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& row : trivial) {
    CHECK(row.theorem_id == "1.4");
    CHECK(row.in_regime);
    CHECK(row.tolerance == 1e-7);
    CHECK(row.margin == doctest::Approx(full.epsilon).epsilon(1e-12));
  }

  // Curvature rescaling: the curvature-4 sphere profile is twice the unit
  // one.
  const SpaceForm small{2, 4.0};
  for (double beta : {0.1, 0.25, 0.5, 0.8}) {
    CHECK(model_h1(small, beta) ==
          doctest::Approx(2.0 * model_h1(m, beta)).epsilon(1e-12));
  }

  // Curvature-4 witness against the unit sphere at half diameter.
  const LevyGromovConstants lg = levy_gromov_constants(m, 0.5 * kPi, 1.1);
  CHECK(lg.L == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(lg.epsilon == doctest::Approx(0.064282).epsilon(1e-4));
  CHECK(std::fabs(lg.epsilon - 0.06428243465332251) <= 1e-10);

  const auto witness = sample_model_h1(small, grid);
  const auto rows = levy_gromov_check(witness, m, 0.5 * kPi, 1.1, 1e-7);
  CHECK(all_pass(rows));
  for (const auto& row : rows) {
    CHECK(row.margin > 0.06);
  }
  const double mid_margin = 2.0 * model_h1(m, 0.5) -
                            (lg.L * model_h1(m, 0.5) - lg.epsilon);
  CHECK(mid_margin == doctest::Approx(0.357175653466775).epsilon(1e-12));

  // Near alpha = 1 the improvement vanishes but the bound still holds.
  const auto corollary =
      levy_gromov_check(witness, m, 0.5 * kPi, 1.0 + 1e-6, 1e-5);
  CHECK(all_pass(corollary));
  const LevyGromovConstants lg1 = levy_gromov_constants(m, 0.5 * kPi, 1.0 + 1e-6);
  CHECK(lg1.epsilon <= 1e-5);
  for (const auto& row : corollary) {
    CHECK(row.lhs >= lg1.L * model_h1(m, row.beta) - 1e-5);
  }

  // The unit-sphere curve itself fails against the half-diameter bound.
  const auto failing = levy_gromov_check(model_curve, m, 0.5 * kPi, 1.1, 1e-7);
  CHECK(!all_pass(failing));
  const std::size_t worst = worst_margin_index(failing);
  CHECK(failing[worst].margin < 0.0);
  CHECK(failing[worst].beta == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(levy_gromov_check(model_curve, (SpaceForm{2, 0.0}), kPi, 1.1),
                  DomainError);
  CHECK_THROWS_AS(levy_gromov_check(model_curve, m, kPi, 1.0), DomainError);
  CHECK_THROWS_AS(levy_gromov_check(model_curve, m, 0.0, 1.1), DomainError);
  CHECK_THROWS_AS(levy_gromov_check(model_curve, m, kPi, 1.1, -1.0),
                  DomainError);
}
