// Acceptance suite: one criterion per line, [PASS]/[FAIL] plus a short
// detail; exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isoprofile/bounds.hpp"
#include "isoprofile/errors.hpp"
#include "isoprofile/profile_ode.hpp"
#include "isoprofile/report.hpp"
#include "isoprofile/spaceform.hpp"
#include "isoprofile/warped.hpp"

#ifdef ISOPROFILE_CLI_PATH
#include <sys/wait.h>
#endif

namespace {

using namespace isoprofile;
using Clock = std::chrono::steady_clock;

constexpr double kPi = 3.14159265358979323846;

int failures = 0;

void report(int id, const std::string& label, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              label.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <typename Fn>
void run_criterion(int id, const std::string& label, Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, label, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = lo + (hi - lo) * i / (count - 1);
  }
  return grid;
}

// ---------------------------------------------------------------------------
// 1. model identities
// ---------------------------------------------------------------------------

void criterion_1() {
  double worst = 0.0;
  // Flat profile closed form on a 50-point grid.
  for (int n : {2, 3, 4}) {
    const SpaceForm flat{n, 0.0};
    const double coeff =
        n * std::pow(unit_ball_volume(n), 1.0 / n);
    for (double beta : uniform_grid(0.04, 2.0, 50)) {
      const double closed = coeff * std::pow(beta, (n - 1.0) / n);
      worst = std::max(worst, std::fabs(model_h2(flat, beta) - closed));
    }
  }
  const bool flat_ok = worst <= 1e-8;

  // Normalization relation h1(beta) = h2(beta |M|) / |M| on spheres.
  double worst_h1 = 0.0;
  for (int n : {2, 3}) {
    for (double k : {1.0, 4.0}) {
      const SpaceForm m{n, k};
      const double total = m.total_volume();
      for (double beta : uniform_grid(0.02, 0.98, 50)) {
        const double lhs = model_h1(m, beta);
        const double rhs = model_h2(m, beta * total) / total;
        worst_h1 = std::max(worst_h1, std::fabs(lhs - rhs));
      }
    }
  }
  const bool h1_ok = worst_h1 <= 1e-10;

  // Small-volume asymptote of the normalized profile.
  double worst_asym = 0.0;
  for (int n : {2, 3, 4}) {
    const SpaceForm m{n, 1.0};
    const double total = m.total_volume();
    const double target =
        n * std::pow(unit_ball_volume(n) / total, 1.0 / n);
    const double beta = 1e-6;
    const double ratio = model_h1(m, beta) / std::pow(beta, (n - 1.0) / n);
    worst_asym = std::max(worst_asym, std::fabs(ratio / target - 1.0));
  }
  const bool asym_ok = worst_asym <= 0.01;

  report(1, "model identities", flat_ok && h1_ok && asym_ok,
         "flat dev " + fmt(worst) + ", h1 dev " + fmt(worst_h1) +
             ", asym rel dev " + fmt(worst_asym));
}

// ---------------------------------------------------------------------------
// 2. equality cases
// ---------------------------------------------------------------------------

void criterion_2() {
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  bool all_rows_pass = true;
  for (int n : {2, 3}) {
    const WarpedManifold sphere = WarpedManifold::round_sphere(n, 1.0);
    const WarpedManifold ball = WarpedManifold::euclidean_ball(n, 1.0);
    for (const WarpedManifold* W : {&sphere, &ball}) {
      const double k = W->is_closed() ? 1.0 : 0.0;
      const BoundParams params = params_for_manifold(*W, 2.0, k);
      const auto grid = log_symmetric_grid(beta_ceiling(*W, k), 9);
      for (const auto& row : verify_h2(*W, params, grid, 1e-8)) {
        worst_lhs = std::max(worst_lhs, std::fabs(row.lhs));
        worst_rhs = std::max(worst_rhs, std::fabs(row.rhs));
        all_rows_pass = all_rows_pass && row.pass;
      }
    }
  }
  const bool ok = all_rows_pass && worst_lhs <= 1e-8 && worst_rhs <= 1e-8;
  report(2, "equality cases recover the model profile", ok,
         "max |lhs| " + fmt(worst_lhs) + ", max |rhs| " + fmt(worst_rhs));
}

// ---------------------------------------------------------------------------
// 3. gap bound on perturbed spheres
// ---------------------------------------------------------------------------

void criterion_3() {
  const auto start = Clock::now();
  bool all_ok = true;
  double worst_margin = 1e300;
  for (int n : {2, 3}) {
    for (double delta : {0.01, 0.05}) {
      const WarpedManifold W = WarpedManifold::perturbed_sphere(n, delta);
      const BoundParams params = params_for_manifold(W, 2.0, 1.0);
      const auto grid = log_symmetric_grid(beta_ceiling(W, 1.0), 20);
      for (const auto& row : verify_h2(W, params, grid, 1e-7)) {
        all_ok = all_ok && row.pass;
        worst_margin = std::min(worst_margin, row.margin);
      }
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = all_ok && elapsed < 10.0;
  report(3, "gap bound holds on perturbed spheres", ok,
         "worst margin " + fmt(worst_margin) + ", " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 4. flat error-term closed form
// ---------------------------------------------------------------------------

void criterion_4() {
  double worst = 0.0;
  const int n = 2;
  const double coeff = n * std::pow(unit_ball_volume(n), 1.0 / n);
  for (double p : {1.5, 2.0, 3.0}) {
    for (double d : {0.5, 1.0, 2.0}) {
      for (double norm : {0.01, 0.1, 0.5, 1.0, 2.0}) {
        const BoundParams params{n, p, 0.0, d, norm};
        const double lambda =
            std::pow(1.0 + C_constant(params) * std::sqrt(norm),
                     q_exponent(n, p, 0.0));
        for (double beta : {0.37, 1.0}) {
          const double closed =
              (lambda - 1.0) * coeff * std::pow(beta, (n - 1.0) / n);
          const double integral = f_error(params, beta);
          worst = std::max(worst, std::fabs(integral - closed));
        }
      }
    }
  }
  const bool ok = worst <= 1e-8;
  report(4, "flat error term matches its closed form", ok,
         "max dev " + fmt(worst) + " over 3x3x5 grid");
}

// ---------------------------------------------------------------------------
// 5. proof-ingredient inequalities
// ---------------------------------------------------------------------------

void criterion_5() {
  std::mt19937 rng(573202u);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int violations = 0;
  double tightest = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const int family = i % 3;
    const int n = 2 + static_cast<int>(U(rng) * 3.0) % 3;
    const double p = 0.5 * n + 0.3 + 2.0 * U(rng);
    double k = 0.0;
    double r = 0.0;
    // Build one of the three perturbed families with randomized shape.
    const WarpedManifold W = [&]() {
      if (family == 0) {
        k = 1.0;
        const WarpedManifold m =
            WarpedManifold::perturbed_sphere(n, 0.2 * U(rng));
        r = (0.05 + 0.93 * U(rng)) * m.radial_extent();
        return m;
      }
      if (family == 1) {
        k = 0.0;
        const WarpedManifold m = WarpedManifold::flared_euclidean_ball(
            n, 0.3 + 1.7 * U(rng), U(rng));
        r = (0.05 + 0.94 * U(rng)) * m.radial_extent();
        return m;
      }
      k = -1.0;
      const WarpedManifold m = WarpedManifold::perturbed_hyperbolic_ball(
          n, 0.3 + 1.2 * U(rng), U(rng));
      r = (0.05 + 0.94 * U(rng)) * m.radial_extent();
      return m;
    }();

    const double ric = W.integral_ricci_norm(p, k, r).value;
    // Mean-curvature comparison: the L^{2p} excess norm is controlled by
    // the curvature deficit.
    const double mp = W.m_plus_norm(p, k, r).value;
    const double mc_rhs = std::sqrt(kappa(n, p) * ric);
    if (!(mp <= mc_rhs + 1e-8 * (1.0 + mc_rhs))) ++violations;
    if (ric > 0.0) tightest = std::min(tightest, mc_rhs - mp);

    // Volume comparison: the ball volume is controlled by the model volume
    // through the same constant C.
    BoundParams params;
    params.n = n;
    params.p = p;
    params.k = k;
    params.d = r;
    params.norm = ric;
    const double C = C_constant(params);
    const double lhs_vol = W.ball_volume(r);
    const double rhs_vol = std::pow(1.0 + C * std::sqrt(ric), 2.0 * p) *
                           model_volume(SpaceForm{n, k}, r);
    if (!(lhs_vol <= rhs_vol * (1.0 + 1e-8))) ++violations;
  }
  report(5, "mean-curvature and volume comparison inequalities", violations == 0,
         violations == 0
             ? "1000 draws, zero violations, tightest slack " + fmt(tightest)
             : std::to_string(violations) + " violations");
}

// ---------------------------------------------------------------------------
// 6. volume dilation
// ---------------------------------------------------------------------------

void criterion_6() {
  std::mt19937 rng(918273u);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int bad_pos = 0;
  int bad_nonpos = 0;

  // k > 0: rbar <= alpha r with alpha in [1, 2].
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(U(rng) * 3.0) % 3;
    const SpaceForm m{n, 1.0};
    const double alpha = 1.0 + U(rng);
    const double r = (0.01 + 0.985 * U(rng)) * 0.5 * m.radial_limit();
    const double extremal =
        model_radius_for_volume(m, alpha * model_volume(m, r));
    if (!check_radius_dilation(n, 1.0, alpha, r, extremal)) ++bad_pos;
    const double below =
        model_radius_for_volume(m, (0.2 + 0.8 * U(rng)) * alpha *
                                       model_volume(m, r));
    if (!check_radius_dilation(n, 1.0, alpha, r, below)) ++bad_pos;
  }

  // k <= 0: rbar <= alpha^{1/n} r with alpha unrestricted above 1.
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(U(rng) * 3.0) % 3;
    const double k = (i % 2 == 0) ? 0.0 : -1.0;
    const SpaceForm m{n, k};
    const double alpha = 1.0 + 4.0 * U(rng);
    const double r = 0.05 + 2.95 * U(rng);
    const double extremal =
        model_radius_for_volume(m, alpha * model_volume(m, r));
    if (!check_radius_dilation(n, k, alpha, r, extremal)) ++bad_nonpos;
  }

  // Flat equality: rbar = alpha^{1/n} r exactly (area element s^{n-1}).
  double worst_eq = 0.0;
  for (int n : {2, 3, 4}) {
    const SpaceForm flat{n, 0.0};
    for (double alpha : {1.0, 1.5, 2.0, 3.0, 5.0}) {
      for (double r : {0.1, 0.7, 1.9}) {
        const double rbar =
            model_radius_for_volume(flat, alpha * model_volume(flat, r));
        const double exact = std::pow(alpha, 1.0 / n) * r;
        worst_eq = std::max(worst_eq, std::fabs(rbar - exact) / exact);
      }
    }
  }
  const bool ok = bad_pos == 0 && bad_nonpos == 0 && worst_eq <= 1e-9;
  report(6, "volume dilation radius bounds", ok,
         "violations " + std::to_string(bad_pos + bad_nonpos) +
             ", flat equality rel dev " + fmt(worst_eq));
}

// ---------------------------------------------------------------------------
// 7. supersolution residuals of the model curve
// ---------------------------------------------------------------------------

void criterion_7() {
  double worst_min = 1e300;
  double worst_tight = 0.0;
  for (int n : {2, 3}) {
    const SpaceForm m{n, 1.0};
    const auto curve =
        sample_model_h1(m, uniform_grid(0.01, 0.99, 65537));
    for (double alpha : {1.01, 1.05, 1.5}) {
      const OdeCheck check =
          supersolution_residuals(curve, alpha, m, m.radial_limit());
      worst_min = std::min(worst_min, check.min_residual());
    }
    // alpha -> 1+: residuals vanish uniformly up to the grid resolution.
    const OdeCheck tight =
        supersolution_residuals(curve, 1.0 + 1e-9, m, m.radial_limit());
    worst_tight = std::max(worst_tight, tight.max_abs_residual());
  }
  const bool ok = worst_min >= -1e-9 && worst_tight <= 1e-6;
  report(7, "model curve is a supersolution", ok,
         "min residual " + fmt(worst_min) + ", limit max |residual| " +
             fmt(worst_tight));
}

// ---------------------------------------------------------------------------
// 8. improved lower bound and corollary
// ---------------------------------------------------------------------------

void criterion_8() {
  const SpaceForm m{2, 1.0};
  const SpaceForm witness_model{2, 4.0};
  const auto grid = log_symmetric_grid(1.0, 20);
  const auto witness = sample_model_h1(witness_model, grid);

  const LevyGromovConstants lg = levy_gromov_constants(m, 0.5 * kPi, 1.1);
  const bool L_ok = std::fabs(lg.L - std::sqrt(2.0)) <= 1e-12;
  const bool eps_ok = std::fabs(lg.epsilon - 0.064282) <= 1e-6;

  const auto rows = levy_gromov_check(witness, m, 0.5 * kPi, 1.1, 1e-7);
  double min_margin = 1e300;
  for (const auto& row : rows) min_margin = std::min(min_margin, row.margin);
  const bool margin_ok = all_pass(rows) && min_margin > 0.0;

  // Corollary: at alpha = 1 + 1e-6 the unimproved inequality holds with
  // 1e-5 slack.
  const LevyGromovConstants lg1 =
      levy_gromov_constants(m, 0.5 * kPi, 1.0 + 1e-6);
  bool corollary_ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    corollary_ok = corollary_ok &&
                   witness.values[i] >=
                       lg1.L * model_h1(m, grid[i]) - 1e-5;
  }
  const bool ok = L_ok && eps_ok && margin_ok && corollary_ok;
  report(8, "improved lower bound with rescaled witness", ok,
         "L dev " + fmt(std::fabs(lg.L - std::sqrt(2.0))) + ", eps dev " +
             fmt(std::fabs(lg.epsilon - 0.064282)) + ", min margin " +
             fmt(min_margin));
}

// ---------------------------------------------------------------------------
// 9. relative equality cases
// ---------------------------------------------------------------------------

void criterion_9() {
  const auto start = Clock::now();
  bool all_ok = true;
  double worst_lhs = 0.0;
  for (int n : {2, 3}) {
    for (double k : {0.0, -1.0}) {
      const SpaceForm model{n, k};
      BoundParams params;
      params.n = n;
      params.p = 2.0;
      params.k = k;
      params.d = 2.0;
      params.norm = 0.0;
      const double domain_volume = model_volume(model, 1.0);
      const auto grid = log_symmetric_grid(domain_volume, 20);
      for (const auto& row :
           verify_relative(model, 1.0, params, grid, 1e-7)) {
        all_ok = all_ok && row.pass;
        worst_lhs = std::max(worst_lhs, row.lhs);
      }
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = all_ok && worst_lhs <= 1e-7 && elapsed < 30.0;
  report(9, "cap witness stays below the half-space profile", ok,
         "max lhs " + fmt(worst_lhs) + ", " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 10. CLI determinism
// ---------------------------------------------------------------------------

#ifdef ISOPROFILE_CLI_PATH
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ISOPROFILE_CLI_PATH + "\" " +
                          args + " > /dev/null 2> /dev/null";
  return WEXITSTATUS(std::system(cmd.c_str()));
}
#endif

void criterion_10() {
#ifndef ISOPROFILE_CLI_PATH
  report(10, "CLI determinism across jobs", false,
         "tool build disabled; rebuild with ISOPROFILE_BUILD_TOOLS=ON");
#else
  {
    std::ofstream cfg("acceptance_cli.ini");
    cfg << "[run]\ntheorem = 1.2\n"
           "[manifold]\npreset = perturbed_sphere\nn = 2\ndelta = 0.05\n"
           "[model]\nk = 1.0\n[grid]\ncount = 20\n";
  }
  const int rc1 = run_cli(
      "verify --config acceptance_cli.ini --out acceptance_j1.csv --jobs 1");
  const int rc8 = run_cli(
      "verify --config acceptance_cli.ini --out acceptance_j8.csv --jobs 8");
  const int rc8b = run_cli(
      "verify --config acceptance_cli.ini --out acceptance_j8b.json --jobs 8");
  const int rc1b = run_cli(
      "verify --config acceptance_cli.ini --out acceptance_j1b.json --jobs 1");
  const std::string a = slurp("acceptance_j1.csv");
  const std::string b = slurp("acceptance_j8.csv");
  const std::string aj = slurp("acceptance_j1b.json");
  const std::string bj = slurp("acceptance_j8b.json");
  const bool ok = rc1 == 0 && rc8 == 0 && rc8b == 0 && rc1b == 0 &&
                  !a.empty() && a == b && !aj.empty() && aj == bj;
  report(10, "CLI determinism across jobs", ok,
         ok ? "csv and json byte-identical for --jobs 1 vs 8"
            : "outputs differ or nonzero exit");
  std::remove("acceptance_cli.ini");
  std::remove("acceptance_j1.csv");
  std::remove("acceptance_j8.csv");
  std::remove("acceptance_j1b.json");
  std::remove("acceptance_j8b.json");
#endif
}

}  // namespace

int main() {
  run_criterion(1, "model identities", criterion_1);
  run_criterion(2, "equality cases recover the model profile", criterion_2);
  run_criterion(3, "gap bound holds on perturbed spheres", criterion_3);
  run_criterion(4, "flat error term matches its closed form", criterion_4);
  run_criterion(5, "mean-curvature and volume comparison inequalities",
                criterion_5);
  run_criterion(6, "volume dilation radius bounds", criterion_6);
  run_criterion(7, "model curve is a supersolution", criterion_7);
  run_criterion(8, "improved lower bound with rescaled witness", criterion_8);
  run_criterion(9, "cap witness stays below the half-space profile",
                criterion_9);
  run_criterion(10, "CLI determinism across jobs", criterion_10);
  if (failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", failures);
  return 1;
}
