// isoprofile: command-line surface over the comparison library.
//
// Commands: model-profile, verify, constants, norm.  Problem definitions come
// from an INI-style --config file; --out, --tol, and --jobs adjust the run.
// Exit codes: 0 pass, 1 inequality/smallness violation, 2 invalid input,
// 3 numerical non-convergence.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "isoprofile/bounds.hpp"
#include "isoprofile/errors.hpp"
#include "isoprofile/profile_ode.hpp"
#include "isoprofile/report.hpp"
#include "isoprofile/spaceform.hpp"
#include "isoprofile/warped.hpp"

namespace {

using namespace isoprofile;

// ---------------------------------------------------------------------------
// error plumbing: one-line machine-parsable reasons, fixed exit codes
// ---------------------------------------------------------------------------

struct CliError {
  int code;
  std::string kind;
  std::string message;
};

[[noreturn]] void fail_invalid(const std::string& message) {
  throw CliError{2, "invalid-input", message};
}

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

// ---------------------------------------------------------------------------
// INI configuration
// ---------------------------------------------------------------------------

std::string trim(const std::string& text) {
  std::size_t lo = 0;
  std::size_t hi = text.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1]))) --hi;
  return text.substr(lo, hi - lo);
}

class Config {
 public:
  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_invalid("cannot open config file " + path);
    Config cfg;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string text = trim(line);
      if (text.empty() || text[0] == '#' || text[0] == ';') continue;
      if (text.front() == '[') {
        if (text.back() != ']') {
          fail_invalid("config line " + std::to_string(lineno) +
                       ": malformed section header");
        }
        section = trim(text.substr(1, text.size() - 2));
        if (section.empty()) {
          fail_invalid("config line " + std::to_string(lineno) +
                       ": empty section name");
        }
        continue;
      }
      const std::size_t eq = text.find('=');
      if (eq == std::string::npos) {
        fail_invalid("config line " + std::to_string(lineno) +
                     ": expected key = value");
      }
      if (section.empty()) {
        fail_invalid("config line " + std::to_string(lineno) +
                     ": key outside any [section]");
      }
      const std::string key = trim(text.substr(0, eq));
      const std::string value = trim(text.substr(eq + 1));
      if (key.empty()) {
        fail_invalid("config line " + std::to_string(lineno) + ": empty key");
      }
      const std::string full = section + "." + key;
      if (cfg.values_.count(full)) {
        fail_invalid("config line " + std::to_string(lineno) +
                     ": duplicate key [" + section + "] " + key);
      }
      cfg.values_[full] = value;
    }
    cfg.check_schema();
    return cfg;
  }

  bool has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
  }

  std::string get_string(const std::string& section,
                         const std::string& key) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) {
      fail_invalid("missing required config key [" + section + "] " + key);
    }
    return it->second;
  }

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    const std::string raw = get_string(section, key);
    try {
      std::size_t used = 0;
      const double value = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      return value;
    } catch (const std::exception&) {
      fail_invalid("config key [" + section + "] " + key +
                   ": malformed number '" + raw + "'");
    }
  }

  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  int get_int(const std::string& section, const std::string& key) const {
    const std::string raw = get_string(section, key);
    try {
      std::size_t used = 0;
      const long value = std::stol(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      if (value < -1000000 || value > 1000000) throw std::out_of_range(raw);
      return static_cast<int>(value);
    } catch (const std::exception&) {
      fail_invalid("config key [" + section + "] " + key +
                   ": malformed integer '" + raw + "'");
    }
  }

  int get_int_or(const std::string& section, const std::string& key,
                 int fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
  }

  bool get_bool(const std::string& section, const std::string& key) const {
    const std::string raw = get_string(section, key);
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    fail_invalid("config key [" + section + "] " + key +
                 ": expected true/false, got '" + raw + "'");
  }

  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const {
    return has(section, key) ? get_bool(section, key) : fallback;
  }

 private:
  void check_schema() const {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"run", {"command", "theorem", "out", "tol", "jobs"}},
        {"manifold", {"preset", "table", "closed", "n", "radius", "curvature",
                      "delta"}},
        {"model", {"n", "k"}},
        {"bounds", {"p", "d", "norm", "alpha", "ball_radius"}},
        {"grid", {"count", "min", "max", "margin"}},
        {"profile", {"kind"}},
        {"curve", {"source", "k", "path"}},
        {"norm", {"kind", "radius"}},
    };
    for (const auto& [full, value] : values_) {
      (void)value;
      const std::size_t dot = full.find('.');
      const std::string section = full.substr(0, dot);
      const std::string key = full.substr(dot + 1);
      const auto it = schema.find(section);
      if (it == schema.end()) {
        fail_invalid("unknown config section [" + section + "]");
      }
      if (!it->second.count(key)) {
        fail_invalid("unknown config key [" + section + "] " + key);
      }
    }
  }

  std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------
// shared run controls (flag overrides config overrides default)
// ---------------------------------------------------------------------------

struct RunControls {
  std::string out;
  double tol = 1e-7;
  int jobs = 1;
};

RunControls resolve_controls(const Config& cfg, const std::string& flag_out,
                             bool has_flag_out, double flag_tol,
                             bool has_flag_tol, int flag_jobs,
                             bool has_flag_jobs) {
  RunControls rc;
  rc.out = has_flag_out ? flag_out : cfg.get_string_or("run", "out", "");
  rc.tol = has_flag_tol ? flag_tol : cfg.get_double_or("run", "tol", 1e-7);
  rc.jobs = has_flag_jobs ? flag_jobs : cfg.get_int_or("run", "jobs", 1);
  if (!(rc.tol >= 0.0) || !std::isfinite(rc.tol)) {
    fail_invalid("tolerance must be a finite value >= 0");
  }
  if (rc.jobs < 1 || rc.jobs > 512) {
    fail_invalid("jobs must lie in [1, 512]");
  }
  return rc;
}

// ---------------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------------

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail_invalid("cannot open output file " + out_path);
  out << content;
  if (!out) fail_invalid("write failed for output file " + out_path);
}

bool ends_with(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string format_sig15(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string json_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

/// Flat JSON object with insertion-ordered keys; numbers use 15 significant
/// digits, non-finite numbers become quoted strings.
class FlatJson {
 public:
  void add_number(const std::string& key, double value) {
    if (std::isfinite(value)) {
      items_.emplace_back(key, format_sig15(value));
    } else {
      items_.emplace_back(key, "\"" + format_sig15(value) + "\"");
    }
  }
  void add_int(const std::string& key, long value) {
    items_.emplace_back(key, std::to_string(value));
  }
  void add_bool(const std::string& key, bool value) {
    items_.emplace_back(key, value ? "true" : "false");
  }
  void add_string(const std::string& key, const std::string& value) {
    items_.emplace_back(key, "\"" + json_escape(value) + "\"");
  }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (i) out += ",";
      out += "\"" + json_escape(items_[i].first) + "\":" + items_[i].second;
    }
    out += "}\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

// ---------------------------------------------------------------------------
// config -> domain objects
// ---------------------------------------------------------------------------

SpaceForm model_from_config(const Config& cfg) {
  SpaceForm m;
  m.n = cfg.get_int("model", "n");
  m.k = cfg.get_double("model", "k");
  m.validate();
  return m;
}

WarpedManifold manifold_from_config(const Config& cfg) {
  const bool has_preset = cfg.has("manifold", "preset");
  const bool has_table = cfg.has("manifold", "table");
  if (has_preset == has_table) {
    fail_invalid("[manifold] needs exactly one of 'preset' or 'table'");
  }
  const int n = cfg.get_int("manifold", "n");
  if (has_table) {
    const std::string path = cfg.get_string("manifold", "table");
    const bool closed = cfg.get_bool_or("manifold", "closed", false);
    return WarpedManifold::load_table(n, path, closed);
  }
  const std::string preset = cfg.get_string("manifold", "preset");
  if (preset == "euclidean_ball") {
    return WarpedManifold::euclidean_ball(n,
                                          cfg.get_double("manifold", "radius"));
  }
  if (preset == "round_sphere") {
    return WarpedManifold::round_sphere(
        n, cfg.get_double("manifold", "curvature"));
  }
  if (preset == "hyperbolic_ball") {
    return WarpedManifold::hyperbolic_ball(
        n, cfg.get_double("manifold", "radius"));
  }
  if (preset == "perturbed_sphere") {
    return WarpedManifold::perturbed_sphere(
        n, cfg.get_double("manifold", "delta"));
  }
  if (preset == "flared_euclidean_ball") {
    return WarpedManifold::flared_euclidean_ball(
        n, cfg.get_double("manifold", "radius"),
        cfg.get_double("manifold", "delta"));
  }
  if (preset == "perturbed_hyperbolic_ball") {
    return WarpedManifold::perturbed_hyperbolic_ball(
        n, cfg.get_double("manifold", "radius"),
        cfg.get_double("manifold", "delta"));
  }
  fail_invalid("unknown manifold preset '" + preset + "'");
}

/// Volume grid: explicit [grid] min/max give a uniform inclusive grid;
/// otherwise count points log-symmetric on (0, natural_max).
std::vector<double> grid_from_config(const Config& cfg, double natural_max) {
  const int count = cfg.get_int_or("grid", "count", 20);
  if (count < 1 || count > 2000000) {
    fail_invalid("[grid] count must lie in [1, 2000000]");
  }
  const double margin = cfg.get_double_or("grid", "margin", 1e-3);
  const bool has_min = cfg.has("grid", "min");
  const bool has_max = cfg.has("grid", "max");
  if (has_min && !has_max) {
    fail_invalid("[grid] min requires [grid] max");
  }
  if (has_min) {
    const double lo = cfg.get_double("grid", "min");
    const double hi = cfg.get_double("grid", "max");
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
      fail_invalid("[grid] needs 0 < min < max < inf");
    }
    if (count < 2) fail_invalid("[grid] explicit min/max need count >= 2");
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) {
      grid[i] = lo + (hi - lo) * i / (count - 1);
    }
    return grid;
  }
  const double vmax =
      has_max ? cfg.get_double("grid", "max") : natural_max;
  if (!(vmax > 0.0) || !std::isfinite(vmax)) {
    fail_invalid("[grid] max required here (no natural grid ceiling)");
  }
  return log_symmetric_grid(vmax, count, margin);
}

/// The witness curve of the ODE and lower-bound checks: by default the model
/// normalized profile of [curve] k (falling back to [model] k) sampled on the
/// normalized grid; alternatively an external CSV.
ProfileCurve curve_from_config(const Config& cfg, const SpaceForm& model,
                               std::string* label) {
  const std::string source = cfg.get_string_or("curve", "source", "model");
  if (source == "file") {
    const std::string path = cfg.get_string("curve", "path");
    *label = path;
    return load_curve_csv(path, CurveKind::kExternal);
  }
  if (source != "model") {
    fail_invalid("[curve] source must be 'model' or 'file'");
  }
  SpaceForm cm;
  cm.n = model.n;
  cm.k = cfg.get_double_or("curve", "k", model.k);
  cm.validate();
  *label = "model[k=" + format_double(cm.k) + "]";
  return sample_model_h1(cm, grid_from_config(cfg, 1.0));
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_model_profile(const Config& cfg, const RunControls& rc) {
  const SpaceForm m = model_from_config(cfg);
  const std::string kind =
      cfg.get_string_or("profile", "kind", m.k > 0.0 ? "h1" : "h2");
  if (kind != "h1" && kind != "h2") {
    fail_invalid("[profile] kind must be 'h1' or 'h2'");
  }
  double natural_max = 0.0;
  if (kind == "h1") {
    if (!(m.k > 0.0)) {
      fail_invalid("profile kind h1 needs k > 0");
    }
    natural_max = 1.0;
  } else if (m.k > 0.0) {
    natural_max = m.total_volume();
  }  // k <= 0 h2 grids need an explicit [grid] max
  const std::vector<double> grid = grid_from_config(cfg, natural_max);
  std::string csv = "beta,value\n";
  for (double beta : grid) {
    const double value = kind == "h1" ? model_h1(m, beta) : model_h2(m, beta);
    csv += format_double(beta) + "," + format_double(value) + "\n";
  }
  emit(rc.out, csv);
  return 0;
}

int report_and_exit(const std::vector<ComparisonReport>& rows,
                    const std::string& theorem, const RunControls& rc) {
  const std::string report = ends_with(rc.out, ".json")
                                 ? reports_to_json(rows)
                                 : reports_to_csv(rows);
  int failed = 0;
  int out_of_regime = 0;
  for (const auto& row : rows) {
    if (!row.pass) ++failed;
    if (!row.in_regime) ++out_of_regime;
  }
  const std::size_t worst = worst_margin_index(rows);
  std::ostringstream summary;
  summary << "verify theorem=" << theorem << " rows=" << rows.size()
          << " failed=" << failed << " out_of_regime=" << out_of_regime
          << " worst_margin=" << format_double(rows[worst].margin)
          << " worst_beta=" << format_double(rows[worst].beta)
          << " status=" << (failed == 0 ? "pass" : "fail") << "\n";
  if (rc.out.empty()) {
    // Report on stdout; keep it parseable by sending the summary to stderr.
    std::cout << report;
    std::cerr << summary.str();
  } else {
    emit(rc.out, report);
    std::cout << summary.str();
  }
  return failed == 0 ? 0 : 1;
}

int cmd_verify(const Config& cfg, const RunControls& rc) {
  const std::string theorem = cfg.get_string("run", "theorem");
  if (theorem == "1.1" || theorem == "1.2") {
    const WarpedManifold manifold = manifold_from_config(cfg);
    const double k = cfg.get_double("model", "k");
    if (cfg.has("model", "n") &&
        cfg.get_int("model", "n") != manifold.dimension()) {
      fail_invalid("[model] n disagrees with the manifold dimension");
    }
    const double p = cfg.get_double_or("bounds", "p", 2.0);
    BoundParams params = params_for_manifold(manifold, p, k);
    if (cfg.has("bounds", "d")) params.d = cfg.get_double("bounds", "d");
    if (cfg.has("bounds", "norm")) {
      params.norm = cfg.get_double("bounds", "norm");
    }
    const auto betas = grid_from_config(cfg, beta_ceiling(manifold, k));
    const auto rows =
        verify_h2(manifold, params, betas, rc.tol, rc.jobs, theorem);
    return report_and_exit(rows, theorem, rc);
  }
  if (theorem == "2.3" || theorem == "2.4") {
    const SpaceForm model = model_from_config(cfg);
    const double ball_radius = cfg.get_double("bounds", "ball_radius");
    BoundParams params;
    params.n = model.n;
    params.k = model.k;
    params.p = cfg.get_double_or("bounds", "p", 2.0);
    params.d = cfg.get_double_or("bounds", "d", 2.0 * ball_radius);
    params.norm = cfg.get_double_or("bounds", "norm", 0.0);
    const auto betas =
        grid_from_config(cfg, model_volume(model, ball_radius));
    const auto rows = verify_relative(model, ball_radius, params, betas,
                                      rc.tol, rc.jobs, theorem);
    return report_and_exit(rows, theorem, rc);
  }
  if (theorem == "1.3") {
    const SpaceForm model = model_from_config(cfg);
    if (!(model.k > 0.0)) fail_invalid("theorem 1.3 needs [model] k > 0");
    const double alpha = cfg.get_double("bounds", "alpha");
    const double diam =
        cfg.get_double_or("bounds", "d", model.radial_limit());
    std::string curve_label;
    const ProfileCurve curve = curve_from_config(cfg, model, &curve_label);
    const OdeCheck check =
        supersolution_residuals(curve, alpha, model, diam);
    const std::vector<std::pair<std::string, std::string>> inputs = {
        {"n", std::to_string(check.n)},
        {"k", format_double(check.k)},
        {"alpha", format_double(check.alpha)},
        {"d_prime", format_double(check.d_prime)},
        {"lambda", format_double(check.lambda)},
        {"curve", curve_label},
    };
    std::vector<ComparisonReport> rows;
    rows.reserve(check.residuals.size());
    for (std::size_t i = 0; i < check.residuals.size(); ++i) {
      ComparisonReport row;
      row.theorem_id = "1.3";
      row.beta = check.betas[i];
      row.lhs = 1.0 / check.lambda;
      row.rhs = row.lhs + check.residuals[i];
      row.margin = check.residuals[i];
      row.pass = row.margin >= -rc.tol;
      row.tolerance = rc.tol;
      row.in_regime = true;
      row.inputs = inputs;
      rows.push_back(std::move(row));
    }
    return report_and_exit(rows, theorem, rc);
  }
  if (theorem == "1.4") {
    const SpaceForm model = model_from_config(cfg);
    if (!(model.k > 0.0)) fail_invalid("theorem 1.4 needs [model] k > 0");
    const double alpha = cfg.get_double("bounds", "alpha");
    const double diam =
        cfg.get_double_or("bounds", "d", model.radial_limit());
    std::string curve_label;
    const ProfileCurve curve = curve_from_config(cfg, model, &curve_label);
    auto rows = levy_gromov_check(curve, model, diam, alpha, rc.tol);
    for (auto& row : rows) {
      row.inputs.emplace_back("curve", curve_label);
    }
    return report_and_exit(rows, theorem, rc);
  }
  fail_invalid("unknown theorem selector '" + theorem +
               "' (expected 1.1, 1.2, 1.3, 1.4, 2.3, or 2.4)");
}

int cmd_constants(const Config& cfg, const RunControls& rc) {
  const SpaceForm m = model_from_config(cfg);
  BoundParams params;
  params.n = m.n;
  params.k = m.k;
  params.p = cfg.get_double_or("bounds", "p", 2.0);
  params.d = cfg.get_double_or("bounds", "d", 1.0);
  params.norm = cfg.get_double_or("bounds", "norm", 0.0);
  const double alpha = cfg.get_double_or("bounds", "alpha", 1.1);
  params.validate();

  FlatJson json;
  json.add_int("n", params.n);
  json.add_number("p", params.p);
  json.add_number("k", params.k);
  json.add_number("d", params.d);
  json.add_number("alpha", alpha);
  json.add_number("norm", params.norm);
  json.add_number("kappa", kappa(params.n, params.p));
  json.add_number("q", q_exponent(params.n, params.p, params.k));
  json.add_number("C", C_constant(params));
  json.add_number("C1", C1_constant(params));
  if (m.k > 0.0) {
    const LevyGromovConstants lg = levy_gromov_constants(m, params.d, alpha);
    json.add_number("gamma_n", lg.gamma_n);
    json.add_number("lambda", lg.lambda);
    json.add_number("L", lg.L);
    json.add_number("epsilon", lg.epsilon);
  }
  emit(rc.out, json.str());
  return 0;
}

int cmd_norm(const Config& cfg, const RunControls& rc) {
  const WarpedManifold manifold = manifold_from_config(cfg);
  const double k = cfg.get_double("model", "k");
  const double p = cfg.get_double_or("bounds", "p", 2.0);
  const std::string kind = cfg.get_string_or("norm", "kind", "ricci");
  IntegralNorm norm;
  if (kind == "ricci") {
    if (cfg.has("norm", "radius")) {
      norm = manifold.integral_ricci_norm(p, k,
                                          cfg.get_double("norm", "radius"));
    } else {
      norm = manifold.whole_manifold_ricci_norm(p, k);
    }
  } else if (kind == "m_plus") {
    const double radius =
        cfg.get_double_or("norm", "radius", manifold.radial_extent());
    norm = manifold.m_plus_norm(p, k, radius);
  } else {
    fail_invalid("[norm] kind must be 'ricci' or 'm_plus'");
  }
  FlatJson json;
  json.add_string("manifold", manifold.name());
  json.add_string("kind", kind);
  json.add_number("p", norm.p);
  json.add_number("k", norm.k);
  json.add_number("radius", norm.radius);
  json.add_bool("whole_manifold", norm.whole_manifold);
  json.add_number("value", norm.value);
  emit(rc.out, json.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isoperimetric profile comparison toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  double tol = 0.0;
  int jobs = 0;
  auto* opt_config =
      app.add_option("--config", config_path, "INI configuration file");
  auto* opt_out = app.add_option("--out", out_path, "Output file path");
  auto* opt_tol = app.add_option("--tol", tol, "Comparison tolerance");
  auto* opt_jobs = app.add_option("--jobs", jobs, "Worker threads");

  auto* sub_profile = app.add_subcommand(
      "model-profile", "Export a model profile curve as CSV");
  auto* sub_verify =
      app.add_subcommand("verify", "Evaluate comparison rows for a theorem id");
  auto* sub_constants =
      app.add_subcommand("constants", "Print the constants as flat JSON");
  auto* sub_norm =
      app.add_subcommand("norm", "Print an integral curvature norm as JSON");
  for (auto* sub : {sub_profile, sub_verify, sub_constants, sub_norm}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: invalid-input: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (!*opt_config) fail_invalid("--config is required");
    const Config cfg = Config::load(config_path);
    const std::string active = app.get_subcommands().front()->get_name();
    if (cfg.has("run", "command") &&
        cfg.get_string("run", "command") != active) {
      fail_invalid("[run] command disagrees with the invoked subcommand");
    }
    const RunControls rc =
        resolve_controls(cfg, out_path, static_cast<bool>(*opt_out), tol,
                         static_cast<bool>(*opt_tol), jobs,
                         static_cast<bool>(*opt_jobs));
    if (*sub_profile) return cmd_model_profile(cfg, rc);
    if (*sub_verify) return cmd_verify(cfg, rc);
    if (*sub_constants) return cmd_constants(cfg, rc);
    return cmd_norm(cfg, rc);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.kind << ": " << one_line(e.message) << "\n";
    return e.code;
  } catch (const SmallnessViolation& e) {
    std::cerr << "error: smallness: " << one_line(e.what()) << "\n";
    return 1;
  } catch (const NonConvergence& e) {
    std::cerr << "error: non-convergence: " << one_line(e.what()) << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: invalid-input: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << "\n";
    return 2;
  }
}
