#include "isoprofile/report.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <system_error>

namespace isoprofile {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

namespace {

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char esc[8];
          std::snprintf(esc, sizeof(esc), "\\u%04x", c);
          out += esc;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

// JSON number tokens must be finite; non-finite values fall back to strings.
void append_json_number(std::string& out, double v) {
  if (std::isfinite(v)) {
    out += format_double(v);
  } else {
    append_json_string(out, format_double(v));
  }
}

}  // namespace

std::string reports_to_csv(const std::vector<ComparisonReport>& reports) {
  std::string out = "theorem_id,beta,lhs,rhs,margin,pass\n";
  for (const auto& r : reports) {
    out += r.theorem_id;
    out += ',';
    out += format_double(r.beta);
    out += ',';
    out += format_double(r.lhs);
    out += ',';
    out += format_double(r.rhs);
    out += ',';
    out += format_double(r.margin);
    out += ',';
    out += r.pass ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string reports_to_json(const std::vector<ComparisonReport>& reports) {
  std::string out = "{\n  \"reports\": [";
  bool first_row = true;
  for (const auto& r : reports) {
    out += first_row ? "\n" : ",\n";
    first_row = false;
    out += "    {\"theorem_id\": ";
    append_json_string(out, r.theorem_id);
    out += ", \"beta\": ";
    append_json_number(out, r.beta);
    out += ", \"lhs\": ";
    append_json_number(out, r.lhs);
    out += ", \"rhs\": ";
    append_json_number(out, r.rhs);
    out += ", \"margin\": ";
    append_json_number(out, r.margin);
    out += ", \"pass\": ";
    out += r.pass ? "true" : "false";
    out += ", \"tolerance\": ";
    append_json_number(out, r.tolerance);
    out += ", \"in_regime\": ";
    out += r.in_regime ? "true" : "false";
    out += ", \"inputs\": {";
    bool first_kv = true;
    for (const auto& [key, value] : r.inputs) {
      if (!first_kv) out += ", ";
      first_kv = false;
      append_json_string(out, key);
      out += ": ";
      append_json_string(out, value);
    }
    out += "}}";
  }
  out += "\n  ]\n}\n";
  return out;
}

bool all_pass(const std::vector<ComparisonReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

std::size_t worst_margin_index(const std::vector<ComparisonReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("worst_margin_index: empty report list");
  std::size_t worst = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].margin < reports[worst].margin) worst = i;
  }
  return worst;
}

}  // namespace isoprofile
