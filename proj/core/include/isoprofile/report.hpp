#pragma once

#include <string>
#include <utility>
#include <vector>

namespace isoprofile {

// One row of a comparison check: an inequality `lhs <= rhs` (or `lhs >= rhs`
// for lower-bound claims) evaluated at a single volume beta.  `margin` is the
// passing surplus: rhs - lhs for upper-bound rows, lhs - rhs for lower-bound
// rows, so `pass == (margin >= -tolerance)` in both directions.
//
// `in_regime` records whether the hypotheses of the claim identified by
// `theorem_id` hold at these inputs (e.g. the smallness condition on the
// curvature norm, or a diameter restriction).  Rows outside the regime are
// still evaluated numerically; the flag lets consumers weigh them separately.
//
// `inputs` is an ordered key/value record of the parameters that produced the
// row.  It is carried into the JSON mirror only; CSV output keeps the fixed
// six-column schema below.
struct ComparisonReport {
  std::string theorem_id;
  double beta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  double tolerance = 0.0;
  bool in_regime = true;
  std::vector<std::pair<std::string, std::string>> inputs;
};

// Shortest decimal string that round-trips to exactly `v` (std::to_chars).
std::string format_double(double v);

// CSV with header `theorem_id,beta,lhs,rhs,margin,pass`; one row per report,
// numbers in shortest round-trip form, pass as true/false, trailing newline.
std::string reports_to_csv(const std::vector<ComparisonReport>& reports);

// JSON object {"reports": [...]} mirroring the CSV columns and additionally
// carrying tolerance, in_regime, and the inputs record (all input values as
// strings).  Deterministic: field order fixed, numbers via format_double.
std::string reports_to_json(const std::vector<ComparisonReport>& reports);

bool all_pass(const std::vector<ComparisonReport>& reports);

// Index of the row with the smallest margin (ties: first); reports must be
// non-empty.
std::size_t worst_margin_index(const std::vector<ComparisonReport>& reports);

}  // namespace isoprofile
