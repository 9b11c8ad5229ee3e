#pragma once

#include "json.hpp"

#include "pvmk/linalg.hpp"
#include "pvmk/rational.hpp"

#include <string>
#include <vector>

namespace pvmk::cli {

using Ordered = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Indented JSON with keys in insertion order and every float printed with
/// 17 significant digits, so equal inputs give byte-identical reports.
std::string dump_report(const Ordered& j);

Ordered rational_json(const Rational& r);
Ordered rational_array(const RationalVector& v);
Ordered rational_matrix(const std::vector<RationalVector>& m);
Ordered real_array(const std::vector<double>& v);
Ordered complex_vector(const CVector& v);
Ordered complex_matrix(const CMatrix& m);

/// Pass/fail line of a report: name, outcome, and the tolerance that decided it (0 = exact).
struct Verdict {
  std::string name;
  bool passed = false;
  double tolerance = 0.0;
  std::string detail;
};

Ordered verdicts_json(const std::vector<Verdict>& verdicts);
bool all_passed(const std::vector<Verdict>& verdicts);

}  // namespace pvmk::cli
