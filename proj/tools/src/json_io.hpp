#pragma once

#include "json.hpp"

#include "pvmk/ifs.hpp"
#include "pvmk/linalg.hpp"
#include "pvmk/metric_space.hpp"
#include "pvmk/ovm.hpp"
#include "pvmk/transport.hpp"

#include <string>

namespace pvmk::cli {

using Json = nlohmann::json;

/// Parses a JSON file. Floating literals are kept as their source text (a
/// string value) so that "0.1" reads as exactly 1/10 later on.
Json read_document(const std::string& path);
Json parse_document(const std::string& text, const std::string& origin);

Rational number_rational(const Json& j, const std::string& where);
double number_double(const Json& j, const std::string& where);
std::size_t number_count(const Json& j, const std::string& where);

/// {"points":[{"id":str,"coord":[num...]?}...]?, "dist":[[num-or-"p/q"...]...]}
RawSpace read_space(const Json& j);

/// {"weights":[num-or-"p/q", ...]}
ProbMeasure read_measure(const Json& j, std::size_t expected_size);

/// {"N":int, "branches":[{"r":"p/q","b":"p/q"}...], "base_point":"p/q", "symbolic_metric":{"theta":"p/q"}?}
IfsSystem read_ifs(const Json& j);

struct RawOvm {
  MeasureKind kind = MeasureKind::Projection;
  Eigen::Index dim = 0;
  std::vector<std::string> ids;  // empty entries when an atom has no id
  std::vector<CMatrix> matrices;
};

/// {"kind":"projection"|"positive", "dim":int, "atoms":[{"id":str,"matrix":{"re":[[...]],"im":[[...]]?}}...]}
RawOvm read_ovm(const Json& j);

/// Orders the atoms to follow the space's point ids (atoms without ids are
/// taken in file order) and validates the measure.
OperatorValuedMeasure bind_ovm(const RawOvm& raw, const SpacePtr& space, double tol = kAxiomTolerance);

/// {"re":[...], "im":[...]?}
CVector read_vector(const Json& j);

}  // namespace pvmk::cli
