#include "json_io.hpp"

#include "pvmk/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

namespace pvmk::cli {

namespace {

[[noreturn]] void malformed(const std::string& message) { throw Error(ErrorCode::MalformedInput, message); }

/// SAX consumer building a Json tree with float literals stored as strings.
class ExactNumberBuilder {
 public:
  explicit ExactNumberBuilder(Json& root) : root_(root) {}

  bool null() { return put(nullptr); }
  bool boolean(bool v) { return put(v); }
  bool number_integer(Json::number_integer_t v) { return put(v); }
  bool number_unsigned(Json::number_unsigned_t v) { return put(v); }
  bool number_float(Json::number_float_t, const Json::string_t& text) { return put(text); }
  bool string(Json::string_t& v) { return put(v); }
  bool binary(Json::binary_t&) { return false; }
  bool start_object(std::size_t) { return open(Json::object()); }
  bool key(Json::string_t& k) {
    key_ = k;
    return true;
  }
  bool end_object() { return close(); }
  bool start_array(std::size_t) { return open(Json::array()); }
  bool end_array() { return close(); }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
    error_ = ex.what();
    return false;
  }

  const std::string& error() const { return error_; }

 private:
  Json* slot() {
    if (stack_.empty()) return &root_;
    Json& top = *stack_.back();
    if (top.is_array()) {
      top.push_back(nullptr);
      return &top.back();
    }
    return &top[key_];
  }
  bool put(Json v) {
    *slot() = std::move(v);
    return true;
  }
  bool open(Json v) {
    Json* s = slot();
    *s = std::move(v);
    stack_.push_back(s);
    return true;
  }
  bool close() {
    stack_.pop_back();
    return true;
  }

  Json& root_;
  std::vector<Json*> stack_;
  std::string key_;
  std::string error_;
};

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) malformed(where + ": expected an object");
  const auto it = j.find(name);
  if (it == j.end()) malformed(where + ": missing field '" + name + "'");
  return *it;
}

const Json& array_field(const Json& j, const char* name, const std::string& where) {
  const Json& a = field(j, name, where);
  if (!a.is_array()) malformed(where + "." + name + ": expected an array");
  return a;
}

std::vector<std::vector<double>> read_real_matrix(const Json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::DimensionMismatch, where + ": expected " + std::to_string(dim) + " rows");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
      throw Error(ErrorCode::DimensionMismatch, where + "[" + std::to_string(r) + "]: expected " +
                                                    std::to_string(dim) + " entries");
    }
    std::vector<double> out;
    for (std::size_t c = 0; c < row.size(); ++c) {
      out.push_back(number_double(row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    }
    rows.push_back(std::move(out));
  }
  return rows;
}

}  // namespace

Json parse_document(const std::string& text, const std::string& origin) {
  Json root;
  ExactNumberBuilder builder(root);
  if (!Json::sax_parse(text, &builder)) malformed(origin + ": invalid JSON: " + builder.error());
  return root;
}

Json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path);
}

Rational number_rational(const Json& j, const std::string& where) {
  try {
    if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    malformed(where + ": " + e.what());
  }
  malformed(where + ": expected a number or a \"p/q\" string");
}

double number_double(const Json& j, const std::string& where) { return to_double(number_rational(j, where)); }

std::size_t number_count(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::size_t>(j.get<std::int64_t>());
  malformed(where + ": expected a non-negative integer");
}

RawSpace read_space(const Json& j) {
  RawSpace raw;
  const Json& dist = array_field(j, "dist", "space");
  for (std::size_t r = 0; r < dist.size(); ++r) {
    const std::string where = "space.dist[" + std::to_string(r) + "]";
    if (!dist[r].is_array()) malformed(where + ": expected an array");
    RationalVector row;
    for (std::size_t c = 0; c < dist[r].size(); ++c) {
      row.push_back(number_rational(dist[r][c], where + "[" + std::to_string(c) + "]"));
    }
    raw.dist.push_back(std::move(row));
  }
  if (j.contains("points")) {
    const Json& points = array_field(j, "points", "space");
    if (points.size() != dist.size()) {
      throw Error(ErrorCode::DimensionMismatch, "space: " + std::to_string(points.size()) + " points but " +
                                                    std::to_string(dist.size()) + " distance rows");
    }
    bool any_coord = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::string where = "space.points[" + std::to_string(i) + "]";
      const Json& id = field(points[i], "id", where);
      if (!id.is_string()) malformed(where + ".id: expected a string");
      raw.ids.push_back(id.get<std::string>());
      std::vector<double> coord;
      if (points[i].contains("coord")) {
        any_coord = true;
        for (std::size_t c = 0; c < points[i]["coord"].size(); ++c) {
          coord.push_back(number_double(points[i]["coord"][c], where + ".coord[" + std::to_string(c) + "]"));
        }
      }
      raw.coords.push_back(std::move(coord));
    }
    if (!any_coord) raw.coords.clear();
  }
  return raw;
}

ProbMeasure read_measure(const Json& j, std::size_t expected_size) {
  const Json& w = array_field(j, "weights", "measure");
  if (w.size() != expected_size) {
    throw Error(ErrorCode::DimensionMismatch, "measure: " + std::to_string(w.size()) + " weights for " +
                                                  std::to_string(expected_size) + " points");
  }
  RationalVector weights;
  for (std::size_t i = 0; i < w.size(); ++i) weights.push_back(number_rational(w[i], "measure.weights[" + std::to_string(i) + "]"));
  return ProbMeasure(std::move(weights));
}

IfsSystem read_ifs(const Json& j) {
  const std::size_t n = number_count(field(j, "N", "ifs"), "ifs.N");
  const Json& branches = array_field(j, "branches", "ifs");
  if (branches.size() != n) {
    throw Error(ErrorCode::InvalidIfs, "ifs: N = " + std::to_string(n) + " but " + std::to_string(branches.size()) +
                                           " branches listed");
  }
  std::vector<AffineBranch> maps;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "ifs.branches[" + std::to_string(i) + "]";
    maps.push_back({number_rational(field(branches[i], "r", where), where + ".r"),
                    number_rational(field(branches[i], "b", where), where + ".b")});
  }
  const Rational base = j.contains("base_point") ? number_rational(j["base_point"], "ifs.base_point") : Rational(0);
  std::optional<Rational> theta;
  if (j.contains("symbolic_metric") && !j["symbolic_metric"].is_null()) {
    theta = number_rational(field(j["symbolic_metric"], "theta", "ifs.symbolic_metric"), "ifs.symbolic_metric.theta");
  }
  return IfsSystem(std::move(maps), base, theta);
}

RawOvm read_ovm(const Json& j) {
  RawOvm raw;
  const Json& kind = field(j, "kind", "ovm");
  if (!kind.is_string()) malformed("ovm.kind: expected a string");
  raw.kind = parse_measure_kind(kind.get<std::string>());
  raw.dim = static_cast<Eigen::Index>(number_count(field(j, "dim", "ovm"), "ovm.dim"));
  if (raw.dim == 0) malformed("ovm.dim: must be positive");
  const Json& atoms = array_field(j, "atoms", "ovm");
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const std::string where = "ovm.atoms[" + std::to_string(a) + "]";
    if (!atoms[a].is_object()) malformed(where + ": expected an object");
    std::string id;
    if (atoms[a].contains("id")) {
      if (!atoms[a]["id"].is_string()) malformed(where + ".id: expected a string");
      id = atoms[a]["id"].get<std::string>();
    }
    const Json& matrix = field(atoms[a], "matrix", where);
    const auto re = read_real_matrix(field(matrix, "re", where + ".matrix"), raw.dim, where + ".matrix.re");
    std::vector<std::vector<double>> im;
    if (matrix.contains("im")) im = read_real_matrix(matrix["im"], raw.dim, where + ".matrix.im");
    CMatrix m(raw.dim, raw.dim);
    for (Eigen::Index r = 0; r < raw.dim; ++r) {
      for (Eigen::Index c = 0; c < raw.dim; ++c) {
        const auto ur = static_cast<std::size_t>(r);
        const auto uc = static_cast<std::size_t>(c);
        m(r, c) = Complex(re[ur][uc], im.empty() ? 0.0 : im[ur][uc]);
      }
    }
    raw.ids.push_back(std::move(id));
    raw.matrices.push_back(std::move(m));
  }
  return raw;
}

OperatorValuedMeasure bind_ovm(const RawOvm& raw, const SpacePtr& space, double tol) {
  if (raw.matrices.size() != space->size()) {
    throw Error(ErrorCode::DimensionMismatch, "ovm: " + std::to_string(raw.matrices.size()) + " atoms for " +
                                                  std::to_string(space->size()) + " points");
  }
  const bool named = std::any_of(raw.ids.begin(), raw.ids.end(), [](const auto& s) { return !s.empty(); });
  std::vector<CMatrix> ordered(space->size());
  if (!named) {
    ordered = raw.matrices;
  } else {
    std::vector<bool> seen(space->size(), false);
    for (std::size_t a = 0; a < raw.ids.size(); ++a) {
      const auto it = std::find(space->ids().begin(), space->ids().end(), raw.ids[a]);
      if (it == space->ids().end()) malformed("ovm.atoms[" + std::to_string(a) + "]: unknown atom id '" + raw.ids[a] + "'");
      const auto idx = static_cast<std::size_t>(it - space->ids().begin());
      if (seen[idx]) malformed("ovm: atom id '" + raw.ids[a] + "' listed twice");
      seen[idx] = true;
      ordered[idx] = raw.matrices[a];
    }
  }
  return validate_ovm(space, raw.kind, std::move(ordered), tol);
}

CVector read_vector(const Json& j) {
  const Json& re = array_field(j, "re", "vector");
  CVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_double(re[i], "vector.re[" + std::to_string(i) + "]");
  if (j.contains("im")) {
    const Json& im = array_field(j, "im", "vector");
    if (im.size() != re.size()) throw Error(ErrorCode::DimensionMismatch, "vector: re and im lengths differ");
    for (std::size_t i = 0; i < im.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) += Complex(0, number_double(im[i], "vector.im[" + std::to_string(i) + "]"));
    }
  }
  return v;
}

}  // namespace pvmk::cli
