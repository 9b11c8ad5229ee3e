#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pvmk::cli {

namespace {

void write(const Ordered& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Ordered::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Ordered(key).dump() + ": ";
        write(value, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Ordered::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool scalar_row = std::none_of(j.begin(), j.end(), [](const Ordered& e) { return e.is_structured(); });
      if (scalar_row) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(j[i], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Ordered::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_report(const Ordered& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

Ordered rational_json(const Rational& r) { return to_string(r); }

Ordered rational_array(const RationalVector& v) {
  Ordered a = Ordered::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Ordered rational_matrix(const std::vector<RationalVector>& m) {
  Ordered a = Ordered::array();
  for (const auto& row : m) a.push_back(rational_array(row));
  return a;
}

Ordered real_array(const std::vector<double>& v) {
  Ordered a = Ordered::array();
  for (double x : v) a.push_back(x);
  return a;
}

Ordered complex_vector(const CVector& v) {
  Ordered re = Ordered::array(), im = Ordered::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Ordered{{"re", re}, {"im", im}};
}

Ordered complex_matrix(const CMatrix& m) {
  Ordered re = Ordered::array(), im = Ordered::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Ordered rr = Ordered::array(), ir = Ordered::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return Ordered{{"re", re}, {"im", im}};
}

Ordered verdicts_json(const std::vector<Verdict>& verdicts) {
  Ordered a = Ordered::array();
  for (const auto& v : verdicts) {
    Ordered o;
    o["name"] = v.name;
    o["passed"] = v.passed;
    o["tolerance"] = v.tolerance;
    if (!v.detail.empty()) o["detail"] = v.detail;
    a.push_back(o);
  }
  return a;
}

bool all_passed(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

}  // namespace pvmk::cli
