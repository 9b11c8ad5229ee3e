#include "pvmk/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace pvmk {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  h ^= 0xff;
  h *= kFnvPrime;
}

}  // namespace

std::string AxiomViolation::describe() const {
  std::string name(to_string(code));
  switch (code) {
    case ErrorCode::TriangleViolation:
      return name + "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
    case ErrorCode::MalformedInput:
      return name + "(row " + std::to_string(i) + ")";
    default:
      return name + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
}

namespace {

std::string join_violations(const std::vector<AxiomViolation>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i].describe();
  }
  return out;
}

ErrorCode first_code(const std::vector<AxiomViolation>& v) {
  return v.empty() ? ErrorCode::MalformedInput : v.front().code;
}

}  // namespace

SpaceValidationError::SpaceValidationError(std::vector<AxiomViolation> violations)
    : Error(first_code(violations), join_violations(violations)), violations_(std::move(violations)) {}

FiniteMetricSpace FiniteMetricSpace::from_table(std::vector<std::string> ids, RationalMatrix dist,
                                                std::vector<std::vector<double>> coords) {
  FiniteMetricSpace s;
  s.kind_ = Kind::Table;
  s.ids_ = std::move(ids);
  s.table_ = std::move(dist);
  s.coords_ = std::move(coords);
  s.finalize();
  return s;
}

FiniteMetricSpace FiniteMetricSpace::on_line(std::vector<std::string> ids, RationalVector points) {
  if (ids.size() != points.size()) throw Error(ErrorCode::DimensionMismatch, "ids and points differ in length");
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a] < points[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points[order[i]] == points[order[i - 1]]) {
      throw SpaceValidationError({{ErrorCode::ZeroDistanceDistinctPoints, order[i - 1], order[i], 0}});
    }
  }
  FiniteMetricSpace s;
  s.kind_ = Kind::Line;
  s.ids_ = std::move(ids);
  s.line_ = std::move(points);
  for (const auto& p : s.line_) s.coords_.push_back({to_double(p)});
  s.finalize();
  return s;
}

FiniteMetricSpace FiniteMetricSpace::ultrametric(std::vector<std::string> ids,
                                                 std::vector<std::vector<std::uint32_t>> words, Rational theta,
                                                 RationalVector display_points) {
  if (ids.size() != words.size()) throw Error(ErrorCode::DimensionMismatch, "ids and words differ in length");
  if (theta <= 0 || theta >= 1) throw Error(ErrorCode::InvalidIfs, "theta must lie in (0,1)");
  const std::size_t len = words.empty() ? 0 : words.front().size();
  for (const auto& w : words) {
    if (w.size() != len) throw Error(ErrorCode::DimensionMismatch, "words must share one length");
  }
  std::set<std::vector<std::uint32_t>> seen;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!seen.insert(words[i]).second) {
      throw SpaceValidationError({{ErrorCode::ZeroDistanceDistinctPoints, i, i, 0}});
    }
  }
  FiniteMetricSpace s;
  s.kind_ = Kind::Ultrametric;
  s.ids_ = std::move(ids);
  s.words_ = std::move(words);
  s.theta_powers_.resize(len + 1);
  Rational p = 1;
  for (std::size_t i = 0; i <= len; ++i) {
    s.theta_powers_[i] = p;
    p *= theta;
  }
  for (const auto& x : display_points) s.coords_.push_back({to_double(x)});
  s.finalize();
  return s;
}

void FiniteMetricSpace::finalize() {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, std::to_string(static_cast<int>(kind_)));
  for (const auto& id : ids_) fnv_mix(h, id);
  switch (kind_) {
    case Kind::Table:
      for (const auto& row : table_) {
        for (const auto& d : row) fnv_mix(h, to_string(d));
      }
      break;
    case Kind::Line:
      for (const auto& p : line_) fnv_mix(h, to_string(p));
      break;
    case Kind::Ultrametric:
      fnv_mix(h, theta_powers_.size() > 1 ? to_string(theta_powers_[1]) : "0");
      for (const auto& w : words_) {
        for (auto c : w) fnv_mix(h, std::to_string(c));
        fnv_mix(h, "|");
      }
      break;
  }
  hash_ = h;

  diameter_ = 0;
  const std::size_t n = size();
  if (n < 2) return;
  switch (kind_) {
    case Kind::Table:
      for (const auto& row : table_) {
        for (const auto& d : row) diameter_ = std::max(diameter_, d);
      }
      break;
    case Kind::Line: {
      const auto [lo, hi] = std::minmax_element(line_.begin(), line_.end());
      diameter_ = *hi - *lo;
      break;
    }
    case Kind::Ultrametric: {
      // Largest distance is theta^m for the smallest common prefix length m among pairs.
      std::size_t min_lcp = words_.front().size();
      for (std::size_t i = 1; i < n; ++i) {
        std::size_t l = 0;
        while (l < words_[0].size() && words_[0][l] == words_[i][l]) ++l;
        min_lcp = std::min(min_lcp, l);
      }
      diameter_ = theta_powers_[min_lcp];
      break;
    }
  }
}

Rational FiniteMetricSpace::dist(std::size_t i, std::size_t j) const {
  switch (kind_) {
    case Kind::Table:
      return table_.at(i).at(j);
    case Kind::Line:
      return abs(line_.at(i) - line_.at(j));
    case Kind::Ultrametric: {
      if (i == j) return 0;
      const auto& a = words_.at(i);
      const auto& b = words_.at(j);
      std::size_t l = 0;
      while (l < a.size() && a[l] == b[l]) ++l;
      return theta_powers_[l];
    }
  }
  return 0;
}

double FiniteMetricSpace::dist_double(std::size_t i, std::size_t j) const { return to_double(dist(i, j)); }

RationalMatrix FiniteMetricSpace::distance_table() const {
  RationalMatrix t(size(), RationalVector(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) t[i][j] = dist(i, j);
  }
  return t;
}

FiniteMetricSpace validate_space(const RawSpace& raw) {
  const std::size_t n = raw.dist.size();
  std::vector<AxiomViolation> bad;
  for (std::size_t i = 0; i < n; ++i) {
    if (raw.dist[i].size() != n) bad.push_back({ErrorCode::MalformedInput, i, 0, 0});
  }
  if (!raw.ids.empty() && raw.ids.size() != n) bad.push_back({ErrorCode::MalformedInput, n, 0, 0});
  if (!raw.coords.empty() && raw.coords.size() != n) bad.push_back({ErrorCode::MalformedInput, n, 0, 0});
  if (!bad.empty()) throw SpaceValidationError(std::move(bad));

  const auto& d = raw.dist;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i][i] != 0) bad.push_back({ErrorCode::NonzeroSelfDistance, i, i, 0});
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] < 0) bad.push_back({ErrorCode::NegativeDistance, i, j, 0});
      if (i < j && d[i][j] != d[j][i]) bad.push_back({ErrorCode::AsymmetricDistance, i, j, 0});
      if (i < j && d[i][j] == 0) bad.push_back({ErrorCode::ZeroDistanceDistinctPoints, i, j, 0});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        if (d[i][k] > d[i][j] + d[j][k] || d[k][i] > d[k][j] + d[j][i]) {
          bad.push_back({ErrorCode::TriangleViolation, i, j, k});
        }
      }
    }
  }
  if (!bad.empty()) throw SpaceValidationError(std::move(bad));

  std::vector<std::string> ids = raw.ids;
  if (ids.empty()) {
    for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  }
  return FiniteMetricSpace::from_table(std::move(ids), raw.dist, raw.coords);
}

Rational lip_constant(const RationalVector& f, const FiniteMetricSpace& space) {
  if (f.size() != space.size()) throw Error(ErrorCode::DimensionMismatch, "function length != space size");
  Rational best = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      const Rational q = abs(f[i] - f[j]) / space.dist(i, j);
      if (q > best) best = q;
    }
  }
  return best;
}

double lip_constant(std::span<const double> f, const FiniteMetricSpace& space) {
  if (f.size() != space.size()) throw Error(ErrorCode::DimensionMismatch, "function length != space size");
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) best = std::max(best, std::abs(f[i] - f[j]) / space.dist_double(i, j));
  }
  return best;
}

LipschitzFunction make_lipschitz(RationalVector values, const FiniteMetricSpace& space) {
  LipschitzFunction out;
  out.constant = lip_constant(values, space);
  out.values = std::move(values);
  return out;
}

RationalVector distance_function(const FiniteMetricSpace& space, std::size_t origin) {
  RationalVector f(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) f[i] = space.dist(i, origin);
  return f;
}

namespace {

struct VertexSearch {
  const FiniteMetricSpace& space;
  RationalMatrix d;
  std::size_t n;
  std::uint32_t full;
  std::set<std::pair<std::uint32_t, RationalVector>> visited;
  std::set<RationalVector> found;

  void extend(std::uint32_t mask, RationalVector& phi) {
    if (!visited.emplace(mask, phi).second) return;
    if (mask == full) {
      found.insert(phi);
      return;
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (mask & (1u << y)) continue;
      bool first = true;
      Rational lo, hi;
      for (std::size_t x = 0; x < n; ++x) {
        if (!(mask & (1u << x))) continue;
        const Rational a = phi[x] - d[x][y];
        const Rational b = phi[x] + d[x][y];
        if (first || a > lo) lo = a;
        if (first || b < hi) hi = b;
        first = false;
      }
      // lo <= hi holds whenever the placed values are 1-Lipschitz (McShane).
      const std::uint32_t next = mask | (1u << y);
      phi[y] = lo;
      extend(next, phi);
      if (hi != lo) {
        phi[y] = hi;
        extend(next, phi);
      }
      phi[y] = 0;
    }
  }
};

}  // namespace

Lip1VertexSet lip1_vertices(const FiniteMetricSpace& space, std::size_t anchor, std::size_t cap) {
  const std::size_t n = space.size();
  if (n > cap) {
    throw Error(ErrorCode::SpaceTooLarge, "n=" + std::to_string(n) + " exceeds cap=" + std::to_string(cap));
  }
  if (n > 31) throw Error(ErrorCode::SpaceTooLarge, "vertex enumeration supports at most 31 points");
  if (n == 0) throw Error(ErrorCode::MalformedInput, "empty space");
  if (anchor >= n) throw Error(ErrorCode::MalformedInput, "anchor out of range");

  VertexSearch search{space, space.distance_table(), n, (1u << n) - 1u, {}, {}};
  RationalVector phi(n, Rational(0));
  search.extend(1u << anchor, phi);

  Lip1VertexSet out;
  out.anchor = anchor;
  out.space_hash = space.hash();
  out.vertices.assign(search.found.begin(), search.found.end());
  for (const auto& v : out.vertices) out.vertices_double.push_back(to_double(v));
  return out;
}

RationalVector mcshane_regularize(const RationalVector& v, const FiniteMetricSpace& space, std::size_t anchor) {
  const std::size_t n = space.size();
  if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "value vector length != space size");
  RationalVector phi(n);
  for (std::size_t x = 0; x < n; ++x) {
    Rational best = v[0] + space.dist(x, 0);
    for (std::size_t y = 1; y < n; ++y) {
      const Rational c = v[y] + space.dist(x, y);
      if (c < best) best = c;
    }
    phi[x] = best;
  }
  const Rational shift = phi.at(anchor);
  for (auto& p : phi) p -= shift;
  return phi;
}

}  // namespace pvmk
