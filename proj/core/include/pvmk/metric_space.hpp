#pragma once

#include "pvmk/error.hpp"
#include "pvmk/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pvmk {

using RationalMatrix = std::vector<RationalVector>;

/// Unvalidated distance table as read from disk.
struct RawSpace {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> coords;  // empty or one entry per point
  RationalMatrix dist;
};

/// One failed metric axiom. Indices are 0-based; for TriangleViolation the
/// offending inequality is dist(i,k) > dist(i,j) + dist(j,k).
struct AxiomViolation {
  ErrorCode code;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;

  std::string describe() const;
};

class SpaceValidationError : public Error {
 public:
  explicit SpaceValidationError(std::vector<AxiomViolation> violations);

  const std::vector<AxiomViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<AxiomViolation> violations_;
};

/// Finite metric space with exact rational distances.
///
/// Distances are stored either as an explicit table or implicitly, for the
/// two families the cylinder tower produces: points on the real line with
/// d = |x - y|, and equal-length words with d(a,b) = theta^lcp(a,b). The
/// implicit forms are metrics by construction, so towers with thousands of
/// cells never materialize an n x n table.
class FiniteMetricSpace {
 public:
  static FiniteMetricSpace from_table(std::vector<std::string> ids, RationalMatrix dist,
                                      std::vector<std::vector<double>> coords = {});
  /// Distinct rational points on the line. Throws ZeroDistanceDistinctPoints on repeats.
  static FiniteMetricSpace on_line(std::vector<std::string> ids, RationalVector points);
  /// Distinct words of a common length over a finite alphabet, 0 < theta < 1.
  static FiniteMetricSpace ultrametric(std::vector<std::string> ids,
                                       std::vector<std::vector<std::uint32_t>> words, Rational theta,
                                       RationalVector display_points = {});

  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  /// Display coordinates (possibly empty).
  const std::vector<std::vector<double>>& coords() const noexcept { return coords_; }

  Rational dist(std::size_t i, std::size_t j) const;
  double dist_double(std::size_t i, std::size_t j) const;
  const Rational& diameter() const noexcept { return diameter_; }

  /// Identity of the space (ids plus distance data), FNV-1a over a canonical encoding.
  std::uint64_t hash() const noexcept { return hash_; }

  RationalMatrix distance_table() const;

 private:
  enum class Kind { Table, Line, Ultrametric };

  FiniteMetricSpace() = default;
  void finalize();

  Kind kind_ = Kind::Table;
  std::vector<std::string> ids_;
  std::vector<std::vector<double>> coords_;
  RationalMatrix table_;
  RationalVector line_;
  std::vector<std::vector<std::uint32_t>> words_;
  RationalVector theta_powers_;
  Rational diameter_ = 0;
  std::uint64_t hash_ = 0;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// Checks every axiom and reports all violations at once (throws SpaceValidationError).
FiniteMetricSpace validate_space(const RawSpace& raw);

/// Real function on points with a certified Lipschitz constant.
struct LipschitzFunction {
  RationalVector values;
  Rational constant = 0;

  std::vector<double> values_double() const { return to_double(values); }
};

/// max over pairs of |f(x) - f(y)| / d(x,y); 0 for constants and single points.
Rational lip_constant(const RationalVector& f, const FiniteMetricSpace& space);
double lip_constant(std::span<const double> f, const FiniteMetricSpace& space);

/// Certifies the constant of f by computing it.
LipschitzFunction make_lipschitz(RationalVector values, const FiniteMetricSpace& space);

/// Distance to a point: x -> d(x, origin).
RationalVector distance_function(const FiniteMetricSpace& space, std::size_t origin);

inline constexpr std::size_t kDefaultVertexCap = 7;

/// Extreme points of {phi : phi(anchor) = 0, |phi(x) - phi(y)| <= d(x,y)}.
struct Lip1VertexSet {
  std::size_t anchor = 0;
  std::vector<RationalVector> vertices;  // lexicographically sorted, no duplicates
  std::vector<std::vector<double>> vertices_double;
  std::uint64_t space_hash = 0;

  std::size_t size() const noexcept { return vertices.size(); }
};

/// Exact vertex enumeration.
///
/// A vertex has n-1 independent tight constraints phi(y) - phi(x) = +-d(x,y),
/// whose edges therefore contain a spanning tree; visiting that tree from the
/// anchor places one point at a time, each tight against an already placed
/// point. The only tight values compatible with the placed points are the
/// ends of the feasible interval [max(phi(x) - d), min(phi(x) + d)], so the
/// search branches on (new point, lower or upper end) and deduplicates partial
/// states. Throws SpaceTooLarge when size() > cap.
Lip1VertexSet lip1_vertices(const FiniteMetricSpace& space, std::size_t anchor = 0,
                            std::size_t cap = kDefaultVertexCap);

/// McShane regularization: phi(x) = min_y (v(y) + d(x,y)), then shifted so phi(anchor) = 0.
RationalVector mcshane_regularize(const RationalVector& v, const FiniteMetricSpace& space,
                                  std::size_t anchor = 0);

}  // namespace pvmk
