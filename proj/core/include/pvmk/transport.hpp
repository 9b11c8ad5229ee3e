#pragma once

#include "pvmk/metric_space.hpp"
#include "pvmk/rational.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pvmk {

/// Probability vector on the points of a space: non-negative, summing exactly to 1.
class ProbMeasure {
 public:
  /// Throws InvalidMeasure when a weight is negative or the total is not 1.
  explicit ProbMeasure(RationalVector weights);

  static ProbMeasure dirac(std::size_t n, std::size_t at);
  static ProbMeasure uniform(std::size_t n);

  const RationalVector& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const Rational& operator[](std::size_t i) const { return weights_[i]; }

  friend bool operator==(const ProbMeasure&, const ProbMeasure&) = default;

 private:
  RationalVector weights_;
};

/// Real signed measure on atoms.
struct SignedMeasure {
  std::vector<double> weights;

  double total_variation() const;
  double total_mass() const;
};

struct TransportResult {
  Rational value;
  RationalMatrix plan;            // plan[x][y] = mass moved from x to y
  LipschitzFunction potential;    // anchored at point 0; sum potential*(mu - nu) == value
  std::size_t pivots = 0;
};

/// Exact Kantorovich distance H(mu, nu) as a transportation LP.
///
/// Primal network simplex on the n x n transportation polytope in exact
/// rational arithmetic: north-west-corner start, Bland's rule for both the
/// entering cell (first negative reduced cost in row-major order) and the
/// leaving cell (lowest index among ratio-test ties); degenerate bases are
/// kept. The returned potential is the c-transform x -> min_y d(x,y) - v_y of
/// the optimal column potentials, anchored at point 0; its Lipschitz bound and
/// zero duality gap are verified before returning.
TransportResult kantorovich(const FiniteMetricSpace& space, const ProbMeasure& mu, const ProbMeasure& nu);

/// max over vertices phi of sum phi * (mu - nu). Throws StaleVertexSet if the
/// vertex set came from another space.
Rational kantorovich_dual_oracle(const FiniteMetricSpace& space, const ProbMeasure& mu, const ProbMeasure& nu,
                                 const Lip1VertexSet& vertices);

/// Floating counterpart used on quadratic-form measures: the largest
/// |sum phi * difference| over vertices, with the attaining vertex index.
std::pair<double, std::size_t> dual_value(const Lip1VertexSet& vertices, std::span<const double> difference);

/// (|sum f (mu - nu)|, Lip(f) * H(mu, nu)); the first never exceeds the second.
std::pair<double, double> weak_gap(const FiniteMetricSpace& space, std::span<const double> f, const ProbMeasure& mu,
                                   const ProbMeasure& nu);

}  // namespace pvmk
