#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the solver paths it is used to check.

#include "pvmk/metric_space.hpp"
#include "pvmk/rational.hpp"
#include "pvmk/rng.hpp"
#include "pvmk/transport.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pvmk::oracle {

/// Solves A x = b exactly; empty when A is singular.
inline std::optional<RationalVector> solve_exact(RationalMatrix a, RationalVector b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

/// Vertices of the anchored Lip_1 polytope by exhaustive search over
/// (n-1)-subsets of the one-sided constraints phi(x) - phi(y) <= d(x,y),
/// keeping the unique solutions that satisfy every constraint.
inline std::set<RationalVector> brute_force_vertices(const FiniteMetricSpace& space, std::size_t anchor = 0) {
  const std::size_t n = space.size();
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != anchor) free.push_back(i);
  }
  struct Constraint {
    std::size_t x, y;
  };
  std::vector<Constraint> cons;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x != y) cons.push_back({x, y});
    }
  }
  std::set<RationalVector> out;
  const std::size_t m = free.size();
  if (m == 0) {
    out.insert(RationalVector(n, Rational(0)));
    return out;
  }
  std::vector<bool> pick(cons.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(m), true);
  do {
    RationalMatrix a;
    RationalVector b;
    for (std::size_t c = 0; c < cons.size(); ++c) {
      if (!pick[c]) continue;
      RationalVector row(m, Rational(0));
      for (std::size_t v = 0; v < m; ++v) {
        if (free[v] == cons[c].x) row[v] += 1;
        if (free[v] == cons[c].y) row[v] -= 1;
      }
      a.push_back(row);
      b.push_back(space.dist(cons[c].x, cons[c].y));
    }
    const auto sol = solve_exact(a, b);
    if (!sol) continue;
    RationalVector phi(n, Rational(0));
    for (std::size_t v = 0; v < m; ++v) phi[free[v]] = (*sol)[v];
    bool feasible = true;
    for (const auto& c : cons) {
      if (phi[c.x] - phi[c.y] > space.dist(c.x, c.y)) {
        feasible = false;
        break;
      }
    }
    if (feasible) out.insert(phi);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

/// W_1 on the real line: integral of |F_mu - F_nu| between sorted atoms.
inline Rational line_w1(const RationalVector& points, const RationalVector& mu, const RationalVector& nu) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a] < points[b]; });
  Rational cdf = 0;
  Rational total = 0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    cdf += mu[order[k]] - nu[order[k]];
    total += abs(cdf) * (points[order[k + 1]] - points[order[k]]);
  }
  return total;
}

/// Shortest-path closure of random integer edge weights in [1, 9]: a metric
/// with exact rational distances.
inline FiniteMetricSpace random_metric_space(std::size_t n, SplitMix64& rng) {
  RationalMatrix d(n, RationalVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational w(static_cast<long>(1 + rng.below(9)), static_cast<long>(1 + rng.below(3)));
      d[i][j] = d[j][i] = w;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  RawSpace raw;
  raw.dist = d;
  return validate_space(raw);
}

inline FiniteMetricSpace table_space(const std::vector<std::vector<std::string>>& rows) {
  RawSpace raw;
  for (const auto& row : rows) {
    RationalVector r;
    for (const auto& cell : row) r.push_back(parse_rational(cell));
    raw.dist.push_back(r);
  }
  return validate_space(raw);
}

inline RationalVector rationals(std::initializer_list<const char*> items) {
  RationalVector out;
  for (const char* s : items) out.push_back(parse_rational(s));
  return out;
}

}  // namespace pvmk::oracle
