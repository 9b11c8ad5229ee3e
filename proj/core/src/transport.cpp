#include "pvmk/transport.hpp"

#include "pvmk/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace pvmk {

ProbMeasure::ProbMeasure(RationalVector weights) : weights_(std::move(weights)) {
  Rational total = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] < 0) throw Error(ErrorCode::InvalidMeasure, "negative weight at atom " + std::to_string(i));
    total += weights_[i];
  }
  if (total != 1) throw Error(ErrorCode::InvalidMeasure, "weights sum to " + to_string(total) + ", not 1");
}

ProbMeasure ProbMeasure::dirac(std::size_t n, std::size_t at) {
  RationalVector w(n, Rational(0));
  w.at(at) = 1;
  return ProbMeasure(std::move(w));
}

ProbMeasure ProbMeasure::uniform(std::size_t n) {
  return ProbMeasure(RationalVector(n, Rational(1, static_cast<long>(n))));
}

double SignedMeasure::total_variation() const {
  double s = 0.0;
  for (double w : weights) s += std::abs(w);
  return s;
}

double SignedMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

namespace {

struct Cell {
  std::size_t row;
  std::size_t col;
};

/// Transportation simplex state. Tree nodes: rows 0..n-1, columns n..2n-1.
class TransportSimplex {
 public:
  TransportSimplex(const FiniteMetricSpace& space, const RationalVector& supply, const RationalVector& demand)
      : n_(supply.size()), cost_(space.distance_table()), flow_(n_, RationalVector(n_, Rational(0))),
        basic_(n_, std::vector<bool>(n_, false)) {
    RationalVector s = supply;
    RationalVector t = demand;
    std::size_t i = 0;
    std::size_t j = 0;
    while (j < n_) {
      const Rational x = std::min(s[i], t[j]);
      flow_[i][j] = x;
      basic_[i][j] = true;
      s[i] -= x;
      t[j] -= x;
      if (s[i] == 0 && i + 1 < n_) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void solve() {
    while (true) {
      compute_potentials();
      std::optional<Cell> entering;
      for (std::size_t i = 0; i < n_ && !entering; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (!basic_[i][j] && cost_[i][j] - u_[i] - v_[j] < 0) {
            entering = Cell{i, j};
            break;
          }
        }
      }
      if (!entering) return;
      pivot(*entering);
      ++pivots_;
    }
  }

  Rational value() const {
    Rational total = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (flow_[i][j] != 0) total += flow_[i][j] * cost_[i][j];
      }
    }
    return total;
  }

  const RationalMatrix& flow() const { return flow_; }
  const RationalVector& column_potentials() const { return v_; }
  const RationalMatrix& cost() const { return cost_; }
  std::size_t pivots() const { return pivots_; }

 private:
  std::vector<std::vector<std::size_t>> tree_adjacency() const {
    std::vector<std::vector<std::size_t>> adj(2 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic_[i][j]) {
          adj[i].push_back(n_ + j);
          adj[n_ + j].push_back(i);
        }
      }
    }
    return adj;
  }

  void compute_potentials() {
    u_.assign(n_, Rational(0));
    v_.assign(n_, Rational(0));
    const auto adj = tree_adjacency();
    std::vector<bool> seen(2 * n_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t next : adj[node]) {
        if (seen[next]) continue;
        seen[next] = true;
        if (node < n_) {
          v_[next - n_] = cost_[node][next - n_] - u_[node];
        } else {
          u_[next] = cost_[next][node - n_] - v_[node - n_];
        }
        stack.push_back(next);
      }
    }
  }

  // Path in the basis tree from row `from` to column node `to`, as a node list.
  std::vector<std::size_t> tree_path(std::size_t from, std::size_t to) const {
    const auto adj = tree_adjacency();
    std::vector<std::size_t> parent(2 * n_, SIZE_MAX);
    std::vector<std::size_t> stack{from};
    parent[from] = from;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      if (node == to) break;
      for (std::size_t next : adj[node]) {
        if (parent[next] != SIZE_MAX) continue;
        parent[next] = node;
        stack.push_back(next);
      }
    }
    std::vector<std::size_t> path;
    for (std::size_t node = to; node != from; node = parent[node]) path.push_back(node);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
  }

  void pivot(Cell in) {
    // Cycle: (in.row -> in.col) then the tree path back from in.col to in.row.
    // Cells along the tree path alternate -, +, -, ... starting next to the entering cell.
    const auto path = tree_path(in.col + n_, in.row);
    std::vector<Cell> minus;
    std::vector<Cell> plus;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const std::size_t a = path[k];
      const std::size_t b = path[k + 1];
      const Cell c = a < n_ ? Cell{a, b - n_} : Cell{b, a - n_};
      (k % 2 == 0 ? minus : plus).push_back(c);
    }
    Rational theta = flow_[minus.front().row][minus.front().col];
    for (const auto& c : minus) theta = std::min(theta, flow_[c.row][c.col]);
    std::optional<Cell> leaving;
    for (const auto& c : minus) {
      if (flow_[c.row][c.col] != theta) continue;
      if (!leaving || c.row * n_ + c.col < leaving->row * n_ + leaving->col) leaving = c;
    }
    for (const auto& c : minus) flow_[c.row][c.col] -= theta;
    for (const auto& c : plus) flow_[c.row][c.col] += theta;
    flow_[in.row][in.col] += theta;
    basic_[in.row][in.col] = true;
    basic_[leaving->row][leaving->col] = false;
  }

  std::size_t n_;
  RationalMatrix cost_;
  RationalMatrix flow_;
  std::vector<std::vector<bool>> basic_;
  RationalVector u_;
  RationalVector v_;
  std::size_t pivots_ = 0;
};

void check_dimensions(const FiniteMetricSpace& space, const ProbMeasure& mu, const ProbMeasure& nu) {
  if (mu.size() != space.size() || nu.size() != space.size()) {
    throw Error(ErrorCode::DimensionMismatch, "measure length differs from space size " + std::to_string(space.size()));
  }
}

}  // namespace

TransportResult kantorovich(const FiniteMetricSpace& space, const ProbMeasure& mu, const ProbMeasure& nu) {
  check_dimensions(space, mu, nu);
  const std::size_t n = space.size();
  TransportSimplex simplex(space, mu.weights(), nu.weights());
  simplex.solve();

  TransportResult result;
  result.value = simplex.value();
  result.plan = simplex.flow();
  result.pivots = simplex.pivots();

  const auto& v = simplex.column_potentials();
  const auto& cost = simplex.cost();
  RationalVector phi(n);
  for (std::size_t x = 0; x < n; ++x) {
    Rational best = cost[x][0] - v[0];
    for (std::size_t y = 1; y < n; ++y) best = std::min(best, Rational(cost[x][y] - v[y]));
    phi[x] = best;
  }
  const Rational shift = phi[0];
  for (auto& p : phi) p -= shift;
  result.potential = make_lipschitz(std::move(phi), space);

  Rational dual = 0;
  for (std::size_t x = 0; x < n; ++x) dual += result.potential.values[x] * (mu[x] - nu[x]);
  if (result.potential.constant > 1 || dual != result.value) {
    throw Error(ErrorCode::KindViolation, "transport certificate failed: gap " + to_string(result.value - dual));
  }
  return result;
}

Rational kantorovich_dual_oracle(const FiniteMetricSpace& space, const ProbMeasure& mu, const ProbMeasure& nu,
                                 const Lip1VertexSet& vertices) {
  check_dimensions(space, mu, nu);
  if (vertices.space_hash != space.hash()) throw Error(ErrorCode::StaleVertexSet, "vertex set built for another space");
  Rational best = 0;
  for (const auto& phi : vertices.vertices) {
    Rational s = 0;
    for (std::size_t x = 0; x < phi.size(); ++x) s += phi[x] * (mu[x] - nu[x]);
    best = std::max(best, s);
  }
  return best;
}

std::pair<double, std::size_t> dual_value(const Lip1VertexSet& vertices, std::span<const double> difference) {
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < vertices.vertices_double.size(); ++k) {
    const auto& phi = vertices.vertices_double[k];
    if (phi.size() != difference.size()) throw Error(ErrorCode::DimensionMismatch, "difference length != vertex length");
    double s = 0.0;
    for (std::size_t x = 0; x < phi.size(); ++x) s += phi[x] * difference[x];
    if (std::abs(s) > best) {
      best = std::abs(s);
      arg = k;
    }
  }
  return {best, arg};
}

std::pair<double, double> weak_gap(const FiniteMetricSpace& space, std::span<const double> f, const ProbMeasure& mu,
                                   const ProbMeasure& nu) {
  check_dimensions(space, mu, nu);
  if (f.size() != space.size()) throw Error(ErrorCode::DimensionMismatch, "function length != space size");
  double lhs = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) lhs += f[x] * to_double(mu[x] - nu[x]);
  const double h = to_double(kantorovich(space, mu, nu).value);
  return {std::abs(lhs), lip_constant(f, space) * h};
}

}  // namespace pvmk
