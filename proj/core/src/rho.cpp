#include "pvmk/rho.hpp"

#include "pvmk/error.hpp"
#include "pvmk/parallel.hpp"
#include "pvmk/transport.hpp"

#include <algorithm>
#include <cmath>

namespace pvmk {

std::string_view to_string(RhoMethod method) noexcept {
  switch (method) {
    case RhoMethod::Vertex: return "vertex";
    case RhoMethod::Sphere: return "sphere";
    case RhoMethod::Grid: return "grid";
  }
  return "vertex";
}

RhoMethod parse_rho_method(std::string_view text) {
  if (text == "vertex") return RhoMethod::Vertex;
  if (text == "sphere") return RhoMethod::Sphere;
  if (text == "grid") return RhoMethod::Grid;
  throw Error(ErrorCode::MalformedInput, "method must be vertex|sphere|grid, got '" + std::string(text) + "'");
}

namespace {

void check_pair(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f) {
  if (e.space().hash() != f.space().hash() || e.dim() != f.dim()) {
    throw Error(ErrorCode::MismatchedMeasures, "measures live on different spaces or dimensions");
  }
}

void check_vertices(const OperatorValuedMeasure& e, const Lip1VertexSet& vertices) {
  if (vertices.space_hash != e.space().hash()) throw Error(ErrorCode::StaleVertexSet, "vertex set built for another space");
}

std::vector<CMatrix> differences(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f) {
  std::vector<CMatrix> d;
  d.reserve(e.atom_count());
  for (std::size_t a = 0; a < e.atom_count(); ++a) d.push_back(e[a] - f[a]);
  return d;
}

CMatrix combine(const std::vector<CMatrix>& diff, std::span<const double> phi, Eigen::Index dim) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < diff.size(); ++a) {
    if (phi[a] != 0.0) m += phi[a] * diff[a];
  }
  return m;
}

bool all_diagonal(const std::vector<CMatrix>& diff) {
  for (const auto& m : diff) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (i != j && m(i, j) != Complex(0.0)) return false;
      }
    }
  }
  return true;
}

CVector basis_vector(Eigen::Index dim, Eigen::Index j) {
  CVector v = CVector::Zero(dim);
  if (dim > 0) v(j) = 1.0;
  return v;
}

double quadratic_dual(const std::vector<CMatrix>& diff, const Lip1VertexSet& vertices, const CVector& h,
                      std::size_t* arg) {
  std::vector<double> w(diff.size());
  for (std::size_t a = 0; a < diff.size(); ++a) w[a] = h.dot(diff[a] * h).real();
  const auto [value, index] = dual_value(vertices, w);
  if (arg) *arg = index;
  return value;
}

}  // namespace

double rho_objective(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f, std::span<const double> phi) {
  check_pair(e, f);
  if (phi.size() != e.atom_count()) throw Error(ErrorCode::DimensionMismatch, "phi length != atom count");
  return spectral_norm(combine(differences(e, f), phi, e.dim()));
}

RhoResult rho_exact(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f, const Lip1VertexSet& vertices) {
  check_pair(e, f);
  check_vertices(e, vertices);
  const auto diff = differences(e, f);
  const Eigen::Index dim = e.dim();
  RhoResult result;
  result.method = RhoMethod::Vertex;

  if (all_diagonal(diff)) {
    // Objective is max_j |sum_a phi(a) D_a(j,j)|, evaluated exactly.
    std::vector<RationalVector> columns(static_cast<std::size_t>(dim), RationalVector(diff.size()));
    for (std::size_t a = 0; a < diff.size(); ++a) {
      for (Eigen::Index j = 0; j < dim; ++j) columns[static_cast<std::size_t>(j)][a] = rational_from_double(diff[a](j, j).real());
    }
    Rational best = -1;
    std::size_t best_vertex = 0;
    Eigen::Index best_j = 0;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        Rational s = 0;
        const auto& col = columns[static_cast<std::size_t>(j)];
        for (std::size_t a = 0; a < col.size(); ++a) {
          if (col[a] != 0) s += vertices.vertices[k][a] * col[a];
        }
        s = abs(s);
        if (s > best) {
          best = s;
          best_vertex = k;
          best_j = j;
        }
      }
    }
    if (best < 0) best = 0;
    result.exact_value = best;
    result.value = to_double(best);
    result.witness_phi = make_lipschitz(vertices.vertices.at(best_vertex), e.space());
    result.witness_vector = basis_vector(dim, best_j);
    return result;
  }

  std::vector<double> norms(vertices.size());
  parallel_for(vertices.size(), [&](std::size_t k) {
    norms[k] = spectral_norm(combine(diff, vertices.vertices_double[k], dim));
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < norms.size(); ++k) {
    if (norms[k] > norms[best]) best = k;
  }
  result.value = norms.empty() ? 0.0 : norms[best];
  result.witness_phi = make_lipschitz(vertices.vertices.at(best), e.space());
  result.witness_vector = dominant_eigenpair(combine(diff, vertices.vertices_double[best], dim)).vector;
  return result;
}

RhoResult rho_exact(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f, std::size_t vertex_cap) {
  return rho_exact(e, f, lip1_vertices(e.space(), 0, vertex_cap));
}

RhoResult rho_lower_sphere(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f,
                           const Lip1VertexSet& vertices, std::size_t restarts, std::uint64_t seed) {
  check_pair(e, f);
  check_vertices(e, vertices);
  const auto diff = differences(e, f);
  const Eigen::Index dim = e.dim();
  constexpr int kAscentSteps = 50;

  struct Best {
    double value = -1.0;
    std::size_t vertex = 0;
    CVector h;
  };
  std::vector<Best> per_restart(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    SplitMix64 rng = SplitMix64::derive(seed, r);
    // The first restarts sweep the basis vectors, which already suffices for commuting pairs.
    CVector h = r < static_cast<std::size_t>(dim) ? basis_vector(dim, static_cast<Eigen::Index>(r))
                                                  : random_unit_vector(dim, rng);
    Best best;
    for (int step = 0; step <= kAscentSteps; ++step) {
      std::size_t vertex = 0;
      const double value = quadratic_dual(diff, vertices, h, &vertex);
      if (value > best.value) best = {value, vertex, h};
      if (step == kAscentSteps) break;
      const DominantPair top = dominant_eigenpair(combine(diff, vertices.vertices_double[vertex], dim));
      if (top.vector.size() == 0 || !top.vector.allFinite()) break;
      h = top.vector;
    }
    per_restart[r] = std::move(best);
  });

  RhoResult result;
  result.method = RhoMethod::Sphere;
  std::size_t winner = 0;
  for (std::size_t r = 1; r < per_restart.size(); ++r) {
    if (per_restart[r].value > per_restart[winner].value) winner = r;
  }
  if (!per_restart.empty() && per_restart[winner].value >= 0.0) {
    result.value = per_restart[winner].value;
    result.witness_phi = make_lipschitz(vertices.vertices.at(per_restart[winner].vertex), e.space());
    result.witness_vector = per_restart[winner].h;
  }
  return result;
}

RhoResult rho_lower_grid(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f, std::size_t samples,
                         std::uint64_t seed) {
  check_pair(e, f);
  const auto diff = differences(e, f);
  const FiniteMetricSpace& space = e.space();
  const std::size_t n = space.size();
  const auto denom = static_cast<long>(1) << 20;
  const double diam = to_double(space.diameter());

  RhoResult result;
  result.method = RhoMethod::Grid;
  result.witness_phi = make_lipschitz(RationalVector(n, Rational(0)), space);
  result.witness_vector = basis_vector(e.dim(), 0);
  SplitMix64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    RationalVector v(n);
    for (auto& x : v) {
      const auto k = static_cast<long>(rng.below(2 * static_cast<std::uint64_t>(denom) + 1)) - denom;
      x = Rational(k, denom) * rational_from_double(diam);
    }
    RationalVector phi = mcshane_regularize(v, space, 0);
    const auto phi_d = to_double(phi);
    const CMatrix m = combine(diff, phi_d, e.dim());
    const double value = spectral_norm(m);
    if (value > result.value) {
      result.value = value;
      result.witness_phi = make_lipschitz(std::move(phi), space);
      result.witness_vector = dominant_eigenpair(m).vector;
    }
  }
  return result;
}

AxiomReport metric_axiom_suite(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f,
                               const OperatorValuedMeasure& g, const Lip1VertexSet& vertices, double tol) {
  AxiomReport r;
  r.rho_ef = rho_exact(e, f, vertices).value;
  r.rho_fe = rho_exact(f, e, vertices).value;
  r.rho_fg = rho_exact(f, g, vertices).value;
  r.rho_eg = rho_exact(e, g, vertices).value;
  r.symmetric = r.rho_ef == r.rho_fe;
  const auto indiscernible = [tol](double rho, const OperatorValuedMeasure& a, const OperatorValuedMeasure& b) {
    return (rho <= tol) == (a.distance_max_abs(b) <= tol);
  };
  r.identity_of_indiscernibles =
      indiscernible(r.rho_ef, e, f) && indiscernible(r.rho_fg, f, g) && indiscernible(r.rho_eg, e, g);
  r.triangle_excess = r.rho_eg - r.rho_ef - r.rho_fg;
  r.triangle = r.triangle_excess <= tol;
  r.diameter = to_double(e.space().diameter());
  const double worst = std::max({r.rho_ef, r.rho_fg, r.rho_eg});
  r.bounded = worst <= 2.0 * r.diameter + tol;
  r.within_diameter = worst <= r.diameter + tol;
  return r;
}

TopologyReport topology_bounds(std::span<const double> f, const OperatorValuedMeasure& e,
                               const OperatorValuedMeasure& g, const Lip1VertexSet& vertices, double tol) {
  check_pair(e, g);
  TopologyReport r;
  r.integral_gap = spectral_norm(integrate(f, e) - integrate(f, g));
  r.rho = rho_exact(e, g, vertices).value;
  r.lipschitz_bound = lip_constant(f, e.space()) * r.rho;
  double tv = 0.0;
  for (std::size_t a = 0; a < e.atom_count(); ++a) tv += spectral_norm(e[a] - g[a]);
  r.total_variation_bound = to_double(e.space().diameter()) * tv;
  r.weak_from_metric = r.integral_gap <= r.lipschitz_bound + tol;
  r.metric_from_weak = r.rho <= r.total_variation_bound + tol;
  return r;
}

}  // namespace pvmk
