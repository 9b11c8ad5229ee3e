#pragma once

#include "pvmk/linalg.hpp"
#include "pvmk/metric_space.hpp"
#include "pvmk/ovm.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pvmk {

enum class RhoMethod { Vertex, Sphere, Grid };

std::string_view to_string(RhoMethod method) noexcept;
RhoMethod parse_rho_method(std::string_view text);

inline constexpr double kCompareTolerance = 1e-9;

struct RhoResult {
  double value = 0.0;
  /// Set by the vertex method when every atom difference is diagonal, where
  /// the objective is piecewise linear and the maximum is computed in rationals.
  std::optional<Rational> exact_value;
  LipschitzFunction witness_phi;
  CVector witness_vector;
  RhoMethod method = RhoMethod::Vertex;
};

/// || int phi dE - int phi dF || for one test function.
double rho_objective(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f, std::span<const double> phi);

/// rho(E, F) = sup over Lip_1 of || int phi d(E - F) ||, as a maximum over the
/// anchored polytope's vertices. The objective is a norm of a linear image of
/// phi, hence convex, so the maximum over the polytope sits at a vertex; the
/// anchor is harmless because constants integrate to lambda * I under both
/// measures. Ties go to the earliest vertex in lexicographic order.
RhoResult rho_exact(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f, const Lip1VertexSet& vertices);
RhoResult rho_exact(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f,
                    std::size_t vertex_cap = kDefaultVertexCap);

/// Lower bound sup_h H(E_{h,h}, F_{h,h}) over sampled unit vectors. Each
/// restart alternates between the best vertex for h and the dominant
/// eigenvector of that vertex's operator (50 ascent steps), keeping the best.
RhoResult rho_lower_sphere(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f,
                           const Lip1VertexSet& vertices, std::size_t restarts, std::uint64_t seed);

/// Lower bound from random Lip_1 functions: random rational values,
/// McShane-regularized and anchored.
RhoResult rho_lower_grid(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f, std::size_t samples,
                         std::uint64_t seed);

struct AxiomReport {
  double rho_ef = 0.0, rho_fe = 0.0, rho_fg = 0.0, rho_eg = 0.0;
  bool symmetric = false;            // rho(E,F) == rho(F,E) bit for bit
  bool identity_of_indiscernibles = false;
  double triangle_excess = 0.0;      // rho(E,G) - rho(E,F) - rho(F,G)
  bool triangle = false;
  double diameter = 0.0;
  bool bounded = false;              // every rho <= 2 diam + tol
  bool within_diameter = false;      // sharper observed bound rho <= diam + tol (recorded only)

  bool passed() const noexcept { return symmetric && identity_of_indiscernibles && triangle && bounded; }
};

AxiomReport metric_axiom_suite(const OperatorValuedMeasure& e, const OperatorValuedMeasure& f,
                               const OperatorValuedMeasure& g, const Lip1VertexSet& vertices,
                               double tol = kCompareTolerance);

struct TopologyReport {
  double integral_gap = 0.0;      // || int f dE - int f dF ||
  double lipschitz_bound = 0.0;   // Lip(f) * rho(E,F)
  double rho = 0.0;
  double total_variation_bound = 0.0;  // diam * sum_a ||E(a) - F(a)||
  bool weak_from_metric = false;   // integral_gap <= lipschitz_bound + tol
  bool metric_from_weak = false;   // rho <= total_variation_bound + tol

  bool passed() const noexcept { return weak_from_metric && metric_from_weak; }
};

TopologyReport topology_bounds(std::span<const double> f, const OperatorValuedMeasure& e,
                               const OperatorValuedMeasure& g, const Lip1VertexSet& vertices,
                               double tol = kCompareTolerance);

}  // namespace pvmk
