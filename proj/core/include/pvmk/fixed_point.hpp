#pragma once

#include "pvmk/cuntz.hpp"
#include "pvmk/ovm.hpp"
#include "pvmk/rho.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pvmk {

/// Phi(E)(i.c) = S_i E(c) S_i* from level k-1 to level k. sigma_i^{-1} of the
/// cell i.c is c and it is empty for every other branch, so each atom gets a
/// single term. Throws LevelOutOfRange, or KindViolation if the image fails
/// its own kind's axioms.
OperatorValuedMeasure phi_step(const CuntzTower& ct, std::size_t level, const OperatorValuedMeasure& e);

enum class SeedKind { Truth, Swapped, RandomPvm, RandomPovm };

std::string_view to_string(SeedKind kind) noexcept;
SeedKind parse_seed_kind(std::string_view text);

/// Seed OVM at `level`: the multiplication PVM; the swapped diagonal
/// (atom a -> e_{a'} with a' = a with its last symbol advanced mod N);
/// the multiplication PVM conjugated by a random unitary; or a random POVM.
OperatorValuedMeasure make_seed(const CuntzTower& ct, std::size_t level, SeedKind kind, std::uint64_t seed);

/// Vertex cap applied to level spaces when computing rho along the tower.
inline constexpr std::size_t kTowerVertexCap = 9;

struct PhiStepRecord {
  std::size_t step = 0;
  std::size_t level = 0;
  double rho_to_truth = 0.0;
  std::optional<double> ratio;  // rho_t / rho_{t-1}; absent when the previous distance is ~0
};

struct PhiTrace {
  std::string seed_description;
  std::vector<PhiStepRecord> steps;  // steps[0] is the seed itself
  OperatorValuedMeasure final_measure;
  double contraction_constant = 0.0;
  bool decay_ok = true;           // rho_t <= r rho_{t-1} + 1e-8 at every step
  bool seed_independent = true;   // Phi^m(seed)(A_k(a)) == P_k(a) for k <= m; exact, or 1e-12 for float seeds
  bool kind_preserved = true;
};

PhiTrace phi_iterate(const CuntzTower& ct, const OperatorValuedMeasure& seed, std::size_t seed_level,
                     std::size_t steps, std::string seed_description = "custom",
                     std::size_t vertex_cap = kTowerVertexCap);

struct WordDefect {
  Word word;
  std::string route;  // "coarse-grain" or "phi-iteration"
  double magnitude = 0.0;
};

struct FixedPointReport {
  std::size_t depth = 0;
  std::size_t words_checked = 0;
  std::vector<WordDefect> defects;

  bool passed() const noexcept { return defects.empty(); }
};

/// For every word a with |a| <= K compares E(A_k(a)) against S_a S_a* with
/// zero tolerance, E being the candidate (multiplication PVM by default),
/// and re-derives the candidate by iterating Phi from the level-0 measure.
FixedPointReport verify_fixed_point(const CuntzTower& ct, std::size_t depth,
                                    const std::optional<OperatorValuedMeasure>& candidate = std::nullopt);

struct RhoContraction {
  std::size_t level = 0;
  double max_ratio = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  bool within_bound = true;  // every ratio <= r + 1e-8
};

/// Samples OVM pairs at level k-1 and measures rho_k(Phi E, Phi F) / rho_{k-1}(E, F).
RhoContraction contraction_ratio_rho(const CuntzTower& ct, std::size_t level, std::size_t trials, std::uint64_t seed,
                                     MeasureKind kind = MeasureKind::Projection,
                                     std::size_t vertex_cap = kTowerVertexCap);

struct RelateReport {
  std::size_t support = 0;          // atoms with E_{h,h}(a) > 0
  double isometry_defect = 0.0;     // Gram{E(a)h} vs diag(E_{h,h})
  double cylinder_defect = 0.0;     // V(1_{A_k(a)}) vs S_a S_a* h
  double intertwining_defect = 0.0; // V* P_k(a) V vs multiplication by 1_{A_k(a)}
  std::size_t range_rank = 0;       // rank of V
  std::size_t cyclic_rank = 0;      // rank of span{P_k(a) h}
  std::size_t joint_rank = 0;       // rank of both together
  double tolerance = 1e-10;

  bool passed() const noexcept {
    return isometry_defect <= tolerance && cylinder_defect <= tolerance && intertwining_defect <= tolerance &&
           range_rank == cyclic_rank && joint_rank == range_rank;
  }
};

/// Checks the isometry V : L^2(atoms, E_{h,h}) -> V_K, 1_a -> E(a) h, for the
/// multiplication PVM E at level K. Throws DimensionMismatch, MalformedInput
/// when ||h|| != 1 within 1e-12, or ZeroMassEverywhere.
RelateReport relate_verify(const CuntzTower& ct, std::size_t depth, const CVector& h, double tol = 1e-10);

}  // namespace pvmk
