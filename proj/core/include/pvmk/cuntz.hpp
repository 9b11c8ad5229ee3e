#pragma once

#include "pvmk/ifs.hpp"
#include "pvmk/linalg.hpp"
#include "pvmk/ovm.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pvmk {

/// Cylinder tower together with the level Hilbert spaces V_0..V_K, where V_k
/// has the orthonormal cell basis e_a = N^(k/2) 1_{A_k(a)}, a in Gamma_N^k.
/// In that basis S_i : V_{k-1} -> V_k sends e_c to e_{i.c}; the sqrt(N)
/// factors of the L^2 formulas cancel and every operator is a 0/1 matrix.
class CuntzTower {
 public:
  explicit CuntzTower(CylinderTower tower) : tower_(std::move(tower)) {}

  const CylinderTower& tower() const noexcept { return tower_; }
  std::size_t depth() const noexcept { return tower_.depth(); }
  std::size_t branch_count() const noexcept { return tower_.branch_count(); }
  std::size_t dimension(std::size_t k) const { return tower_.cell_count(k); }

 private:
  CylinderTower tower_;
};

struct LevelIsometry {
  std::size_t branch = 0;
  std::size_t level = 0;  // target level k; source is k-1
  IntMatrix matrix;       // N^k x N^(k-1)
};

/// S_i from V_{k-1} into V_k. Requires 1 <= k <= K and i < N.
LevelIsometry s_matrix(const CuntzTower& ct, std::size_t branch, std::size_t level);

struct CuntzReport {
  std::size_t level = 0;
  std::int64_t sum_defect = 0;    // max|sum_i S_i S_i^T - I_{V_k}|
  std::int64_t ortho_defect = 0;  // max_{i,j} max|S_i^T S_j - delta_ij I_{V_{k-1}}|

  bool passed() const noexcept { return sum_defect == 0 && ortho_defect == 0; }
};

/// Cuntz relation residuals for an arbitrary family of level-k matrices (integer arithmetic).
CuntzReport cuntz_defects(std::span<const IntMatrix> isometries, std::size_t level);

CuntzReport cuntz_verify(const CuntzTower& ct, std::size_t level);

/// S_a S_a* on V_K for a word of length j <= K: composes S_{a_1} at level K
/// down to S_{a_j} at level K-j+1. A 0/1 diagonal projection onto the
/// descendants of a.
IntMatrix cylinder_projection(const CuntzTower& ct, const Word& word, std::size_t ambient);

/// Depth-K atoms a -> e_a e_a^T on V_K.
OperatorValuedMeasure multiplication_pvm(const CuntzTower& ct, std::size_t ambient);

/// Atom indices at level `ambient` that descend from `word`.
std::vector<std::size_t> descendants(const CuntzTower& ct, const Word& word, std::size_t ambient);

/// Re-expresses an OVM on depth-K atoms as one on depth-j cylinders, each
/// cylinder receiving the sum of its descendant atoms. Operators stay on V_K.
OperatorValuedMeasure coarse_grain(const CuntzTower& ct, const OperatorValuedMeasure& e, std::size_t ambient,
                                   std::size_t level);

}  // namespace pvmk
