#pragma once

#include "pvmk/error.hpp"
#include "pvmk/linalg.hpp"
#include "pvmk/metric_space.hpp"
#include "pvmk/rng.hpp"
#include "pvmk/transport.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pvmk {

enum class MeasureKind { Projection, Positive };

std::string_view to_string(MeasureKind kind) noexcept;
MeasureKind parse_measure_kind(std::string_view text);

inline constexpr double kAxiomTolerance = 1e-10;

struct OvmViolation {
  ErrorCode code;
  std::size_t atom = 0;
  std::size_t other = 0;
  double magnitude = 0.0;

  std::string describe() const;
};

class OvmValidationError : public Error {
 public:
  explicit OvmValidationError(std::vector<OvmViolation> violations);

  const std::vector<OvmViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<OvmViolation> violations_;
};

/// Worst-case axiom residuals of an atom -> matrix assignment.
struct OvmDefects {
  double hermitian = 0.0;       // max_a max|M_a - M_a*|
  double idempotent = 0.0;      // max_a max|M_a^2 - M_a|
  double min_eigenvalue = 0.0;  // min_a lambda_min(M_a)
  double sum_identity = 0.0;    // max|sum_a M_a - I|
  double cross_product = 0.0;   // max_{a != b} max|M_a M_b|
};

OvmDefects measure_defects(std::span<const CMatrix> matrices);

/// Operator-valued measure on the atoms of a finite space: atom a -> M_a,
/// Hermitian, summing to the identity. kind=Projection adds idempotency and
/// pairwise orthogonality (the finite form of multiplicativity over
/// intersections); kind=Positive adds positive semidefiniteness. Values on
/// unions of atoms are sums, so additivity holds by construction.
class OperatorValuedMeasure {
 public:
  const FiniteMetricSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t atom_count() const noexcept { return atoms_.size(); }
  MeasureKind kind() const noexcept { return kind_; }
  const CMatrix& operator[](std::size_t atom) const { return atoms_.at(atom); }
  const std::vector<CMatrix>& atoms() const noexcept { return atoms_; }

  /// F(union of the listed atoms).
  CMatrix value_on(std::span<const std::size_t> atom_indices) const;

  /// Largest atomwise max-abs difference; infinity when shapes differ.
  double distance_max_abs(const OperatorValuedMeasure& other) const;

 private:
  friend OperatorValuedMeasure validate_ovm(SpacePtr, MeasureKind, std::vector<CMatrix>, double);

  OperatorValuedMeasure(SpacePtr space, MeasureKind kind, std::vector<CMatrix> atoms);

  SpacePtr space_;
  MeasureKind kind_;
  Eigen::Index dim_ = 0;
  std::vector<CMatrix> atoms_;
};

/// Checks every axiom for `kind` within tol (tol = 0 demands exact equality)
/// and throws OvmValidationError listing all violations.
OperatorValuedMeasure validate_ovm(SpacePtr space, MeasureKind kind, std::vector<CMatrix> matrices,
                                   double tol = kAxiomTolerance);

/// Complex scalar measure Delta -> <F(Delta) g, h>, stored as real and imaginary parts.
struct ScalarMeasurePair {
  SignedMeasure re;
  SignedMeasure im;

  std::vector<Complex> values() const;
  Complex total() const;
  double total_variation() const;
};

/// Inner products are linear in the first slot: <x, y> = y* x.
ScalarMeasurePair scalar_measure(const OperatorValuedMeasure& f, const CVector& g, const CVector& h);

/// max_a |F_{g,h}(a) - conj(F_{h,g}(a))|.
double conjugate_symmetry_defect(const OperatorValuedMeasure& f, const CVector& g, const CVector& h);

/// sum_a psi(a) F(a).
CMatrix integrate(std::span<const Complex> psi, const OperatorValuedMeasure& f);
CMatrix integrate(std::span<const double> psi, const OperatorValuedMeasure& f);

struct RepresentationReport {
  double linearity = 0.0;
  double multiplicativity = 0.0;
  double adjoint = 0.0;
  double unital = 0.0;
  std::size_t panel_size = 0;

  double worst() const;
};

/// Checks f -> int f dF for being a unital *-homomorphism on a panel made of
/// every atom indicator plus `random_functions` seeded random complex functions.
RepresentationReport representation_check(const OperatorValuedMeasure& f, std::size_t random_functions = 8,
                                          std::uint64_t seed = 0);

/// a -> U F(a) U*. Throws NotUnitary when max|U*U - I| > 1e-10.
OperatorValuedMeasure conjugate(const OperatorValuedMeasure& f, const CMatrix& u);

/// h -> atom weights of A_{h,h}.
using QuadraticFormOracle = std::function<std::vector<double>(const CVector&)>;

QuadraticFormOracle quadratic_form_oracle(const OperatorValuedMeasure& f);

/// Rebuilds A_{g,h} from quadratic forms alone:
/// Re = (A_{g+h} - A_g - A_h)/2 and Im = -(A_{ig+h} - A_g - A_h)/2.
ScalarMeasurePair polarize(const QuadraticFormOracle& q, const CVector& g, const CVector& h);

/// basis vector j -> atom assignment[j]; assignment.size() is the dimension.
OperatorValuedMeasure diagonal_pvm(SpacePtr space, std::span<const std::size_t> assignment);

/// Random orthonormal basis split among atoms at random (atoms may receive nothing).
OperatorValuedMeasure random_pvm(SpacePtr space, Eigen::Index dim, SplitMix64& rng);

/// Random PSD matrices G_a G_a*, congruence-normalized by S^{-1/2} with S = sum_a G_a G_a*.
OperatorValuedMeasure random_povm(SpacePtr space, Eigen::Index dim, SplitMix64& rng);

}  // namespace pvmk
