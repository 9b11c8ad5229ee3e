#pragma once

#include "pvmk/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace pvmk {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kJacobiThreshold = 1e-13;

struct JacobiResult {
  Eigen::VectorXd values;  // ascending
  RMatrix vectors;         // column j pairs with values(j)
  int sweeps = 0;
};

/// Cyclic Jacobi on a real symmetric matrix. Sweeps visit (p, q) with p < q
/// in row-major order and stop once the off-diagonal Frobenius mass falls
/// below threshold * max(1, ||A||_F). With want_vectors false, `vectors` is
/// left empty.
JacobiResult jacobi_symmetric(const RMatrix& a, double threshold = kJacobiThreshold, bool want_vectors = true);

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending, one per dimension
};

/// Eigenvalues of a Hermitian matrix H = A + iB through the real symmetric
/// embedding [[A, -B], [B, A]], whose spectrum is that of H with each value doubled.
HermitianEigen hermitian_eigenvalues(const CMatrix& h, double threshold = kJacobiThreshold);

/// Smallest eigenvalue of the Hermitian part, via Eigen's tridiagonal QR.
double min_eigenvalue(const CMatrix& h);

/// max |lambda| of a Hermitian matrix, i.e. its operator norm.
double spectral_norm(const CMatrix& h, double threshold = kJacobiThreshold);

struct DominantPair {
  double value = 0.0;  // eigenvalue with the largest modulus (signed)
  CVector vector;      // unit eigenvector
};

DominantPair dominant_eigenpair(const CMatrix& h, double threshold = kJacobiThreshold);

/// max_{i,j} |(H - H*)_{ij}|.
double hermitian_defect(const CMatrix& h);

/// max |(U*U - I)_{ij}|.
double unitary_defect(const CMatrix& u);

double max_abs(const CMatrix& m);

/// Haar-distributed unitary from the QR factorization of a complex Gaussian
/// matrix, with R's diagonal phases moved into Q.
CMatrix random_unitary(Eigen::Index dim, SplitMix64& rng);

/// Unit vector with i.i.d. complex Gaussian entries; real_only restricts to R^dim.
CVector random_unit_vector(Eigen::Index dim, SplitMix64& rng, bool real_only = false);

CMatrix to_complex(const IntMatrix& m);

}  // namespace pvmk
