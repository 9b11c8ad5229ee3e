#include "pvmk/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pvmk {

namespace {

double off_diagonal_norm(const RMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

RMatrix real_embedding(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  RMatrix m(2 * n, 2 * n);
  const RMatrix re = h.real();
  const RMatrix im = h.imag();
  m.topLeftCorner(n, n) = re;
  m.topRightCorner(n, n) = -im;
  m.bottomLeftCorner(n, n) = im;
  m.bottomRightCorner(n, n) = re;
  // Symmetrize away rounding in the input's Hermitian pairing.
  return 0.5 * (m + m.transpose());
}

}  // namespace

JacobiResult jacobi_symmetric(const RMatrix& input, double threshold, bool want_vectors) {
  const Eigen::Index n = input.rows();
  RMatrix a = input;
  RMatrix v;
  if (want_vectors) v = RMatrix::Identity(n, n);
  JacobiResult result;
  const double scale = std::max(1.0, a.norm());
  constexpr int kMaxSweeps = 100;
  while (result.sweeps < kMaxSweeps && off_diagonal_norm(a) > threshold * scale) {
    ++result.sweeps;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Columns p and q of J^T A J off the 2x2 block; rows follow by symmetry.
        double* cp = a.col(p).data();
        double* cq = a.col(q).data();
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = cp[k];
          const double akq = cq[k];
          cp[k] = c * akp - s * akq;
          cq[k] = s * akp + c * akq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a.row(p) = a.col(p).transpose();
        a.row(q) = a.col(q).transpose();
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (want_vectors) {
          double* vp = v.col(p).data();
          double* vq = v.col(q).data();
          for (Eigen::Index k = 0; k < n; ++k) {
            const double vkp = vp[k];
            const double vkq = vq[k];
            vp[k] = c * vkp - s * vkq;
            vq[k] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  result.values.resize(n);
  if (want_vectors) result.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    result.values(j) = a(order[j], order[j]);
    if (want_vectors) result.vectors.col(j) = v.col(order[j]);
  }
  return result;
}

HermitianEigen hermitian_eigenvalues(const CMatrix& h, double threshold) {
  const Eigen::Index n = h.rows();
  HermitianEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  const JacobiResult j = jacobi_symmetric(real_embedding(h), threshold, false);
  for (Eigen::Index i = 0; i < n; ++i) out.values(i) = 0.5 * (j.values(2 * i) + j.values(2 * i + 1));
  return out;
}

double min_eigenvalue(const CMatrix& h) {
  if (h.rows() == 0) return 0.0;
  const CMatrix sym = 0.5 * (h + h.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

double spectral_norm(const CMatrix& h, double threshold) {
  if (h.rows() == 0) return 0.0;
  const HermitianEigen e = hermitian_eigenvalues(h, threshold);
  return std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
}

DominantPair dominant_eigenpair(const CMatrix& h, double threshold) {
  const Eigen::Index n = h.rows();
  DominantPair out;
  if (n == 0) return out;
  const JacobiResult j = jacobi_symmetric(real_embedding(h), threshold);
  const Eigen::Index last = 2 * n - 1;
  const Eigen::Index pick = std::abs(j.values(0)) >= std::abs(j.values(last)) ? 0 : last;
  out.value = j.values(pick);
  out.vector.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.vector(i) = Complex(j.vectors(i, pick), j.vectors(n + i, pick));
  out.vector.normalize();
  return out;
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_defect(const CMatrix& h) { return max_abs(h - h.adjoint()); }

double unitary_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  if (u.rows() == 0) return 0.0;
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

CMatrix random_unitary(Eigen::Index dim, SplitMix64& rng) {
  CMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = Complex(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CVector random_unit_vector(Eigen::Index dim, SplitMix64& rng, bool real_only) {
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = rng.gaussian();
    v(i) = real_only ? Complex(re, 0.0) : Complex(re, rng.gaussian());
  }
  const double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    if (dim > 0) v(0) = 1.0;
    return v;
  }
  return v / norm;
}

CMatrix to_complex(const IntMatrix& m) { return m.cast<double>().cast<Complex>(); }

}  // namespace pvmk
