#include "pvmk/ovm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pvmk {

std::string_view to_string(MeasureKind kind) noexcept {
  return kind == MeasureKind::Projection ? "projection" : "positive";
}

MeasureKind parse_measure_kind(std::string_view text) {
  if (text == "projection") return MeasureKind::Projection;
  if (text == "positive") return MeasureKind::Positive;
  throw Error(ErrorCode::MalformedInput, "kind must be 'projection' or 'positive', got '" + std::string(text) + "'");
}

std::string OvmViolation::describe() const {
  std::string s(to_string(code));
  switch (code) {
    case ErrorCode::SumNotIdentity:
      return s + "(" + std::to_string(magnitude) + ")";
    case ErrorCode::CrossProductNonzero:
      return s + "(" + std::to_string(atom) + "," + std::to_string(other) + ")";
    case ErrorCode::NotPSD:
      return s + "(" + std::to_string(atom) + ", min_eig=" + std::to_string(magnitude) + ")";
    default:
      return s + "(" + std::to_string(atom) + ")";
  }
}

namespace {

std::string join(const std::vector<OvmViolation>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].describe();
  return out;
}

}  // namespace

OvmValidationError::OvmValidationError(std::vector<OvmViolation> violations)
    : Error(violations.empty() ? ErrorCode::MalformedInput : violations.front().code, join(violations)),
      violations_(std::move(violations)) {}

OvmDefects measure_defects(std::span<const CMatrix> matrices) {
  OvmDefects d;
  if (matrices.empty()) return d;
  const Eigen::Index dim = matrices.front().rows();
  CMatrix total = CMatrix::Zero(dim, dim);
  d.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < matrices.size(); ++a) {
    const CMatrix& m = matrices[a];
    total += m;
    d.hermitian = std::max(d.hermitian, hermitian_defect(m));
    d.idempotent = std::max(d.idempotent, max_abs(m * m - m));
    if (dim > 0) d.min_eigenvalue = std::min(d.min_eigenvalue, min_eigenvalue(m));
    for (std::size_t b = 0; b < matrices.size(); ++b) {
      if (a != b) d.cross_product = std::max(d.cross_product, max_abs(m * matrices[b]));
    }
  }
  if (dim == 0) d.min_eigenvalue = 0.0;
  d.sum_identity = max_abs(total - CMatrix::Identity(dim, dim));
  return d;
}

OperatorValuedMeasure::OperatorValuedMeasure(SpacePtr space, MeasureKind kind, std::vector<CMatrix> atoms)
    : space_(std::move(space)), kind_(kind), dim_(atoms.empty() ? 0 : atoms.front().rows()), atoms_(std::move(atoms)) {}

CMatrix OperatorValuedMeasure::value_on(std::span<const std::size_t> atom_indices) const {
  CMatrix total = CMatrix::Zero(dim_, dim_);
  for (auto a : atom_indices) total += atoms_.at(a);
  return total;
}

double OperatorValuedMeasure::distance_max_abs(const OperatorValuedMeasure& other) const {
  if (other.atom_count() != atom_count() || other.dim() != dim()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t a = 0; a < atom_count(); ++a) worst = std::max(worst, max_abs(atoms_[a] - other.atoms_[a]));
  return worst;
}

OperatorValuedMeasure validate_ovm(SpacePtr space, MeasureKind kind, std::vector<CMatrix> matrices, double tol) {
  if (!space) throw Error(ErrorCode::MalformedInput, "OVM without a space");
  if (matrices.size() != space->size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(matrices.size()) + " atom matrices for " +
                                                  std::to_string(space->size()) + " points");
  }
  const Eigen::Index dim = matrices.empty() ? 0 : matrices.front().rows();
  for (const auto& m : matrices) {
    if (m.rows() != dim || m.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "atom matrices must be dim x dim");
  }
  std::vector<OvmViolation> bad;
  CMatrix total = CMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < matrices.size(); ++a) {
    const CMatrix& m = matrices[a];
    total += m;
    if (hermitian_defect(m) > tol) bad.push_back({ErrorCode::NotHermitian, a, 0, hermitian_defect(m)});
    if (kind == MeasureKind::Projection) {
      const double idem = max_abs(m * m - m);
      if (idem > tol) bad.push_back({ErrorCode::NotIdempotent, a, 0, idem});
    } else if (dim > 0) {
      const double lo = min_eigenvalue(m);
      if (lo < -tol) bad.push_back({ErrorCode::NotPSD, a, 0, lo});
    }
  }
  const double sum_defect = max_abs(total - CMatrix::Identity(dim, dim));
  if (sum_defect > tol) bad.push_back({ErrorCode::SumNotIdentity, 0, 0, sum_defect});
  if (kind == MeasureKind::Projection) {
    for (std::size_t a = 0; a < matrices.size(); ++a) {
      for (std::size_t b = a + 1; b < matrices.size(); ++b) {
        const double cross = max_abs(matrices[a] * matrices[b]);
        if (cross > tol) bad.push_back({ErrorCode::CrossProductNonzero, a, b, cross});
      }
    }
  }
  if (!bad.empty()) throw OvmValidationError(std::move(bad));
  return OperatorValuedMeasure(std::move(space), kind, std::move(matrices));
}

std::vector<Complex> ScalarMeasurePair::values() const {
  std::vector<Complex> out(re.weights.size());
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = Complex(re.weights[a], im.weights[a]);
  return out;
}

Complex ScalarMeasurePair::total() const { return Complex(re.total_mass(), im.total_mass()); }

double ScalarMeasurePair::total_variation() const {
  double s = 0.0;
  for (std::size_t a = 0; a < re.weights.size(); ++a) s += std::hypot(re.weights[a], im.weights[a]);
  return s;
}

namespace {

void check_vector(const OperatorValuedMeasure& f, const CVector& v) {
  if (v.size() != f.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length " + std::to_string(v.size()) + " != dim " + std::to_string(f.dim()));
  }
}

}  // namespace

ScalarMeasurePair scalar_measure(const OperatorValuedMeasure& f, const CVector& g, const CVector& h) {
  check_vector(f, g);
  check_vector(f, h);
  ScalarMeasurePair out;
  out.re.weights.resize(f.atom_count());
  out.im.weights.resize(f.atom_count());
  for (std::size_t a = 0; a < f.atom_count(); ++a) {
    const Complex v = h.dot(f[a] * g);  // Eigen's dot conjugates its left operand: h* (F g)
    out.re.weights[a] = v.real();
    out.im.weights[a] = v.imag();
  }
  return out;
}

double conjugate_symmetry_defect(const OperatorValuedMeasure& f, const CVector& g, const CVector& h) {
  const auto gh = scalar_measure(f, g, h).values();
  const auto hg = scalar_measure(f, h, g).values();
  double worst = 0.0;
  for (std::size_t a = 0; a < gh.size(); ++a) worst = std::max(worst, std::abs(gh[a] - std::conj(hg[a])));
  return worst;
}

CMatrix integrate(std::span<const Complex> psi, const OperatorValuedMeasure& f) {
  if (psi.size() != f.atom_count()) throw Error(ErrorCode::DimensionMismatch, "psi length != atom count");
  CMatrix out = CMatrix::Zero(f.dim(), f.dim());
  for (std::size_t a = 0; a < psi.size(); ++a) {
    if (psi[a] != Complex(0.0)) out += psi[a] * f[a];
  }
  return out;
}

CMatrix integrate(std::span<const double> psi, const OperatorValuedMeasure& f) {
  if (psi.size() != f.atom_count()) throw Error(ErrorCode::DimensionMismatch, "psi length != atom count");
  CMatrix out = CMatrix::Zero(f.dim(), f.dim());
  for (std::size_t a = 0; a < psi.size(); ++a) {
    if (psi[a] != 0.0) out += psi[a] * f[a];
  }
  return out;
}

double RepresentationReport::worst() const { return std::max({linearity, multiplicativity, adjoint, unital}); }

RepresentationReport representation_check(const OperatorValuedMeasure& f, std::size_t random_functions,
                                          std::uint64_t seed) {
  const std::size_t n = f.atom_count();
  std::vector<std::vector<Complex>> panel;
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<Complex> e(n, Complex(0.0));
    e[a] = 1.0;
    panel.push_back(std::move(e));
  }
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < random_functions; ++k) {
    std::vector<Complex> psi(n);
    for (auto& v : psi) v = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    panel.push_back(std::move(psi));
  }

  RepresentationReport report;
  report.panel_size = panel.size();
  std::vector<CMatrix> images;
  images.reserve(panel.size());
  for (const auto& psi : panel) images.push_back(integrate(psi, f));

  std::vector<Complex> ones(n, Complex(1.0));
  report.unital = max_abs(integrate(ones, f) - CMatrix::Identity(f.dim(), f.dim()));

  for (std::size_t p = 0; p < panel.size(); ++p) {
    std::vector<Complex> conj_psi(n);
    for (std::size_t a = 0; a < n; ++a) conj_psi[a] = std::conj(panel[p][a]);
    report.adjoint = std::max(report.adjoint, max_abs(integrate(conj_psi, f) - images[p].adjoint()));
    for (std::size_t q = 0; q < panel.size(); ++q) {
      const Complex alpha(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      const Complex beta(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      std::vector<Complex> combo(n);
      std::vector<Complex> product(n);
      for (std::size_t a = 0; a < n; ++a) {
        combo[a] = alpha * panel[p][a] + beta * panel[q][a];
        product[a] = panel[p][a] * panel[q][a];
      }
      report.linearity =
          std::max(report.linearity, max_abs(integrate(combo, f) - alpha * images[p] - beta * images[q]));
      report.multiplicativity = std::max(report.multiplicativity, max_abs(integrate(product, f) - images[p] * images[q]));
    }
  }
  return report;
}

OperatorValuedMeasure conjugate(const OperatorValuedMeasure& f, const CMatrix& u) {
  if (u.rows() != f.dim() || u.cols() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "unitary has wrong size");
  const double defect = unitary_defect(u);
  if (defect > 1e-10) throw Error(ErrorCode::NotUnitary, "max|U*U - I| = " + std::to_string(defect));
  std::vector<CMatrix> out;
  out.reserve(f.atom_count());
  for (const auto& m : f.atoms()) {
    CMatrix c = u * m * u.adjoint();
    out.push_back(0.5 * (c + c.adjoint()));
  }
  return validate_ovm(f.space_ptr(), f.kind(), std::move(out), 1e-9);
}

QuadraticFormOracle quadratic_form_oracle(const OperatorValuedMeasure& f) {
  return [f](const CVector& h) { return scalar_measure(f, h, h).re.weights; };
}

ScalarMeasurePair polarize(const QuadraticFormOracle& q, const CVector& g, const CVector& h) {
  const auto agg = q(g);
  const auto ahh = q(h);
  const auto asum = q(g + h);
  const auto aisum = q(Complex(0.0, 1.0) * g + h);
  ScalarMeasurePair out;
  const std::size_t n = agg.size();
  out.re.weights.resize(n);
  out.im.weights.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    out.re.weights[a] = 0.5 * (asum[a] - agg[a] - ahh[a]);
    out.im.weights[a] = -0.5 * (aisum[a] - agg[a] - ahh[a]);
  }
  return out;
}

OperatorValuedMeasure diagonal_pvm(SpacePtr space, std::span<const std::size_t> assignment) {
  const auto dim = static_cast<Eigen::Index>(assignment.size());
  std::vector<CMatrix> atoms(space->size(), CMatrix::Zero(dim, dim));
  for (Eigen::Index j = 0; j < dim; ++j) atoms.at(assignment[static_cast<std::size_t>(j)])(j, j) = 1.0;
  return validate_ovm(std::move(space), MeasureKind::Projection, std::move(atoms), 0.0);
}

OperatorValuedMeasure random_pvm(SpacePtr space, Eigen::Index dim, SplitMix64& rng) {
  const CMatrix u = random_unitary(dim, rng);
  std::vector<CMatrix> atoms(space->size(), CMatrix::Zero(dim, dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    auto& m = atoms[rng.below(space->size())];
    m += u.col(j) * u.col(j).adjoint();
  }
  for (auto& m : atoms) m = 0.5 * (m + m.adjoint());
  return validate_ovm(std::move(space), MeasureKind::Projection, std::move(atoms), 1e-9);
}

OperatorValuedMeasure random_povm(SpacePtr space, Eigen::Index dim, SplitMix64& rng) {
  std::vector<CMatrix> raw;
  CMatrix total = CMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < space->size(); ++a) {
    CMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
    raw.push_back(g * g.adjoint());
    total += raw.back();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(total);
  const CMatrix inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                           es.eigenvectors().adjoint();
  for (auto& m : raw) {
    CMatrix c = inv_sqrt * m * inv_sqrt;
    m = 0.5 * (c + c.adjoint());
  }
  return validate_ovm(std::move(space), MeasureKind::Positive, std::move(raw), 1e-9);
}

}  // namespace pvmk
