#include "doctest.h"

#include "oracles.hpp"
#include "pvmk/ovm.hpp"

#include <memory>

using namespace pvmk;

namespace {

SpacePtr line_space(std::size_t n) {
  RationalVector pts;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(Rational(static_cast<long>(i), static_cast<long>(n)));
    ids.push_back("a" + std::to_string(i));
  }
  return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::on_line(ids, pts));
}

std::vector<ErrorCode> codes_of(SpacePtr s, MeasureKind kind, std::vector<CMatrix> m) {
  try {
    validate_ovm(std::move(s), kind, std::move(m));
  } catch (const OvmValidationError& e) {
    std::vector<ErrorCode> out;
    for (const auto& v : e.violations()) out.push_back(v.code);
    return out;
  }
  return {};
}

bool contains(const std::vector<ErrorCode>& v, ErrorCode c) { return std::find(v.begin(), v.end(), c) != v.end(); }

CVector basis(Eigen::Index dim, Eigen::Index i) {
  CVector v = CVector::Zero(dim);
  v(i) = 1;
  return v;
}

}  // namespace

TEST_CASE("half-identity pair is a POVM and not a PVM") {
  const auto s = line_space(2);
  const std::vector<CMatrix> half{CMatrix::Identity(2, 2) / 2.0, CMatrix::Identity(2, 2) / 2.0};
  CHECK_NOTHROW(validate_ovm(s, MeasureKind::Positive, half));
  const auto codes = codes_of(s, MeasureKind::Projection, half);
  CHECK(contains(codes, ErrorCode::NotIdempotent));
  CHECK(contains(codes, ErrorCode::CrossProductNonzero));
}

TEST_CASE("axiom violations are classified") {
  const auto s = line_space(2);
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1;
  CHECK(contains(codes_of(s, MeasureKind::Positive, {a, CMatrix::Identity(2, 2)}), ErrorCode::NotHermitian));
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = -0.5;
  CMatrix rest = CMatrix::Identity(2, 2);
  rest(0, 0) = 1.5;
  CHECK(contains(codes_of(s, MeasureKind::Positive, {neg, rest}), ErrorCode::NotPSD));
  CHECK(contains(codes_of(s, MeasureKind::Positive, {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)}),
                 ErrorCode::SumNotIdentity));
  try {
    validate_ovm(s, MeasureKind::Positive, {CMatrix::Identity(2, 2)});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("diagonal and random measures validate") {
  const auto s = line_space(3);
  const std::vector<std::size_t> assign{2, 0, 1, 0};
  const auto d = diagonal_pvm(s, assign);
  CHECK(d.kind() == MeasureKind::Projection);
  CHECK(d.dim() == 4);
  CHECK(d[0](1, 1) == Complex(1));
  CHECK(d[0](3, 3) == Complex(1));
  SplitMix64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto p = random_pvm(s, 4, rng);
    CHECK(measure_defects(p.atoms()).cross_product < 1e-10);
    const auto q = random_povm(s, 3, rng);
    CHECK(measure_defects(q.atoms()).min_eigenvalue > -1e-10);
    CHECK(measure_defects(q.atoms()).sum_identity < 1e-10);
  }
}

TEST_CASE("additivity over unions") {
  SplitMix64 rng(4);
  const auto f = random_povm(line_space(4), 3, rng);
  const std::vector<std::size_t> all{0, 1, 2, 3};
  CHECK((f.value_on(all) - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  const std::vector<std::size_t> u{1, 3};
  CHECK((f.value_on(u) - f[1] - f[3]).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(f.value_on(std::span<const std::size_t>{}).isZero());
}

TEST_CASE("scalar measures") {
  const auto s = line_space(3);
  const std::vector<std::size_t> assign{1, 0, 2};
  const auto d = diagonal_pvm(s, assign);
  const auto m = scalar_measure(d, basis(3, 0), basis(3, 0));
  CHECK(m.re.weights == std::vector<double>{0, 1, 0});
  CHECK(m.total_variation() == doctest::Approx(1.0));

  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto f = t % 2 ? random_pvm(s, 4, rng) : random_povm(s, 4, rng);
    const CVector h = random_unit_vector(4, rng) * 1.7;
    const CVector g = random_unit_vector(4, rng) * 0.6;
    const auto hh = scalar_measure(f, h, h);
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(hh.re.weights[a] >= -1e-12);
      CHECK(std::abs(hh.im.weights[a]) < 1e-12);
    }
    CHECK(std::abs(hh.total() - h.squaredNorm()) < 1e-12);
    const auto gh = scalar_measure(f, g, h);
    CHECK(gh.total_variation() <= g.norm() * h.norm() + 1e-12);
    CHECK(std::abs(gh.total() - h.dot(g)) < 1e-12);
    CHECK(conjugate_symmetry_defect(f, g, h) < 1e-12);

    // Linear in the first slot, conjugate-linear in the second.
    const Complex alpha(0.3, -1.1);
    const auto ag = scalar_measure(f, alpha * g, h).values();
    const auto ga = scalar_measure(f, g, alpha * h).values();
    const auto base = gh.values();
    const CVector k = random_unit_vector(4, rng);
    const auto sum = scalar_measure(f, g + k, h).values();
    const auto gk = scalar_measure(f, k, h).values();
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(std::abs(ag[a] - alpha * base[a]) < 1e-12);
      CHECK(std::abs(ga[a] - std::conj(alpha) * base[a]) < 1e-12);
      CHECK(std::abs(sum[a] - base[a] - gk[a]) < 1e-12);
    }
  }
}

TEST_CASE("dimension mismatch in scalar measures") {
  const auto d = diagonal_pvm(line_space(2), std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(scalar_measure(d, basis(3, 0), basis(2, 0)), Error);
}

TEST_CASE("integration") {
  SplitMix64 rng(6);
  const auto s = line_space(4);
  const auto f = random_povm(s, 3, rng);
  const std::vector<Complex> lambda(4, Complex(2.0, -0.5));
  CHECK((integrate(lambda, f) - Complex(2.0, -0.5) * CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  const std::vector<double> indicator{0, 0, 1, 0};
  CHECK((integrate(indicator, f) - f[2]).cwiseAbs().maxCoeff() == 0.0);
  const std::vector<double> real_psi{0.3, -1.0, 2.0, 0.5};
  const CMatrix r = integrate(real_psi, f);
  CHECK(hermitian_defect(r) < 1e-12);
  CHECK(spectral_norm(r) <= 2.0 + 1e-12);

  const CVector g = random_unit_vector(3, rng);
  const CVector h = random_unit_vector(3, rng);
  std::vector<Complex> psi(4);
  for (auto& p : psi) p = Complex(rng.gaussian(), rng.gaussian());
  const auto gh = scalar_measure(f, g, h).values();
  Complex expected = 0;
  for (std::size_t a = 0; a < 4; ++a) expected += psi[a] * gh[a];
  CHECK(std::abs(h.dot(integrate(psi, f) * g) - expected) < 1e-12);
}

TEST_CASE("representation check separates PVMs from POVMs") {
  const auto s = line_space(3);
  SplitMix64 rng(7);
  const auto d = diagonal_pvm(s, std::vector<std::size_t>{0, 2, 1, 1});
  CHECK(representation_check(d).worst() < 1e-12);
  CHECK(representation_check(random_pvm(s, 4, rng)).worst() < 1e-12);

  const auto s2 = line_space(2);
  const auto half =
      validate_ovm(s2, MeasureKind::Positive, {CMatrix::Identity(2, 2) / 2.0, CMatrix::Identity(2, 2) / 2.0});
  const auto rep = representation_check(half);
  // f = 1_{a0}, g = 1_{a1}: int fg = 0 while (I/2)(I/2) = I/4.
  CHECK(rep.multiplicativity >= 0.25 - 1e-12);
  CHECK(rep.linearity < 1e-12);
  CHECK(rep.adjoint < 1e-12);
  CHECK(rep.unital < 1e-12);
}

TEST_CASE("unitary conjugation") {
  const auto s = line_space(2);
  const auto d = diagonal_pvm(s, std::vector<std::size_t>{0, 1});
  const auto same = conjugate(d, CMatrix::Identity(2, 2));
  CHECK(same.distance_max_abs(d) == 0.0);
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto swapped = conjugate(d, swap);
  CHECK(swapped.distance_max_abs(diagonal_pvm(s, std::vector<std::size_t>{1, 0})) == 0.0);
  SplitMix64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const CMatrix u = random_unitary(4, rng);
    const auto p = conjugate(random_pvm(line_space(3), 4, rng), u);
    CHECK(p.kind() == MeasureKind::Projection);
    const auto q = conjugate(random_povm(line_space(3), 4, rng), u);
    CHECK(q.kind() == MeasureKind::Positive);
  }
  CMatrix bad = CMatrix::Identity(2, 2) * 1.01;
  try {
    conjugate(d, bad);
    FAIL("expected NotUnitary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUnitary);
  }
}

TEST_CASE("polarization reconstructs the sesquilinear measure") {
  const auto s = line_space(3);
  const auto d = diagonal_pvm(s, std::vector<std::size_t>{0, 1, 2});
  const auto q = quadratic_form_oracle(d);
  const auto zero = polarize(q, basis(3, 0), basis(3, 1));
  CHECK(zero.total_variation() < 1e-15);

  SplitMix64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_povm(s, 4, rng);
    const auto oracle = quadratic_form_oracle(f);
    const CVector g = random_unit_vector(4, rng);
    const CVector h = random_unit_vector(4, rng);
    const auto p = polarize(oracle, g, h).values();
    const auto direct = scalar_measure(f, g, h).values();
    for (std::size_t a = 0; a < 3; ++a) CHECK(std::abs(p[a] - direct[a]) < 1e-12);
    const auto same = polarize(oracle, h, h);
    const auto hh = scalar_measure(f, h, h);
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(std::abs(same.im.weights[a]) < 1e-12);
      CHECK(std::abs(same.re.weights[a] - hh.re.weights[a]) < 1e-12);
    }
  }
}

TEST_CASE("equal quadratic forms on a polarization panel force equal PVMs") {
  SplitMix64 rng(10);
  const auto s = line_space(3);
  const auto e = diagonal_pvm(s, std::vector<std::size_t>{0, 1, 2});
  const CMatrix u = random_unitary(3, rng);
  const auto f = conjugate(e, u);
  auto panel_differs = [&](const OperatorValuedMeasure& a, const OperatorValuedMeasure& b) {
    double worst = 0.0;
    std::vector<CVector> panel;
    for (Eigen::Index i = 0; i < 3; ++i) panel.push_back(basis(3, i));
    for (Eigen::Index i = 0; i < 3; ++i) {
      for (Eigen::Index j = i + 1; j < 3; ++j) {
        panel.push_back(basis(3, i) + basis(3, j));
        panel.push_back(Complex(0, 1) * basis(3, i) + basis(3, j));
      }
    }
    for (const auto& h : panel) {
      const auto x = scalar_measure(a, h, h).re.weights;
      const auto y = scalar_measure(b, h, h).re.weights;
      for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
    }
    return worst;
  };
  CHECK(panel_differs(e, e) == 0.0);
  CHECK(panel_differs(e, f) > 1e-6);
  CHECK(e.distance_max_abs(f) > 1e-6);
}

TEST_CASE("measure kind names") {
  CHECK(parse_measure_kind("projection") == MeasureKind::Projection);
  CHECK(parse_measure_kind("positive") == MeasureKind::Positive);
  CHECK(to_string(MeasureKind::Positive) == "positive");
  CHECK_THROWS_AS(parse_measure_kind("pvm"), Error);
}
