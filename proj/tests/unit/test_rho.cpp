#include "doctest.h"

#include "oracles.hpp"
#include "pvmk/rho.hpp"

#include <memory>

using namespace pvmk;

namespace {

SpacePtr share(FiniteMetricSpace s) { return std::make_shared<const FiniteMetricSpace>(std::move(s)); }

SpacePtr two_points() { return share(FiniteMetricSpace::on_line({"0", "1/2"}, oracle::rationals({"0", "1/2"}))); }

}  // namespace

TEST_CASE("swapped diagonal on two points has rho 1/2") {
  const auto s = two_points();
  const auto e = diagonal_pvm(s, std::vector<std::size_t>{0, 1});
  const auto f = diagonal_pvm(s, std::vector<std::size_t>{1, 0});
  const auto r = rho_exact(e, f);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(r.exact_value);
  CHECK(*r.exact_value == Rational(1, 2));
  CHECK(rho_objective(e, f, r.witness_phi.values_double()) == doctest::Approx(r.value));
  CHECK(r.witness_vector.norm() == doctest::Approx(1.0));
  CHECK(rho_exact(e, e).value == 0.0);

  const auto v = lip1_vertices(*s);
  const auto sphere = rho_lower_sphere(e, f, v, 4, 1);
  CHECK(sphere.value == doctest::Approx(0.5));
  CHECK(sphere.value <= r.value + 1e-10);
  CHECK(rho_lower_sphere(e, e, v, 4, 1).value == 0.0);

  const auto grid = rho_lower_grid(e, f, 1000, 3);
  CHECK(grid.value <= 0.5 + 1e-10);
  CHECK(grid.value >= 0.45);
  const std::vector<double> zero(2, 0.0);
  CHECK(rho_objective(e, f, zero) == 0.0);
}

TEST_CASE("commuting diagonal pairs match the closed form") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(seed);
    const std::size_t n = 2 + rng.below(4);
    const auto s = share(oracle::random_metric_space(n, rng));
    const std::size_t dim = 1 + rng.below(4);
    std::vector<std::size_t> a(dim), b(dim);
    Rational expected = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      a[j] = rng.below(n);
      b[j] = rng.below(n);
      expected = std::max(expected, s->dist(a[j], b[j]));
    }
    const auto r = rho_exact(diagonal_pvm(s, a), diagonal_pvm(s, b));
    CHECK(r.value == doctest::Approx(to_double(expected)).epsilon(1e-12));
    REQUIRE(r.exact_value);
    CHECK(*r.exact_value == expected);
  }
}

TEST_CASE("objective invariances: constants, negation") {
  SplitMix64 rng(2);
  const auto s = share(oracle::random_metric_space(4, rng));
  const auto e = random_pvm(s, 3, rng);
  const auto f = random_povm(s, 3, rng);
  std::vector<double> phi{0.0, 0.7, -0.2, 1.1};
  const double base = rho_objective(e, f, phi);
  auto shifted = phi;
  for (auto& x : shifted) x += 3.25;
  auto neg = phi;
  for (auto& x : neg) x = -x;
  CHECK(rho_objective(e, f, shifted) == doctest::Approx(base).epsilon(1e-12));
  CHECK(rho_objective(e, f, neg) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("method monotonicity and exchange identity on small random instances") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    SplitMix64 rng(seed + 40);
    const std::size_t n = 2 + rng.below(3);
    const auto s = share(oracle::random_metric_space(n, rng));
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.below(4));
    const auto e = random_pvm(s, dim, rng);
    const auto f = seed % 2 ? random_povm(s, dim, rng) : random_pvm(s, dim, rng);
    const auto v = lip1_vertices(*s);
    const double exact = rho_exact(e, f, v).value;
    const double sphere = rho_lower_sphere(e, f, v, 200, seed).value;
    const double grid = rho_lower_grid(e, f, 300, seed).value;
    CHECK(sphere <= exact + 1e-10);
    CHECK(grid <= exact + 1e-10);
    CHECK(std::abs(exact - sphere) <= 1e-4);
  }
}

TEST_CASE("metric axioms on random triples") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SplitMix64 rng(seed + 70);
    const auto s = share(oracle::random_metric_space(2 + rng.below(3), rng));
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.below(4));
    const auto e = random_pvm(s, dim, rng);
    const auto f = random_povm(s, dim, rng);
    const auto g = random_pvm(s, dim, rng);
    const auto report = metric_axiom_suite(e, f, g, lip1_vertices(*s));
    CHECK(report.passed());
    CHECK(report.triangle_excess <= 1e-9);
    const auto same = metric_axiom_suite(e, e, e, lip1_vertices(*s));
    CHECK(same.passed());
    CHECK(same.rho_ef == 0.0);
  }
}

TEST_CASE("swap pair stays within 2 diam") {
  const auto s = two_points();
  const auto e = diagonal_pvm(s, std::vector<std::size_t>{0, 1});
  const auto f = diagonal_pvm(s, std::vector<std::size_t>{1, 0});
  const auto r = metric_axiom_suite(e, f, e, lip1_vertices(*s));
  CHECK(r.passed());
  CHECK(r.rho_ef == doctest::Approx(0.5));
  CHECK(r.within_diameter);
}

TEST_CASE("unitary invariance") {
  SplitMix64 rng(5);
  const auto s = share(oracle::random_metric_space(4, rng));
  for (int t = 0; t < 5; ++t) {
    const auto e = random_pvm(s, 4, rng);
    const auto f = random_povm(s, 4, rng);
    const CMatrix u = random_unitary(4, rng);
    CHECK(std::abs(rho_exact(conjugate(e, u), conjugate(f, u)).value - rho_exact(e, f).value) <= 1e-9);
  }
}

TEST_CASE("topology bounds") {
  SplitMix64 rng(6);
  const auto s = share(oracle::random_metric_space(4, rng));
  const auto v = lip1_vertices(*s);
  const auto e = random_pvm(s, 3, rng);
  const auto f = random_povm(s, 3, rng);
  const std::vector<double> constant(4, 1.5);
  const auto c = topology_bounds(constant, e, f, v);
  CHECK(c.integral_gap < 1e-12);
  CHECK(c.passed());
  const auto same = topology_bounds(constant, e, e, v);
  CHECK(same.rho == 0.0);
  CHECK(same.total_variation_bound == 0.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> g(4);
    for (auto& x : g) x = rng.uniform(-2, 2);
    CHECK(topology_bounds(g, random_pvm(s, 3, rng), random_povm(s, 3, rng), v).passed());
  }
}

TEST_CASE("rho input errors") {
  const auto s = two_points();
  const auto e = diagonal_pvm(s, std::vector<std::size_t>{0, 1});
  const auto wide = diagonal_pvm(s, std::vector<std::size_t>{0, 1, 1});
  try {
    rho_exact(e, wide);
    FAIL("expected MismatchedMeasures");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::MismatchedMeasures);
  }
  const auto other = oracle::table_space({{"0", "1"}, {"1", "0"}});
  try {
    rho_exact(e, e, lip1_vertices(other));
    FAIL("expected StaleVertexSet");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::StaleVertexSet);
  }
  CHECK(parse_rho_method("sphere") == RhoMethod::Sphere);
  CHECK_THROWS_AS(parse_rho_method("exact"), Error);
}
