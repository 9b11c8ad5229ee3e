#include "doctest.h"

#include "oracles.hpp"
#include "pvmk/ifs.hpp"

#include <functional>

using namespace pvmk;

namespace {

IfsSystem three_quarter() {
  std::vector<AffineBranch> b;
  for (int i = 0; i < 3; ++i) b.push_back({Rational(1, 4), Rational(3 * i, 8)});
  return IfsSystem(b, 0);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::MalformedInput;
}

}  // namespace

TEST_CASE("IFS validation") {
  CHECK(code_of([] { IfsSystem({{Rational(1, 2), 0}}, 0); }) == ErrorCode::InvalidIfs);
  CHECK(code_of([] { IfsSystem({{Rational(1), 0}, {Rational(1, 2), Rational(1, 2)}}, 0); }) == ErrorCode::InvalidIfs);
  CHECK(code_of([] { IfsSystem({{Rational(1, 2), 0}, {Rational(1, 2), Rational(3, 4)}}, 0); }) ==
        ErrorCode::InvalidIfs);
  CHECK(code_of([] { IfsSystem({{Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 4)}}, 0); }) ==
        ErrorCode::OverlappingBranches);
  CHECK(code_of([] { IfsSystem({{Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2)}}, 1); }) ==
        ErrorCode::InvalidIfs);
  CHECK(code_of([] { IfsSystem({{Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2)}}, 0, Rational(1)); }) ==
        ErrorCode::InvalidIfs);
  CHECK_NOTHROW(IfsSystem::uniform(2));
  CHECK(three_quarter().contraction_constant() == Rational(1, 4));
  CHECK(IfsSystem({{Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2)}}, 0, Rational(1, 3)).contraction_constant() ==
        Rational(1, 3));
}

TEST_CASE("dyadic tower representatives") {
  const auto t = build_tower(IfsSystem::uniform(2), 2);
  CHECK(t.representatives(2) == oracle::rationals({"0", "1/4", "1/2", "3/4"}));
  CHECK(t.words(2) == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(t.cell_count(0) == 1);
  CHECK(t.words(0) == std::vector<Word>{Word{}});
  CHECK(t.representatives(0) == oracle::rationals({"0"}));
  CHECK(word_label({}) == "root");
  CHECK(word_label({1, 0}) == "10");
}

TEST_CASE("three-branch tower with gaps") {
  const auto t = build_tower(three_quarter(), 1);
  CHECK(t.representatives(1) == oracle::rationals({"0", "3/8", "3/4"}));
}

TEST_CASE("tower coherence and distance scaling") {
  for (const auto& ifs : {IfsSystem::uniform(2), IfsSystem::uniform(3), three_quarter()}) {
    const auto t = build_tower(ifs, 3);
    const std::size_t n = t.branch_count();
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(t.cell_count(k + 1) == t.cell_count(k) * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < t.cell_count(k); ++c) {
          const std::size_t child = t.prepend_index(i, k, c);
          Word w{static_cast<std::uint32_t>(i)};
          const auto& tail = t.words(k)[c];
          w.insert(w.end(), tail.begin(), tail.end());
          CHECK(t.words(k + 1)[child] == w);
          CHECK(t.index_of(w) == child);
          CHECK(t.representatives(k + 1)[child] == ifs.branch(i)(t.representatives(k)[c]));
          for (std::size_t d = 0; d < t.cell_count(k); ++d) {
            CHECK(t.space(k + 1).dist(child, t.prepend_index(i, k, d)) == ifs.branch(i).ratio * t.space(k).dist(c, d));
          }
        }
      }
    }
  }
}

TEST_CASE("symbolic metric levels are ultrametric") {
  const IfsSystem ifs({{Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2)}}, 0, Rational(1, 3));
  const auto t = build_tower(ifs, 2);
  CHECK(t.space(2).dist(0, 1) == Rational(1, 3));
  CHECK(t.space(2).dist(0, 3) == 1);
}

TEST_CASE("tower size cap") {
  CHECK(code_of([] { build_tower(IfsSystem::uniform(2), 13); }) == ErrorCode::TowerTooLarge);
  CHECK(build_tower(IfsSystem::uniform(2), 12).cell_count(12) == 4096);
}

TEST_CASE("Hutchinson step") {
  const auto t = build_tower(IfsSystem::uniform(2), 3);
  CHECK(hutchinson_step(t, 1, ProbMeasure::uniform(2)) == ProbMeasure::uniform(4));
  const auto tmu = hutchinson_step(t, 1, ProbMeasure::dirac(2, 0));
  const auto tnu = hutchinson_step(t, 1, ProbMeasure::dirac(2, 1));
  // Cells 00, 10 hold representatives 0, 1/2; cells 01, 11 hold 1/4, 3/4.
  CHECK(tmu.weights() == oracle::rationals({"1/2", "0", "1/2", "0"}));
  CHECK(tnu.weights() == oracle::rationals({"0", "1/2", "0", "1/2"}));
  CHECK(code_of([&] { hutchinson_step(t, 3, ProbMeasure::uniform(8)); }) == ErrorCode::LevelOutOfRange);

  SplitMix64 rng(1);
  const auto t3 = build_tower(IfsSystem::uniform(3), 2);
  const auto nu = random_prob_measure(3, rng);
  const auto step = hutchinson_step(t3, 1, nu);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(step[t3.prepend_index(i, 1, c)] == nu[c] / 3);
  }
}

TEST_CASE("Hutchinson fixed point is uniform and certified") {
  const auto d = hutchinson_fixed(build_tower(IfsSystem::uniform(2), 3), 3);
  CHECK(d.certified);
  CHECK(d.measure == ProbMeasure::uniform(8));
  const auto t = hutchinson_fixed(build_tower(IfsSystem::uniform(3), 2), 2);
  CHECK(t.certified);
  CHECK(t.measure[4] == Rational(1, 9));
  CHECK(hutchinson_fixed(build_tower(three_quarter(), 1), 1).measure == ProbMeasure::uniform(3));
}

TEST_CASE("scalar contraction: tight dyadic pair and random sweeps") {
  const auto t = build_tower(IfsSystem::uniform(2), 3);
  const auto h1 = kantorovich(t.space(1), ProbMeasure::dirac(2, 0), ProbMeasure::dirac(2, 1)).value;
  const auto h2 = kantorovich(t.space(2), hutchinson_step(t, 1, ProbMeasure::dirac(2, 0)),
                              hutchinson_step(t, 1, ProbMeasure::dirac(2, 1)))
                      .value;
  CHECK(h1 == Rational(1, 2));
  CHECK(h2 == Rational(1, 4));
  for (std::size_t k = 1; k < 3; ++k) {
    const auto c = contraction_ratio_scalar(t, k, 40, 5);
    CHECK(c.max_ratio <= Rational(1, 2));
    CHECK(c.evaluated + c.skipped == 40);
  }
  const auto g = build_tower(three_quarter(), 2);
  CHECK(contraction_ratio_scalar(g, 1, 40, 6).max_ratio <= Rational(1, 4));
}

TEST_CASE("iterated Hutchinson decays towards uniform by at most r per step") {
  const auto t = build_tower(IfsSystem::uniform(2), 4);
  SplitMix64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    // Start anywhere at level 0..: level 1 measure, push to level 4, compare with the lift of uniform.
    ProbMeasure nu = random_prob_measure(2, rng);
    ProbMeasure u = ProbMeasure::uniform(2);
    Rational prev = kantorovich(t.space(1), nu, u).value;
    for (std::size_t k = 1; k < 4; ++k) {
      nu = hutchinson_step(t, k, nu);
      u = hutchinson_step(t, k, u);
      const Rational now = kantorovich(t.space(k + 1), nu, u).value;
      CHECK(now <= prev / 2);
      prev = now;
    }
  }
}
