#pragma once

#include "pvmk/metric_space.hpp"
#include "pvmk/rational.hpp"
#include "pvmk/rng.hpp"
#include "pvmk/transport.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pvmk {

/// x -> ratio * x + offset on [0, 1].
struct AffineBranch {
  Rational ratio;
  Rational offset;

  Rational operator()(const Rational& x) const { return ratio * x + offset; }
};

/// Contractive IFS on X = [0,1) whose branch images [b_i, b_i + r_i) are
/// pairwise disjoint. The base point lies in [0,1), so every representative
/// sigma_a(x*) sits strictly inside one image and "drop the first symbol" is
/// a well-defined left inverse. With a symbolic metric the level spaces use
/// theta^lcp(a,b) on words instead of the coordinate distance, and theta is
/// the contraction constant.
class IfsSystem {
 public:
  /// Throws InvalidIfs (N < 2, ratio outside (0,1), image outside [0,1],
  /// base point outside [0,1), theta outside (0,1)) or OverlappingBranches
  /// (two half-open images intersect).
  IfsSystem(std::vector<AffineBranch> branches, Rational base_point, std::optional<Rational> symbolic_theta = {});

  /// sigma_i(x) = x/N + i/N, base point 0.
  static IfsSystem uniform(std::size_t n);

  std::size_t branch_count() const noexcept { return branches_.size(); }
  const std::vector<AffineBranch>& branches() const noexcept { return branches_; }
  const AffineBranch& branch(std::size_t i) const { return branches_.at(i); }
  const Rational& base_point() const noexcept { return base_point_; }
  const std::optional<Rational>& symbolic_theta() const noexcept { return theta_; }

  /// r = max r_i, or theta under the symbolic metric.
  const Rational& contraction_constant() const noexcept { return contraction_; }

 private:
  std::vector<AffineBranch> branches_;
  Rational base_point_;
  std::optional<Rational> theta_;
  Rational contraction_;
};

using Word = std::vector<std::uint32_t>;

std::string word_label(const Word& w);

inline constexpr std::size_t kDefaultTowerCap = 4096;

/// Levels X_0..X_K of cylinder representatives. Words at level k are listed
/// lexicographically, so word a = (a_1..a_k) sits at index sum a_j N^(k-j),
/// and x_a = sigma_{a_1} o ... o sigma_{a_k}(x*).
class CylinderTower {
 public:
  std::size_t depth() const noexcept { return levels_.size() - 1; }
  std::size_t branch_count() const noexcept { return ifs_.branch_count(); }
  const IfsSystem& ifs() const noexcept { return ifs_; }

  std::size_t cell_count(std::size_t k) const;
  const std::vector<Word>& words(std::size_t k) const { return level(k).words; }
  const RationalVector& representatives(std::size_t k) const { return level(k).points; }
  const FiniteMetricSpace& space(std::size_t k) const { return *level(k).space; }
  SpacePtr space_ptr(std::size_t k) const { return level(k).space; }

  std::size_t index_of(const Word& w) const;
  /// Index of i.c at level k+1 where c has index `child` at level k.
  std::size_t prepend_index(std::size_t branch, std::size_t k, std::size_t child) const;

 private:
  friend CylinderTower build_tower(const IfsSystem&, std::size_t, std::size_t);

  struct Level {
    std::vector<Word> words;
    RationalVector points;
    SpacePtr space;
  };

  explicit CylinderTower(IfsSystem ifs) : ifs_(std::move(ifs)) {}
  const Level& level(std::size_t k) const;

  IfsSystem ifs_;
  std::vector<Level> levels_;
};

/// Throws TowerTooLarge when N^K > cap.
CylinderTower build_tower(const IfsSystem& ifs, std::size_t depth, std::size_t cap = kDefaultTowerCap);

/// (T nu)(i.c) = nu(c) / N, from level k to level k+1.
ProbMeasure hutchinson_step(const CylinderTower& tower, std::size_t k, const ProbMeasure& nu);

struct HutchinsonFixed {
  ProbMeasure measure;
  bool certified = false;  // T(uniform at K-1) == uniform at K, exactly
};

HutchinsonFixed hutchinson_fixed(const CylinderTower& tower, std::size_t depth);

struct ScalarContraction {
  Rational max_ratio = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // mu == nu
};

/// max over sampled pairs at level k of H_{k+1}(T mu, T nu) / H_k(mu, nu), exact.
ScalarContraction contraction_ratio_scalar(const CylinderTower& tower, std::size_t k, std::size_t trials,
                                           std::uint64_t seed);

/// Random probability vector with small integer numerators over a common denominator.
ProbMeasure random_prob_measure(std::size_t n, SplitMix64& rng, std::uint64_t max_numerator = 9);

}  // namespace pvmk
