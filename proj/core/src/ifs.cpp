#include "pvmk/ifs.hpp"

#include "pvmk/error.hpp"
#include "pvmk/rng.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

namespace pvmk {

IfsSystem::IfsSystem(std::vector<AffineBranch> branches, Rational base_point, std::optional<Rational> symbolic_theta)
    : branches_(std::move(branches)), base_point_(std::move(base_point)), theta_(std::move(symbolic_theta)) {
  if (branches_.size() < 2) throw Error(ErrorCode::InvalidIfs, "an IFS needs at least two branches");
  if (base_point_ < 0 || base_point_ >= 1) throw Error(ErrorCode::InvalidIfs, "base point outside [0,1)");
  contraction_ = 0;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const auto& b = branches_[i];
    if (b.ratio <= 0 || b.ratio >= 1) throw Error(ErrorCode::InvalidIfs, "branch " + std::to_string(i) + " ratio outside (0,1)");
    if (b.offset < 0 || b.offset + b.ratio > 1) {
      throw Error(ErrorCode::InvalidIfs, "branch " + std::to_string(i) + " maps [0,1] outside itself");
    }
    contraction_ = std::max(contraction_, b.ratio);
  }
  std::vector<std::size_t> order(branches_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return branches_[a].offset < branches_[b].offset; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& lo = branches_[order[k - 1]];
    const auto& hi = branches_[order[k]];
    if (lo.offset + lo.ratio > hi.offset) {
      throw Error(ErrorCode::OverlappingBranches, "images of branches " + std::to_string(order[k - 1]) + " and " +
                                                      std::to_string(order[k]) + " intersect");
    }
  }
  if (theta_) {
    if (*theta_ <= 0 || *theta_ >= 1) throw Error(ErrorCode::InvalidIfs, "symbolic theta outside (0,1)");
    contraction_ = *theta_;
  }
}

IfsSystem IfsSystem::uniform(std::size_t n) {
  std::vector<AffineBranch> b;
  for (std::size_t i = 0; i < n; ++i) {
    b.push_back({Rational(1, static_cast<long>(n)), Rational(static_cast<long>(i), static_cast<long>(n))});
  }
  return IfsSystem(std::move(b), Rational(0));
}

std::string word_label(const Word& w) {
  if (w.empty()) return "root";
  std::string s;
  bool wide = std::any_of(w.begin(), w.end(), [](auto c) { return c > 9; });
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i) s += '.';
    s += std::to_string(w[i]);
  }
  return s;
}

std::size_t CylinderTower::cell_count(std::size_t k) const { return level(k).words.size(); }

const CylinderTower::Level& CylinderTower::level(std::size_t k) const {
  if (k >= levels_.size()) {
    throw Error(ErrorCode::LevelOutOfRange, "level " + std::to_string(k) + " beyond depth " + std::to_string(depth()));
  }
  return levels_[k];
}

std::size_t CylinderTower::index_of(const Word& w) const {
  const std::size_t n = branch_count();
  std::size_t idx = 0;
  for (auto c : w) {
    if (c >= n) throw Error(ErrorCode::BranchOutOfRange, "symbol " + std::to_string(c));
    idx = idx * n + c;
  }
  return idx;
}

std::size_t CylinderTower::prepend_index(std::size_t branch, std::size_t k, std::size_t child) const {
  return branch * cell_count(k) + child;
}

CylinderTower build_tower(const IfsSystem& ifs, std::size_t depth, std::size_t cap) {
  const std::size_t n = ifs.branch_count();
  std::size_t cells = 1;
  for (std::size_t k = 0; k < depth; ++k) {
    if (cells > cap / n) throw Error(ErrorCode::TowerTooLarge, "N^K exceeds cap " + std::to_string(cap));
    cells *= n;
  }
  CylinderTower tower(ifs);
  tower.levels_.resize(depth + 1);
  tower.levels_[0].words = {Word{}};
  tower.levels_[0].points = {ifs.base_point()};
  for (std::size_t k = 1; k <= depth; ++k) {
    const auto& prev = tower.levels_[k - 1];
    auto& cur = tower.levels_[k];
    cur.words.reserve(prev.words.size() * n);
    cur.points.reserve(prev.words.size() * n);
    // Prepending branch i in the outer loop keeps level k in lexicographic order.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < prev.words.size(); ++c) {
        Word w;
        w.reserve(k);
        w.push_back(static_cast<std::uint32_t>(i));
        w.insert(w.end(), prev.words[c].begin(), prev.words[c].end());
        cur.words.push_back(std::move(w));
        cur.points.push_back(ifs.branch(i)(prev.points[c]));
      }
    }
  }
  for (auto& level : tower.levels_) {
    std::vector<std::string> ids;
    ids.reserve(level.words.size());
    for (const auto& w : level.words) ids.push_back(word_label(w));
    if (ifs.symbolic_theta()) {
      level.space = std::make_shared<const FiniteMetricSpace>(
          FiniteMetricSpace::ultrametric(std::move(ids), level.words, *ifs.symbolic_theta(), level.points));
    } else {
      level.space = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::on_line(std::move(ids), level.points));
    }
  }
  return tower;
}

ProbMeasure hutchinson_step(const CylinderTower& tower, std::size_t k, const ProbMeasure& nu) {
  if (k >= tower.depth()) {
    throw Error(ErrorCode::LevelOutOfRange, "hutchinson_step needs k < depth, got k=" + std::to_string(k));
  }
  const std::size_t cells = tower.cell_count(k);
  if (nu.size() != cells) throw Error(ErrorCode::DimensionMismatch, "measure does not live on level " + std::to_string(k));
  const std::size_t n = tower.branch_count();
  const Rational share(1, static_cast<long>(n));
  RationalVector out(cells * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < cells; ++c) out[tower.prepend_index(i, k, c)] = nu[c] * share;
  }
  return ProbMeasure(std::move(out));
}

HutchinsonFixed hutchinson_fixed(const CylinderTower& tower, std::size_t depth) {
  if (depth < 1 || depth > tower.depth()) throw Error(ErrorCode::LevelOutOfRange, "hutchinson_fixed needs 1 <= K <= depth");
  ProbMeasure uniform = ProbMeasure::uniform(tower.cell_count(depth));
  const ProbMeasure image = hutchinson_step(tower, depth - 1, ProbMeasure::uniform(tower.cell_count(depth - 1)));
  const bool certified = image == uniform;
  return {std::move(uniform), certified};
}

ProbMeasure random_prob_measure(std::size_t n, SplitMix64& rng, std::uint64_t max_numerator) {
  std::vector<long> raw(n);
  long total = 0;
  for (auto& r : raw) {
    r = static_cast<long>(rng.below(max_numerator + 1));
    total += r;
  }
  if (total == 0) {
    raw[rng.below(n)] = 1;
    total = 1;
  }
  RationalVector w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = Rational(raw[i], total);
  return ProbMeasure(std::move(w));
}

ScalarContraction contraction_ratio_scalar(const CylinderTower& tower, std::size_t k, std::size_t trials,
                                           std::uint64_t seed) {
  if (k >= tower.depth()) throw Error(ErrorCode::LevelOutOfRange, "contraction_ratio_scalar needs k < depth");
  ScalarContraction out;
  const std::size_t cells = tower.cell_count(k);
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::derive(seed, t);
    const ProbMeasure mu = random_prob_measure(cells, rng);
    const ProbMeasure nu = random_prob_measure(cells, rng);
    if (mu == nu) {
      ++out.skipped;
      continue;
    }
    const Rational before = kantorovich(tower.space(k), mu, nu).value;
    const Rational after =
        kantorovich(tower.space(k + 1), hutchinson_step(tower, k, mu), hutchinson_step(tower, k, nu)).value;
    out.max_ratio = std::max(out.max_ratio, Rational(after / before));
    ++out.evaluated;
  }
  return out;
}

}  // namespace pvmk
