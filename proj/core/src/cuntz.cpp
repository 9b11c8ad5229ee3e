#include "pvmk/cuntz.hpp"

#include "pvmk/error.hpp"

#include <algorithm>

namespace pvmk {

LevelIsometry s_matrix(const CuntzTower& ct, std::size_t branch, std::size_t level) {
  if (level < 1 || level > ct.depth()) {
    throw Error(ErrorCode::LevelOutOfRange, "S_i needs 1 <= k <= " + std::to_string(ct.depth()) + ", got " + std::to_string(level));
  }
  if (branch >= ct.branch_count()) throw Error(ErrorCode::BranchOutOfRange, "branch " + std::to_string(branch));
  const auto rows = static_cast<Eigen::Index>(ct.dimension(level));
  const auto cols = static_cast<Eigen::Index>(ct.dimension(level - 1));
  LevelIsometry s{branch, level, IntMatrix::Zero(rows, cols)};
  for (Eigen::Index c = 0; c < cols; ++c) {
    const auto r = static_cast<Eigen::Index>(ct.tower().prepend_index(branch, level - 1, static_cast<std::size_t>(c)));
    s.matrix(r, c) = 1;
  }
  return s;
}

namespace {

std::int64_t max_abs_int(const IntMatrix& m) { return m.size() == 0 ? 0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

CuntzReport cuntz_defects(std::span<const IntMatrix> isometries, std::size_t level) {
  CuntzReport report;
  report.level = level;
  if (isometries.empty()) return report;
  const Eigen::Index rows = isometries.front().rows();
  const Eigen::Index cols = isometries.front().cols();
  IntMatrix sum = IntMatrix::Zero(rows, rows);
  for (const auto& s : isometries) sum += s * s.transpose();
  report.sum_defect = max_abs_int(sum - IntMatrix::Identity(rows, rows));
  for (std::size_t i = 0; i < isometries.size(); ++i) {
    for (std::size_t j = 0; j < isometries.size(); ++j) {
      IntMatrix expected = IntMatrix::Zero(cols, cols);
      if (i == j) expected.setIdentity();
      report.ortho_defect = std::max(report.ortho_defect, max_abs_int(isometries[i].transpose() * isometries[j] - expected));
    }
  }
  return report;
}

CuntzReport cuntz_verify(const CuntzTower& ct, std::size_t level) {
  std::vector<IntMatrix> s;
  for (std::size_t i = 0; i < ct.branch_count(); ++i) s.push_back(s_matrix(ct, i, level).matrix);
  return cuntz_defects(s, level);
}

IntMatrix cylinder_projection(const CuntzTower& ct, const Word& word, std::size_t ambient) {
  if (ambient > ct.depth()) throw Error(ErrorCode::LevelOutOfRange, "ambient level beyond tower depth");
  if (word.size() > ambient) {
    throw Error(ErrorCode::WordTooLong, "word of length " + std::to_string(word.size()) + " at ambient level " +
                                            std::to_string(ambient));
  }
  const auto dim = static_cast<Eigen::Index>(ct.dimension(ambient));
  IntMatrix sa = IntMatrix::Identity(dim, dim);
  for (std::size_t t = 0; t < word.size(); ++t) sa = sa * s_matrix(ct, word[t], ambient - t).matrix;
  return sa * sa.transpose();
}

OperatorValuedMeasure multiplication_pvm(const CuntzTower& ct, std::size_t ambient) {
  const std::size_t dim = ct.dimension(ambient);
  std::vector<std::size_t> assignment(dim);
  for (std::size_t j = 0; j < dim; ++j) assignment[j] = j;
  return diagonal_pvm(ct.tower().space_ptr(ambient), assignment);
}

std::vector<std::size_t> descendants(const CuntzTower& ct, const Word& word, std::size_t ambient) {
  if (word.size() > ambient) throw Error(ErrorCode::WordTooLong, "word longer than ambient level");
  const std::size_t span = ct.dimension(ambient - word.size());
  const std::size_t first = ct.tower().index_of(word) * span;
  std::vector<std::size_t> out(span);
  for (std::size_t t = 0; t < span; ++t) out[t] = first + t;
  return out;
}

OperatorValuedMeasure coarse_grain(const CuntzTower& ct, const OperatorValuedMeasure& e, std::size_t ambient,
                                   std::size_t level) {
  if (level > ambient) throw Error(ErrorCode::LevelOutOfRange, "coarse level beyond ambient level");
  if (e.atom_count() != ct.dimension(ambient)) throw Error(ErrorCode::DimensionMismatch, "OVM is not on depth-K atoms");
  std::vector<CMatrix> coarse;
  for (const auto& w : ct.tower().words(level)) {
    const auto atoms = descendants(ct, w, ambient);
    coarse.push_back(e.value_on(atoms));
  }
  return validate_ovm(ct.tower().space_ptr(level), e.kind(), std::move(coarse));
}

}  // namespace pvmk
