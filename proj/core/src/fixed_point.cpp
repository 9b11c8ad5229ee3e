#include "pvmk/fixed_point.hpp"

#include "pvmk/error.hpp"
#include "pvmk/rng.hpp"

#include <algorithm>
#include <cmath>

namespace pvmk {

std::string_view to_string(SeedKind kind) noexcept {
  switch (kind) {
    case SeedKind::Truth: return "truth";
    case SeedKind::Swapped: return "swapped";
    case SeedKind::RandomPvm: return "random-pvm";
    case SeedKind::RandomPovm: return "random-povm";
  }
  return "truth";
}

SeedKind parse_seed_kind(std::string_view text) {
  if (text == "truth") return SeedKind::Truth;
  if (text == "swapped") return SeedKind::Swapped;
  if (text == "random-pvm") return SeedKind::RandomPvm;
  if (text == "random-povm") return SeedKind::RandomPovm;
  throw Error(ErrorCode::MalformedInput, "seed kind must be truth|swapped|random-pvm|random-povm");
}

OperatorValuedMeasure phi_step(const CuntzTower& ct, std::size_t level, const OperatorValuedMeasure& e) {
  if (level < 1 || level > ct.depth()) {
    throw Error(ErrorCode::LevelOutOfRange, "phi_step target level must be in [1, " + std::to_string(ct.depth()) + "]");
  }
  const CylinderTower& tower = ct.tower();
  const std::size_t source_cells = tower.cell_count(level - 1);
  if (e.atom_count() != source_cells || e.space().hash() != tower.space(level - 1).hash() ||
      static_cast<std::size_t>(e.dim()) != ct.dimension(level - 1)) {
    throw Error(ErrorCode::DimensionMismatch, "phi_step input must live on level " + std::to_string(level - 1));
  }
  std::vector<CMatrix> out(tower.cell_count(level));
  for (std::size_t i = 0; i < ct.branch_count(); ++i) {
    const CMatrix s = to_complex(s_matrix(ct, i, level).matrix);
    for (std::size_t c = 0; c < source_cells; ++c) out[tower.prepend_index(i, level - 1, c)] = s * e[c] * s.adjoint();
  }
  try {
    return validate_ovm(tower.space_ptr(level), e.kind(), std::move(out), 1e-9);
  } catch (const OvmValidationError& err) {
    throw Error(ErrorCode::KindViolation, std::string("Phi broke the measure axioms: ") + err.what());
  }
}

OperatorValuedMeasure make_seed(const CuntzTower& ct, std::size_t level, SeedKind kind, std::uint64_t seed) {
  const std::size_t dim = ct.dimension(level);
  SplitMix64 rng(seed);
  switch (kind) {
    case SeedKind::Truth:
      return multiplication_pvm(ct, level);
    case SeedKind::Swapped: {
      std::vector<std::size_t> assignment(dim);
      const std::size_t n = ct.branch_count();
      for (std::size_t j = 0; j < dim; ++j) {
        // Basis vector j goes to the atom whose last symbol is one less (mod N).
        assignment[j] = level == 0 ? j : j - (j % n) + (j % n + n - 1) % n;
      }
      return diagonal_pvm(ct.tower().space_ptr(level), assignment);
    }
    case SeedKind::RandomPvm:
      return conjugate(multiplication_pvm(ct, level), random_unitary(static_cast<Eigen::Index>(dim), rng));
    case SeedKind::RandomPovm:
      return random_povm(ct.tower().space_ptr(level), static_cast<Eigen::Index>(dim), rng);
  }
  return multiplication_pvm(ct, level);
}

namespace {

bool cylinders_match_projections(const CuntzTower& ct, const OperatorValuedMeasure& e, std::size_t ambient,
                                 std::size_t max_depth, double tol) {
  for (std::size_t k = 0; k <= max_depth; ++k) {
    for (const auto& w : ct.tower().words(k)) {
      const CMatrix value = e.value_on(descendants(ct, w, ambient));
      if (max_abs(value - to_complex(cylinder_projection(ct, w, ambient))) > tol) return false;
    }
  }
  return true;
}

}  // namespace

PhiTrace phi_iterate(const CuntzTower& ct, const OperatorValuedMeasure& seed, std::size_t seed_level,
                     std::size_t steps, std::string seed_description, std::size_t vertex_cap) {
  if (seed_level + steps > ct.depth()) {
    throw Error(ErrorCode::LevelOutOfRange, "seed level + steps exceeds tower depth " + std::to_string(ct.depth()));
  }
  const double r = to_double(ct.tower().ifs().contraction_constant());
  PhiTrace trace{std::move(seed_description), {}, seed, r};
  const auto rho_to_truth = [&](const OperatorValuedMeasure& e, std::size_t level) {
    const auto vertices = lip1_vertices(ct.tower().space(level), 0, vertex_cap);
    return rho_exact(e, multiplication_pvm(ct, level), vertices).value;
  };
  trace.steps.push_back({0, seed_level, rho_to_truth(seed, seed_level), std::nullopt});
  for (std::size_t t = 1; t <= steps; ++t) {
    const std::size_t level = seed_level + t;
    trace.final_measure = phi_step(ct, level, trace.final_measure);
    if (trace.final_measure.kind() != seed.kind()) trace.kind_preserved = false;
    PhiStepRecord rec{t, level, rho_to_truth(trace.final_measure, level), std::nullopt};
    const double previous = trace.steps.back().rho_to_truth;
    if (previous > 1e-12) rec.ratio = rec.rho_to_truth / previous;
    if (rec.rho_to_truth > r * previous + 1e-8) trace.decay_ok = false;
    trace.steps.push_back(rec);
  }
  // Exact when the seed sums to the identity exactly; float seeds carry their rounding through S_a (.) S_a*.
  const CMatrix total = seed.value_on(descendants(ct, {}, seed_level));
  const double tol = total == CMatrix::Identity(seed.dim(), seed.dim()) ? 0.0 : 1e-12;
  trace.seed_independent = cylinders_match_projections(ct, trace.final_measure, seed_level + steps,
                                                       std::min(steps, seed_level + steps), tol);
  return trace;
}

FixedPointReport verify_fixed_point(const CuntzTower& ct, std::size_t depth,
                                    const std::optional<OperatorValuedMeasure>& candidate) {
  if (depth > ct.depth()) throw Error(ErrorCode::LevelOutOfRange, "verification depth beyond tower depth");
  FixedPointReport report;
  report.depth = depth;
  const OperatorValuedMeasure fixed = candidate ? *candidate : multiplication_pvm(ct, depth);
  if (fixed.atom_count() != ct.dimension(depth) || static_cast<std::size_t>(fixed.dim()) != ct.dimension(depth)) {
    throw Error(ErrorCode::DimensionMismatch, "candidate OVM is not on depth-K atoms");
  }

  // Route 2: iterate Phi from the only OVM at level 0, E_0(X) = 1.
  OperatorValuedMeasure iterate = multiplication_pvm(ct, 0);
  for (std::size_t k = 1; k <= depth; ++k) iterate = phi_step(ct, k, iterate);

  for (std::size_t k = 0; k <= depth; ++k) {
    for (const auto& w : ct.tower().words(k)) {
      ++report.words_checked;
      const auto atoms = descendants(ct, w, depth);
      const CMatrix projection = to_complex(cylinder_projection(ct, w, depth));
      const double direct = max_abs(fixed.value_on(atoms) - projection);
      if (direct != 0.0) report.defects.push_back({w, "coarse-grain", direct});
      const double iterated = max_abs(iterate.value_on(atoms) - projection);
      if (iterated != 0.0) report.defects.push_back({w, "phi-iteration", iterated});
    }
  }
  for (std::size_t a = 0; a < fixed.atom_count(); ++a) {
    const double d = max_abs(fixed[a] - iterate[a]);
    if (d != 0.0) report.defects.push_back({ct.tower().words(depth)[a], "atom-equality", d});
  }
  return report;
}

RhoContraction contraction_ratio_rho(const CuntzTower& ct, std::size_t level, std::size_t trials, std::uint64_t seed,
                                     MeasureKind kind, std::size_t vertex_cap) {
  if (level < 1 || level > ct.depth()) throw Error(ErrorCode::LevelOutOfRange, "contraction level out of range");
  RhoContraction out;
  out.level = level;
  const double r = to_double(ct.tower().ifs().contraction_constant());
  const auto before_vertices = lip1_vertices(ct.tower().space(level - 1), 0, vertex_cap);
  const auto after_vertices = lip1_vertices(ct.tower().space(level), 0, vertex_cap);
  const SeedKind seed_kind = kind == MeasureKind::Projection ? SeedKind::RandomPvm : SeedKind::RandomPovm;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t base = SplitMix64::derive(seed, t).next_u64();
    const auto e = make_seed(ct, level - 1, seed_kind, base);
    const auto f = make_seed(ct, level - 1, seed_kind, base ^ 0x5bd1e995ULL);
    const double before = rho_exact(e, f, before_vertices).value;
    if (before <= 1e-12) {
      ++out.skipped;
      continue;
    }
    const double after = rho_exact(phi_step(ct, level, e), phi_step(ct, level, f), after_vertices).value;
    const double ratio = after / before;
    out.max_ratio = std::max(out.max_ratio, ratio);
    if (after > r * before + 1e-8) out.within_bound = false;
    ++out.evaluated;
  }
  return out;
}

namespace {

std::size_t numeric_rank(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  return rank;
}

}  // namespace

RelateReport relate_verify(const CuntzTower& ct, std::size_t depth, const CVector& h, double tol) {
  const auto dim = static_cast<Eigen::Index>(ct.dimension(depth));
  if (h.size() != dim) throw Error(ErrorCode::DimensionMismatch, "h must have dimension N^K");
  if (std::abs(h.norm() - 1.0) > 1e-12) throw Error(ErrorCode::MalformedInput, "h must be a unit vector");
  const OperatorValuedMeasure e = multiplication_pvm(ct, depth);
  const auto mass = scalar_measure(e, h, h).re.weights;

  std::vector<std::size_t> support;
  for (std::size_t a = 0; a < mass.size(); ++a) {
    if (mass[a] > 0.0) support.push_back(a);
  }
  if (support.empty()) throw Error(ErrorCode::ZeroMassEverywhere, "h has no mass on any atom");

  RelateReport report;
  report.tolerance = tol;
  report.support = support.size();
  const auto m = static_cast<Eigen::Index>(support.size());

  // Columns: images V(1_a) = E(a) h. In the orthonormal basis 1_a / sqrt(mass_a)
  // of the weighted space, V is W = columns / sqrt(mass).
  CMatrix images(dim, m);
  CMatrix w(dim, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const std::size_t a = support[static_cast<std::size_t>(c)];
    images.col(c) = e[a] * h;
    w.col(c) = images.col(c) / std::sqrt(mass[a]);
  }
  CMatrix expected_gram = CMatrix::Zero(m, m);
  for (Eigen::Index c = 0; c < m; ++c) expected_gram(c, c) = mass[support[static_cast<std::size_t>(c)]];
  report.isometry_defect = max_abs(images.adjoint() * images - expected_gram);

  std::vector<CVector> cyclic;
  for (std::size_t k = 0; k <= depth; ++k) {
    for (const auto& word : ct.tower().words(k)) {
      const CMatrix p = to_complex(cylinder_projection(ct, word, depth));
      const auto inside = descendants(ct, word, depth);
      CVector v_of_indicator = CVector::Zero(dim);
      CMatrix indicator = CMatrix::Zero(m, m);
      for (Eigen::Index c = 0; c < m; ++c) {
        const std::size_t a = support[static_cast<std::size_t>(c)];
        if (std::binary_search(inside.begin(), inside.end(), a)) {
          v_of_indicator += images.col(c);
          indicator(c, c) = 1.0;
        }
      }
      const CVector ph = p * h;
      report.cylinder_defect = std::max(report.cylinder_defect, (v_of_indicator - ph).cwiseAbs().maxCoeff());
      report.intertwining_defect = std::max(report.intertwining_defect, max_abs(w.adjoint() * p * w - indicator));
      cyclic.push_back(ph);
    }
  }
  CMatrix span(dim, static_cast<Eigen::Index>(cyclic.size()));
  for (std::size_t c = 0; c < cyclic.size(); ++c) span.col(static_cast<Eigen::Index>(c)) = cyclic[c];
  CMatrix joint(dim, w.cols() + span.cols());
  joint << w, span;
  const double rank_tol = 1e-9;
  report.range_rank = numeric_rank(w, rank_tol);
  report.cyclic_rank = numeric_rank(span, rank_tol);
  report.joint_rank = numeric_rank(joint, rank_tol);
  return report;
}

}  // namespace pvmk
