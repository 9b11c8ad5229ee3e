#include "commands.hpp"

#include "json_io.hpp"

#include "pvmk/cuntz.hpp"
#include "pvmk/error.hpp"
#include "pvmk/fixed_point.hpp"
#include "pvmk/ifs.hpp"
#include "pvmk/rho.hpp"
#include "pvmk/transport.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

namespace pvmk::cli {

namespace {

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void require_path(const std::string& path, const char* flag) {
  if (path.empty()) throw Error(ErrorCode::MalformedInput, std::string("missing required option ") + flag);
}

SpacePtr load_space(const std::string& path) {
  require_path(path, "--space");
  return std::make_shared<const FiniteMetricSpace>(validate_space(read_space(read_document(path))));
}

IfsSystem load_ifs(const std::string& path) {
  require_path(path, "--ifs");
  return read_ifs(read_document(path));
}

CuntzTower load_tower(const Options& o) { return CuntzTower(build_tower(load_ifs(o.ifs), o.depth)); }

OperatorValuedMeasure load_ovm(const std::string& path, const char* flag, const SpacePtr& space) {
  require_path(path, flag);
  return bind_ovm(read_ovm(read_document(path)), space);
}

Ordered lipschitz_json(const LipschitzFunction& f) {
  return Ordered{{"values", rational_array(f.values)}, {"lipschitz_constant", rational_json(f.constant)}};
}

Ordered violations_json(const std::vector<AxiomViolation>& v) {
  Ordered a = Ordered::array();
  for (const auto& x : v) {
    a.push_back(Ordered{{"code", std::string(to_string(x.code))},
                        {"i", x.i},
                        {"j", x.j},
                        {"k", x.k},
                        {"description", x.describe()}});
  }
  return a;
}

Ordered violations_json(const std::vector<OvmViolation>& v) {
  Ordered a = Ordered::array();
  for (const auto& x : v) {
    a.push_back(Ordered{{"code", std::string(to_string(x.code))},
                        {"atom", x.atom},
                        {"other", x.other},
                        {"magnitude", x.magnitude},
                        {"description", x.describe()}});
  }
  return a;
}

Ordered optional_ratio(const std::optional<double>& r) { return r ? Ordered(*r) : Ordered(nullptr); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Ordered cuntz_levels(const CuntzTower& ct, std::vector<Verdict>& verdicts) {
  Ordered levels = Ordered::array();
  for (std::size_t k = 1; k <= ct.depth(); ++k) {
    const auto r = cuntz_verify(ct, k);
    levels.push_back(Ordered{{"level", k}, {"sum_defect", r.sum_defect}, {"ortho_defect", r.ortho_defect}});
    verdicts.push_back({"cuntz relations at level " + std::to_string(k), r.passed(), 0.0, ""});
  }
  return levels;
}

Ordered hutchinson_section(const CylinderTower& t, std::size_t trials, std::uint64_t seed,
                           std::vector<Verdict>& verdicts) {
  const Rational r = t.ifs().contraction_constant();
  Ordered fixed = Ordered::array();
  for (std::size_t k = 1; k <= t.depth(); ++k) {
    const auto h = hutchinson_fixed(t, k);
    fixed.push_back(Ordered{{"level", k}, {"cell_weight", rational_json(h.measure[0])}, {"certified", h.certified}});
    verdicts.push_back({"uniform measure T-invariant at level " + std::to_string(k), h.certified, 0.0, ""});
  }
  Ordered contraction = Ordered::array();
  for (std::size_t k = 1; k < t.depth(); ++k) {
    const auto c = contraction_ratio_scalar(t, k, trials, SplitMix64::derive(seed, k).next_u64());
    contraction.push_back(Ordered{{"level", k},
                                  {"max_ratio", rational_json(c.max_ratio)},
                                  {"evaluated", c.evaluated},
                                  {"skipped", c.skipped}});
    verdicts.push_back({"H contraction ratio <= r at level " + std::to_string(k), c.max_ratio <= r, 0.0,
                        "max " + to_string(c.max_ratio)});
  }
  return Ordered{{"contraction_constant", rational_json(r)}, {"fixed_measure", fixed}, {"contraction", contraction}};
}

Ordered fixed_point_section(const CuntzTower& ct, std::size_t depth, const std::optional<OperatorValuedMeasure>& cand,
                            std::vector<Verdict>& verdicts) {
  const auto r = verify_fixed_point(ct, depth, cand);
  Ordered defects = Ordered::array();
  for (const auto& d : r.defects) {
    defects.push_back(Ordered{{"word", word_label(d.word)}, {"route", d.route}, {"magnitude", d.magnitude}});
  }
  verdicts.push_back({"E(A_k(a)) == P_k(a) for every word", r.passed(), 0.0,
                      r.passed() ? "" : std::to_string(r.defects.size()) + " defects, first at word " +
                                            word_label(r.defects.front().word)});
  return Ordered{{"depth", r.depth}, {"words_checked", r.words_checked}, {"defects", defects}};
}

Ordered trace_json(const PhiTrace& t) {
  Ordered steps = Ordered::array();
  for (const auto& s : t.steps) {
    steps.push_back(Ordered{
        {"step", s.step}, {"level", s.level}, {"rho_to_truth", s.rho_to_truth}, {"ratio", optional_ratio(s.ratio)}});
  }
  return Ordered{{"seed_description", t.seed_description},
                 {"contraction_constant", t.contraction_constant},
                 {"steps", steps},
                 {"decay_ok", t.decay_ok},
                 {"seed_independent", t.seed_independent},
                 {"kind_preserved", t.kind_preserved},
                 {"final_kind", std::string(to_string(t.final_measure.kind()))}};
}

void trace_verdicts(const PhiTrace& t, std::vector<Verdict>& verdicts) {
  const std::string tag = " (" + t.seed_description + ")";
  verdicts.push_back({"rho decays by r per step" + tag, t.decay_ok, 1e-8, ""});
  verdicts.push_back({"coarse cylinders equal P_k(a)" + tag, t.seed_independent, 1e-12, ""});
  verdicts.push_back({"kind preserved" + tag, t.kind_preserved, 1e-9, ""});
}

std::string trace_csv(const PhiTrace& t) {
  std::ostringstream os;
  os << "step,level,rho_to_truth,ratio\n";
  for (const auto& s : t.steps) {
    os << s.step << ',' << s.level << ',' << fmt(s.rho_to_truth) << ',' << (s.ratio ? fmt(*s.ratio) : "") << '\n';
  }
  return os.str();
}

Ordered relate_json(const RelateReport& r) {
  return Ordered{{"support", r.support},
                 {"isometry_defect", r.isometry_defect},
                 {"cylinder_defect", r.cylinder_defect},
                 {"intertwining_defect", r.intertwining_defect},
                 {"range_rank", r.range_rank},
                 {"cyclic_rank", r.cyclic_rank},
                 {"joint_rank", r.joint_rank}};
}

void relate_verdicts(const RelateReport& r, const std::string& tag, std::vector<Verdict>& verdicts) {
  verdicts.push_back({"V is an isometry" + tag, r.isometry_defect <= r.tolerance, r.tolerance, fmt(r.isometry_defect)});
  verdicts.push_back({"V(1_A) == P_k(a) h" + tag, r.cylinder_defect <= r.tolerance, r.tolerance, fmt(r.cylinder_defect)});
  verdicts.push_back({"V* P_k(a) V == M_A" + tag, r.intertwining_defect <= r.tolerance, r.tolerance,
                      fmt(r.intertwining_defect)});
  verdicts.push_back({"range V == span P_k(a) h" + tag, r.range_rank == r.cyclic_rank && r.joint_rank == r.range_rank,
                      0.0, std::to_string(r.range_rank) + "/" + std::to_string(r.cyclic_rank)});
}

/// Deepest level whose space still admits tower vertex enumeration.
std::size_t rho_depth(const CuntzTower& ct) {
  std::size_t level = 0;
  while (level < ct.depth() && ct.dimension(level + 1) <= kTowerVertexCap) ++level;
  return level;
}

}  // namespace

CommandResult cmd_space(const Options& o) {
  require_path(o.space, "--space");
  CommandResult res;
  const RawSpace raw = read_space(read_document(o.space));
  try {
    const auto s = validate_space(raw);
    res.results["valid"] = true;
    res.results["size"] = s.size();
    res.results["ids"] = s.ids();
    res.results["diameter"] = rational_json(s.diameter());
    res.results["hash"] = hex(s.hash());
    if (s.size() <= o.vertex_cap) {
      const auto v = lip1_vertices(s, 0, o.vertex_cap);
      res.results["lip1_vertex_count"] = v.size();
      bool lip = true;
      for (const auto& phi : v.vertices) lip = lip && lip_constant(phi, s) <= 1;
      res.verdicts.push_back({"every vertex is 1-Lipschitz", lip, 0.0, ""});
    } else {
      res.results["lip1_vertex_count"] = nullptr;
    }
    res.verdicts.insert(res.verdicts.begin(), {"metric axioms", true, 0.0, ""});
  } catch (const SpaceValidationError& e) {
    res.results["valid"] = false;
    res.results["violations"] = violations_json(e.violations());
    res.verdicts.push_back({"metric axioms", false, 0.0, e.violations().front().describe()});
  }
  return res;
}

CommandResult cmd_kantorovich(const Options& o) {
  const auto s = load_space(o.space);
  require_path(o.mu, "--mu");
  require_path(o.nu, "--nu");
  const auto mu = read_measure(read_document(o.mu), s->size());
  const auto nu = read_measure(read_document(o.nu), s->size());
  const auto r = kantorovich(*s, mu, nu);
  Rational dual = 0;
  for (std::size_t x = 0; x < s->size(); ++x) dual += r.potential.values[x] * (mu[x] - nu[x]);
  CommandResult res;
  res.results["value"] = rational_json(r.value);
  res.results["value_double"] = to_double(r.value);
  res.results["plan"] = rational_matrix(r.plan);
  res.results["potential"] = lipschitz_json(r.potential);
  res.results["gap"] = rational_json(r.value - dual);
  res.results["pivots"] = r.pivots;
  res.verdicts.push_back({"zero duality gap", dual == r.value, 0.0, ""});
  res.verdicts.push_back({"potential is 1-Lipschitz", r.potential.constant <= 1, 0.0, ""});
  if (s->size() <= o.vertex_cap) {
    const auto oracle = kantorovich_dual_oracle(*s, mu, nu, lip1_vertices(*s, 0, o.vertex_cap));
    res.results["vertex_oracle"] = rational_json(oracle);
    res.verdicts.push_back({"vertex oracle equals LP value", oracle == r.value, 0.0, ""});
  } else {
    res.results["vertex_oracle"] = nullptr;
  }
  return res;
}

CommandResult cmd_hutchinson(const Options& o) {
  if (o.depth < 1) throw Error(ErrorCode::LevelOutOfRange, "hutchinson needs --depth >= 1");
  const auto t = build_tower(load_ifs(o.ifs), o.depth);
  CommandResult res;
  res.results = hutchinson_section(t, o.trials, o.seed, res.verdicts);
  return res;
}

CommandResult cmd_cuntz_verify(const Options& o) {
  const auto ct = load_tower(o);
  CommandResult res;
  res.results["levels"] = cuntz_levels(ct, res.verdicts);
  return res;
}

CommandResult cmd_rho(const Options& o) {
  const auto s = load_space(o.space);
  const auto e = load_ovm(o.e, "--e", s);
  const auto f = load_ovm(o.f, "--f", s);
  const double tol = o.tol.value_or(kCompareTolerance);
  const RhoMethod method = parse_rho_method(o.method);
  const bool enumerable = s->size() <= o.vertex_cap;
  std::optional<Lip1VertexSet> vertices;
  if (enumerable) vertices = lip1_vertices(*s, 0, o.vertex_cap);
  RhoResult r;
  switch (method) {
    case RhoMethod::Vertex:
      if (!vertices) throw Error(ErrorCode::SpaceTooLarge, "vertex method needs at most --vertex-cap points");
      r = rho_exact(e, f, *vertices);
      break;
    case RhoMethod::Sphere:
      if (!vertices) throw Error(ErrorCode::SpaceTooLarge, "sphere method needs at most --vertex-cap points");
      r = rho_lower_sphere(e, f, *vertices, o.restarts, o.seed);
      break;
    case RhoMethod::Grid:
      r = rho_lower_grid(e, f, o.restarts, o.seed);
      break;
  }
  CommandResult res;
  res.results["method"] = std::string(to_string(r.method));
  res.results["value"] = r.value;
  res.results["exact_value"] = r.exact_value ? rational_json(*r.exact_value) : Ordered(nullptr);
  res.results["witness_phi"] = lipschitz_json(r.witness_phi);
  res.results["witness_vector"] = complex_vector(r.witness_vector);
  res.results["vertex_count"] = vertices ? Ordered(vertices->size()) : Ordered(nullptr);
  const double replay = rho_objective(e, f, r.witness_phi.values_double());
  res.verdicts.push_back({"witness reproduces value", std::abs(replay - r.value) <= 1e-10, 1e-10, fmt(replay)});
  if (method != RhoMethod::Vertex && vertices) {
    const double exact = rho_exact(e, f, *vertices).value;
    res.results["vertex_value"] = exact;
    res.verdicts.push_back({"lower bound <= vertex value", r.value <= exact + tol, tol, fmt(exact - r.value)});
  }
  return res;
}

CommandResult cmd_phi_iterate(const Options& o) {
  const auto ct = load_tower(o);
  const SeedKind kind = parse_seed_kind(o.seed_kind);
  // Level 0 has a single OVM, E(X) = I, so seeds start at level 1 unless told otherwise.
  const std::size_t min_level = o.depth >= 1 ? 1 : 0;
  const std::size_t steps = o.steps.value_or(o.depth > min_level ? o.depth - min_level : 0);
  if (steps > o.depth) throw Error(ErrorCode::LevelOutOfRange, "--steps exceeds --depth");
  const std::size_t level = o.seed_level.value_or(o.depth - steps);
  const auto seed = make_seed(ct, level, kind, o.seed);
  const auto trace = phi_iterate(ct, seed, level, steps, std::string(to_string(kind)), kTowerVertexCap);
  CommandResult res;
  res.results = trace_json(trace);
  trace_verdicts(trace, res.verdicts);
  res.csv = trace_csv(trace);
  return res;
}

CommandResult cmd_verify_fixed_point(const Options& o) {
  const auto ct = load_tower(o);
  CommandResult res;
  std::optional<OperatorValuedMeasure> candidate;
  if (!o.e.empty()) {
    res.results["candidate"] = o.e;
    try {
      candidate = bind_ovm(read_ovm(read_document(o.e)), ct.tower().space_ptr(o.depth));
    } catch (const OvmValidationError& err) {
      res.results["candidate_valid"] = false;
      res.results["violations"] = violations_json(err.violations());
      res.verdicts.push_back({"candidate is a valid OVM", false, kAxiomTolerance, err.violations().front().describe()});
      return res;
    }
    res.results["candidate_valid"] = true;
    if (candidate->kind() != MeasureKind::Projection) {
      res.verdicts.push_back({"candidate is projection-valued", false, 0.0, "kind is positive"});
    }
  } else {
    res.results["candidate"] = "multiplication-pvm";
  }
  res.results["fixed_point"] = fixed_point_section(ct, o.depth, candidate, res.verdicts);
  return res;
}

CommandResult cmd_relate_verify(const Options& o) {
  const auto ct = load_tower(o);
  require_path(o.h, "--h");
  const CVector h = read_vector(read_document(o.h));
  const auto r = relate_verify(ct, o.depth, h, o.tol.value_or(1e-10));
  CommandResult res;
  res.results = relate_json(r);
  relate_verdicts(r, "", res.verdicts);
  return res;
}

CommandResult cmd_suite(const Options& o) {
  if (o.depth < 1) throw Error(ErrorCode::LevelOutOfRange, "suite needs --depth >= 1");
  const auto ct = load_tower(o);
  const auto& t = ct.tower();
  CommandResult res;
  auto& v = res.verdicts;
  res.results["cuntz"] = cuntz_levels(ct, v);
  res.results["hutchinson"] = hutchinson_section(t, o.trials, o.seed, v);
  res.results["fixed_point"] = fixed_point_section(ct, o.depth, std::nullopt, v);

  const std::size_t top = rho_depth(ct);
  res.results["rho_depth"] = top;
  Ordered traces = Ordered::array();
  if (top >= 2) {
    for (auto kind : {SeedKind::Swapped, SeedKind::RandomPvm, SeedKind::RandomPovm}) {
      const auto seed = make_seed(ct, 1, kind, o.seed);
      const auto trace = phi_iterate(ct, seed, 1, top - 1, std::string(to_string(kind)));
      traces.push_back(trace_json(trace));
      trace_verdicts(trace, v);
    }
  }
  res.results["phi_traces"] = traces;

  Ordered contraction = Ordered::array();
  const double r = to_double(t.ifs().contraction_constant());
  for (std::size_t k = 2; k <= top; ++k) {
    for (auto kind : {MeasureKind::Projection, MeasureKind::Positive}) {
      const auto c = contraction_ratio_rho(ct, k, o.trials, SplitMix64::derive(o.seed, 10 * k).next_u64(), kind);
      contraction.push_back(Ordered{{"level", k},
                                    {"kind", std::string(to_string(kind))},
                                    {"max_ratio", c.max_ratio},
                                    {"evaluated", c.evaluated},
                                    {"skipped", c.skipped}});
      v.push_back({std::string("rho contraction <= r (") + std::string(to_string(kind)) + ", level " +
                       std::to_string(k) + ")",
                   c.within_bound && c.max_ratio <= r + 1e-8, 1e-8, fmt(c.max_ratio)});
    }
  }
  res.results["rho_contraction"] = contraction;

  Ordered relate = Ordered::array();
  const auto dim = static_cast<Eigen::Index>(ct.dimension(o.depth));
  std::vector<std::pair<std::string, CVector>> hs;
  CVector e0 = CVector::Zero(dim);
  e0(0) = 1;
  hs.emplace_back("basis", e0);
  hs.emplace_back("uniform", CVector::Ones(dim) / std::sqrt(static_cast<double>(dim)));
  SplitMix64 rng = SplitMix64::derive(o.seed, 99);
  for (int i = 0; i < 3; ++i) hs.emplace_back("random " + std::to_string(i), random_unit_vector(dim, rng));
  for (const auto& [name, h] : hs) {
    const auto rr = relate_verify(ct, o.depth, h);
    Ordered entry{{"h", name}};
    entry.update(relate_json(rr));
    relate.push_back(entry);
    relate_verdicts(rr, " (h = " + name + ")", v);
  }
  res.results["relate"] = relate;
  return res;
}

}  // namespace pvmk::cli
