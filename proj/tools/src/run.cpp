#include "pvmk/cli/run.hpp"

#include "CLI11.hpp"

#include "commands.hpp"
#include "pvmk/error.hpp"
#include "pvmk/linalg.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

namespace pvmk::cli {

namespace {

struct Subcommand {
  const char* name;
  const char* help;
  std::function<CommandResult(const Options&)> body;
  std::vector<std::string> flags;
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> list{
      {"space", "validate a metric space and count Lip_1 vertices", cmd_space, {"space", "vertex-cap"}},
      {"kantorovich", "exact Kantorovich distance with primal and dual certificates", cmd_kantorovich,
       {"space", "mu", "nu", "vertex-cap"}},
      {"hutchinson", "Hutchinson measure and scalar contraction ratios", cmd_hutchinson,
       {"ifs", "depth", "trials", "seed"}},
      {"cuntz-verify", "Cuntz relations on every level", cmd_cuntz_verify, {"ifs", "depth"}},
      {"rho", "generalized Kantorovich distance of two OVMs", cmd_rho,
       {"space", "e", "f", "method", "restarts", "seed", "vertex-cap", "tol"}},
      {"phi-iterate", "iterate the contraction from a seed OVM", cmd_phi_iterate,
       {"ifs", "depth", "seed-kind", "seed", "steps", "seed-level", "csv"}},
      {"verify-fixed-point", "check E(A_k(a)) = P_k(a) for every word", cmd_verify_fixed_point,
       {"ifs", "depth", "e"}},
      {"relate-verify", "isometry V of L^2(E_{h,h}) onto the cyclic subspace of h", cmd_relate_verify,
       {"ifs", "depth", "h", "tol"}},
      {"suite", "all tower checks on one IFS", cmd_suite, {"ifs", "depth", "seed", "trials"}},
  };
  return list;
}

void add_flag(CLI::App& app, const std::string& flag, Options& o) {
  static const std::map<std::string, std::string> help{
      {"ifs", "IFS JSON file"},
      {"space", "metric space JSON file"},
      {"mu", "first probability measure JSON file"},
      {"nu", "second probability measure JSON file"},
      {"e", "OVM JSON file"},
      {"f", "second OVM JSON file"},
      {"h", "unit vector JSON file"},
      {"depth", "tower depth K"},
      {"steps", "number of Phi steps"},
      {"seed-level", "level of the seed OVM (default depth - steps)"},
      {"trials", "random pairs per level"},
      {"restarts", "sphere restarts or grid samples"},
      {"method", "vertex | sphere | grid"},
      {"seed", "master seed"},
      {"seed-kind", "truth | swapped | random-pvm | random-povm"},
      {"tol", "comparison tolerance"},
      {"vertex-cap", "largest space for vertex enumeration"},
      {"csv", "write the trace as CSV to this path"},
  };
  const std::string name = "--" + flag;
  const std::string& text = help.at(flag);
  if (flag == "ifs") app.add_option(name, o.ifs, text);
  else if (flag == "space") app.add_option(name, o.space, text);
  else if (flag == "mu") app.add_option(name, o.mu, text);
  else if (flag == "nu") app.add_option(name, o.nu, text);
  else if (flag == "e") app.add_option(name, o.e, text);
  else if (flag == "f") app.add_option(name, o.f, text);
  else if (flag == "h") app.add_option(name, o.h, text);
  else if (flag == "depth") app.add_option(name, o.depth, text)->capture_default_str();
  else if (flag == "steps") app.add_option(name, o.steps, text);
  else if (flag == "seed-level") app.add_option(name, o.seed_level, text);
  else if (flag == "trials") app.add_option(name, o.trials, text)->capture_default_str()->check(CLI::PositiveNumber);
  else if (flag == "restarts") app.add_option(name, o.restarts, text)->capture_default_str()->check(CLI::PositiveNumber);
  else if (flag == "method") app.add_option(name, o.method, text)->capture_default_str()->check(CLI::IsMember({"vertex", "sphere", "grid"}));
  else if (flag == "seed") app.add_option(name, o.seed, text)->capture_default_str();
  else if (flag == "seed-kind") app.add_option(name, o.seed_kind, text)->capture_default_str()->check(CLI::IsMember({"truth", "swapped", "random-pvm", "random-povm"}));
  else if (flag == "tol") app.add_option(name, o.tol, text)->check(CLI::PositiveNumber);
  else if (flag == "vertex-cap") app.add_option(name, o.vertex_cap, text)->capture_default_str();
  else if (flag == "csv") app.add_option(name, o.csv, text);
}

Ordered config_echo(const Subcommand& sc, const Options& o) {
  Ordered c = Ordered::object();
  for (const auto& flag : sc.flags) {
    if (flag == "ifs") c["ifs"] = o.ifs;
    else if (flag == "space") c["space"] = o.space;
    else if (flag == "mu") c["mu"] = o.mu;
    else if (flag == "nu") c["nu"] = o.nu;
    else if (flag == "e") c["e"] = o.e;
    else if (flag == "f") c["f"] = o.f;
    else if (flag == "h") c["h"] = o.h;
    else if (flag == "depth") c["depth"] = o.depth;
    else if (flag == "steps") c["steps"] = o.steps ? Ordered(*o.steps) : Ordered(nullptr);
    else if (flag == "seed-level") c["seed_level"] = o.seed_level ? Ordered(*o.seed_level) : Ordered(nullptr);
    else if (flag == "trials") c["trials"] = o.trials;
    else if (flag == "restarts") c["restarts"] = o.restarts;
    else if (flag == "method") c["method"] = o.method;
    else if (flag == "seed") c["seed"] = o.seed;
    else if (flag == "seed-kind") c["seed_kind"] = o.seed_kind;
    else if (flag == "tol") c["tol"] = o.tol ? Ordered(*o.tol) : Ordered(nullptr);
    else if (flag == "vertex-cap") c["vertex_cap"] = o.vertex_cap;
  }
  c["eigen_threshold"] = kJacobiThreshold;
  return c;
}

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path);
  if (!f || !(f << text)) {
    err << "pvmk: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pvmk: Kantorovich metrics on operator-valued measures of an IFS"};
  app.name("pvmk");
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1, 1);
  Options opts;
  app.add_option("--out", opts.out, "write the JSON report here instead of stdout");
  app.add_flag("--timing", opts.timing, "add wall-clock duration to the report");
  std::vector<std::pair<CLI::App*, const Subcommand*>> apps;
  for (const auto& sc : subcommands()) {
    CLI::App* sub = app.add_subcommand(sc.name, sc.help);
    sub->set_help_flag("--help", "print this help and exit");
    sub->fallthrough();
    for (const auto& flag : sc.flags) add_flag(*sub, flag, opts);
    apps.emplace_back(sub, &sc);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pvmk: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const Subcommand* chosen = nullptr;
  for (const auto& [sub, sc] : apps) {
    if (sub->parsed()) chosen = sc;
  }

  const auto start = std::chrono::steady_clock::now();
  CommandResult result;
  try {
    result = chosen->body(opts);
  } catch (const CLI::Error& e) {
    err << "pvmk: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "pvmk " << chosen->name << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool passed = all_passed(result.verdicts);
  Ordered report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = chosen->name;
  report["config"] = config_echo(*chosen, opts);
  report["results"] = result.results;
  report["verdicts"] = verdicts_json(result.verdicts);
  report["passed"] = passed;
  if (opts.timing) report["duration_seconds"] = seconds;

  const std::string text = dump_report(report);
  if (opts.out.empty()) {
    out << text;
  } else if (!write_file(opts.out, text, err)) {
    return kExitUsage;
  }
  if (result.csv && !opts.csv.empty() && !write_file(opts.csv, *result.csv, err)) return kExitUsage;
  return passed ? kExitOk : kExitVerdictFail;
}

}  // namespace pvmk::cli
