#pragma once

#include "report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pvmk::cli {

struct Options {
  std::string ifs, space, mu, nu, e, f, h;
  std::string method = "vertex";
  std::string seed_kind = "swapped";
  std::string out, csv;
  std::size_t depth = 3;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> seed_level;
  std::size_t trials = 50;
  std::size_t restarts = 200;
  std::size_t vertex_cap = 7;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  bool timing = false;
};

struct CommandResult {
  Ordered results = Ordered::object();
  std::vector<Verdict> verdicts;
  std::optional<std::string> csv;
};

CommandResult cmd_space(const Options& o);
CommandResult cmd_kantorovich(const Options& o);
CommandResult cmd_hutchinson(const Options& o);
CommandResult cmd_cuntz_verify(const Options& o);
CommandResult cmd_rho(const Options& o);
CommandResult cmd_phi_iterate(const Options& o);
CommandResult cmd_verify_fixed_point(const Options& o);
CommandResult cmd_relate_verify(const Options& o);
CommandResult cmd_suite(const Options& o);

}  // namespace pvmk::cli
