// Copyright 2026 The evcomb Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// evcomb command-line tool.
//
//   evcomb solve <file> [--json] [--tolerance T] [--max-iter N] [--seed S]
//                       [--dump-jdv] [--dump-nullspace]
//
// Exit codes: 0 converged, 1 parse or usage error, 2 infeasible or
// contradictory evidence, 3 polynomiality violation, 4 no convergence.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "evcomb/evcomb.h"

namespace {

struct SessionDeleter {
  void operator()(evcomb_session* s) const { evcomb_session_free(s); }
};
using SessionPtr = std::unique_ptr<evcomb_session, SessionDeleter>;

struct StringDeleter {
  void operator()(char* s) const { evcomb_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct SolveArgs {
  std::string file;
  bool json = false;
  double tolerance = 1e-9;
  std::uint64_t max_iter = 10000;
  std::uint64_t seed = 0;
  bool dump_jdv = false;
  bool dump_nullspace = false;
};

int RunSolve(const SolveArgs& args, bool seeded) {
  std::ifstream in(args.file, std::ios::binary);
  if (!in) {
    std::cerr << "evcomb: cannot read '" << args.file << "'\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  SessionPtr session(evcomb_session_new());
  if (!session) {
    std::cerr << "evcomb: out of memory\n";
    return 1;
  }
  evcomb_options options;
  evcomb_options_init(&options);
  options.tolerance = args.tolerance;
  options.max_iterations = args.max_iter;
  options.use_seed = seeded ? 1 : 0;
  options.seed = args.seed;

  evcomb_status status = evcomb_session_load(session.get(), buffer.str().c_str());
  if (status == EVCOMB_OK) status = evcomb_session_solve(session.get(), &options);

  const evcomb_format format = args.json ? EVCOMB_FORMAT_JSON : EVCOMB_FORMAT_TEXT;
  if (status != EVCOMB_OK && !args.json) {
    std::cerr << args.file;
    if (const size_t line = evcomb_session_error_line(session.get()); line > 0) {
      std::cerr << ":" << line;
    }
    std::cerr << ": " << evcomb_status_name(status) << ": "
              << evcomb_session_error(session.get()) << "\n";
    return evcomb_exit_code(status);
  }
  int flags = 0;
  if (args.dump_jdv) flags |= EVCOMB_REPORT_JDV;
  if (args.dump_nullspace) flags |= EVCOMB_REPORT_NULLSPACE;
  char* raw = nullptr;
  const evcomb_status report_status =
      evcomb_session_report(session.get(), format, flags, &raw);
  OwnedString report(raw);
  if (report_status != EVCOMB_OK) {
    std::cerr << "evcomb: " << evcomb_session_error(session.get()) << "\n";
    return evcomb_exit_code(status != EVCOMB_OK ? status : report_status);
  }
  std::cout << report.get();
  return evcomb_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-likelihood evidence combination over propositional worlds"};
  app.require_subcommand(1);

  SolveArgs args;
  CLI::App* solve = app.add_subcommand("solve", "Solve an evidence file and answer its queries");
  solve->add_option("file", args.file, "Evidence file")->required();
  solve->add_flag("--json", args.json, "Emit the machine-readable report");
  solve->add_option("--tolerance", args.tolerance, "Relative stationarity tolerance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", args.max_iter, "Optimizer iteration limit")
      ->check(CLI::PositiveNumber);
  CLI::Option* seed = solve->add_option("--seed", args.seed,
                                        "Seed for the randomized start perturbation");
  solve->add_flag("--dump-jdv", args.dump_jdv, "Include the maximum-likelihood JDV");
  solve->add_flag("--dump-nullspace", args.dump_nullspace,
                  "Include an orthonormal null-space basis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return RunSolve(args, seed->count() > 0);
}
