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

#ifndef EVCOMB_REPORT_HPP_
#define EVCOMB_REPORT_HPP_

// End-to-end driver: evidence text in, report out.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evcomb/error.hpp"
#include "evcomb/evidence.hpp"
#include "evcomb/evidence_file.hpp"
#include "evcomb/optimizer.hpp"
#include "evcomb/query.hpp"

namespace evcomb {

struct QueryRow {
  std::string text;
  ProbabilityInterval interval;
  // Set when the query has no answer (its condition is impossible).
  std::string error;
};

struct ReportTable {
  std::string status;
  std::optional<double> log_likelihood;
  std::size_t iterations = 0;
  double stationarity_gap = 0.0;
  std::size_t nullspace_dim = 0;
  std::optional<std::vector<double>> jdv;
  std::vector<std::string> world_labels;
  std::optional<std::vector<std::vector<double>>> nullspace;
  std::vector<QueryRow> rows;
  std::string error;
  std::size_t error_line = 0;
};

enum class ReportFormat { kText, kJson };

// Text: three decimals, degenerate intervals as one number and others as
// "lo : hi". JSON: full precision, stable key order.
std::string EmitReport(const ReportTable& table, ReportFormat format);
std::string FormatInterval(const ProbabilityInterval& interval);

struct RunOptions {
  SolveOptions solve;
  bool dump_jdv = false;
  bool dump_nullspace = false;
};

// Exit code for a failure of the given kind: 1 parse/usage, 2 infeasible or
// contradiction, 3 polynomiality violation, 4 no convergence.
int ExitCodeFor(ErrorKind kind);
std::string StatusNameFor(ErrorKind kind);

// Parsed evidence, compiled model, solve result and query answers for one
// evidence file.
class Session {
 public:
  // Throws ParseError or Error(kInvalidArgument / kContradiction).
  void Load(std::string_view text);
  // Compiles, maximizes and answers every query in the file. Throws Error with
  // kind kPolynomiality, kContradiction, kInfeasible or kNotConverged.
  void Solve(const SolveOptions& options);

  // Answers an ad-hoc "P(...)" query after Solve.
  ProbabilityInterval Ask(std::string_view query) const;
  ProbabilityInterval Ask(const QueryStatement& query) const;

  ReportTable Report(bool dump_jdv, bool dump_nullspace) const;

  bool loaded() const { return file_.has_value(); }
  bool solved() const { return maximizer_.has_value(); }
  const EvidenceFile& file() const;
  const CompiledModel& model() const;
  const SolveResult& result() const;
  const MaximizerPolytope& maximizer() const;
  const std::vector<QueryRow>& rows() const { return rows_; }

 private:
  std::optional<EvidenceFile> file_;
  std::optional<CompiledModel> model_;
  std::optional<SolveResult> result_;
  std::optional<MaximizerPolytope> maximizer_;
  std::vector<QueryRow> rows_;
};

struct RunOutcome {
  int exit_code = 0;
  ReportTable table;
};

RunOutcome Run(std::string_view text, const RunOptions& options);

}  // namespace evcomb

#endif  // EVCOMB_REPORT_HPP_
