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

#include "evcomb/report.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

namespace evcomb {

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInfeasible:
    case ErrorKind::kContradiction:
      return 2;
    case ErrorKind::kPolynomiality:
      return 3;
    case ErrorKind::kNotConverged:
      return 4;
    default:
      return 1;
  }
}

std::string StatusNameFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse_error";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kContradiction: return "contradiction";
    case ErrorKind::kPolynomiality: return "polynomiality_violation";
    case ErrorKind::kNotConverged: return "not_converged";
    default: return "invalid_input";
  }
}

void Session::Load(std::string_view text) {
  file_.reset();
  model_.reset();
  result_.reset();
  maximizer_.reset();
  rows_.clear();
  file_ = ParseEvidence(text);
}

void Session::Solve(const SolveOptions& options) {
  if (!file_) throw Error(ErrorKind::kInvalidArgument, "no evidence loaded");
  maximizer_.reset();
  rows_.clear();
  KnowledgeBase kb = BuildKnowledgeBase(*file_);
  model_ = kb.Compile();
  result_ = Maximize(*model_, options);
  switch (result_->status) {
    case SolveStatus::kConverged:
      break;
    case SolveStatus::kInfeasible:
      throw Error(ErrorKind::kInfeasible, result_->message,
                  result_->source_line);
    case SolveStatus::kContradiction:
      throw Error(ErrorKind::kContradiction, result_->message,
                  result_->source_line);
    case SolveStatus::kNotConverged:
      throw Error(ErrorKind::kNotConverged,
                  result_->message + " after " +
                      std::to_string(result_->iterations) + " iterations");
  }
  maximizer_ = BuildMaximizerPolytope(*model_, *result_);
  for (const Statement& s : file_->statements) {
    const auto* q = std::get_if<QueryStatement>(&s.body);
    if (q == nullptr) continue;
    QueryRow row;
    row.text = QueryText(*q, file_->registry);
    try {
      row.interval = Ask(*q);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kImpossibleCondition) throw;
      row.error = e.what();
    }
    rows_.push_back(std::move(row));
  }
}

ProbabilityInterval Session::Ask(const QueryStatement& query) const {
  const MaximizerPolytope& mp = maximizer();
  if (query.condition) return ConditionalInterval(mp, query.event, *query.condition);
  return ProbInterval(mp, query.event);
}

ProbabilityInterval Session::Ask(std::string_view query) const {
  return Ask(ParseQuery(query, file().registry));
}

const EvidenceFile& Session::file() const {
  if (!file_) throw Error(ErrorKind::kInvalidArgument, "no evidence loaded");
  return *file_;
}
const CompiledModel& Session::model() const {
  if (!model_) throw Error(ErrorKind::kInvalidArgument, "model not compiled");
  return *model_;
}
const SolveResult& Session::result() const {
  if (!result_) throw Error(ErrorKind::kInvalidArgument, "model not solved");
  return *result_;
}
const MaximizerPolytope& Session::maximizer() const {
  if (!maximizer_) throw Error(ErrorKind::kInvalidArgument, "model not solved");
  return *maximizer_;
}

ReportTable Session::Report(bool dump_jdv, bool dump_nullspace) const {
  ReportTable table;
  const SolveResult& r = result();
  table.status = SolveStatusName(r.status);
  table.log_likelihood = r.value;
  table.iterations = r.iterations;
  table.stationarity_gap = r.stationarity_gap;
  const auto basis = NullSpaceBasis(model());
  table.nullspace_dim = basis.size();
  if (dump_jdv) {
    table.jdv = r.jstar;
    for (std::size_t w = 0; w < r.jstar.size(); ++w) {
      table.world_labels.push_back(WorldLabel(World{w}, file().registry));
    }
  }
  if (dump_nullspace) table.nullspace = basis;
  table.rows = rows_;
  return table;
}

RunOutcome Run(std::string_view text, const RunOptions& options) {
  RunOutcome out;
  Session session;
  try {
    session.Load(text);
    session.Solve(options.solve);
    out.table = session.Report(options.dump_jdv, options.dump_nullspace);
  } catch (const Error& e) {
    out.exit_code = ExitCodeFor(e.kind());
    out.table.status = StatusNameFor(e.kind());
    out.table.error = e.what();
    out.table.error_line = e.line();
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string Scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string Text(const ReportTable& t) {
  std::string out = "status: " + t.status + "\n";
  if (!t.error.empty()) {
    out += "error: " + t.error + "\n";
    if (t.error_line > 0) out += "line: " + std::to_string(t.error_line) + "\n";
    return out;
  }
  char buf[64];
  if (t.log_likelihood) {
    std::snprintf(buf, sizeof buf, "%.10g", *t.log_likelihood);
    out += std::string("log-likelihood: ") + buf + "\n";
  }
  out += "iterations: " + std::to_string(t.iterations) + "\n";
  out += "stationarity gap: " + Scientific(t.stationarity_gap) + "\n";
  out += "null-space dimension: " + std::to_string(t.nullspace_dim) + "\n";

  if (t.jdv) {
    out += "\nJDV:\n";
    for (std::size_t w = 0; w < t.jdv->size(); ++w) {
      std::snprintf(buf, sizeof buf, "  %-6zu", w);
      out += buf + t.world_labels[w];
      std::snprintf(buf, sizeof buf, "  %.6f\n", (*t.jdv)[w]);
      out += buf;
    }
  }
  if (t.nullspace) {
    out += "\nnull space basis:\n";
    for (const auto& v : *t.nullspace) {
      out += " ";
      for (double x : v) {
        std::snprintf(buf, sizeof buf, " %+.6f", x);
        out += buf;
      }
      out += "\n";
    }
  }
  if (t.rows.empty()) return out;

  std::size_t width = 5;
  for (const QueryRow& r : t.rows) width = std::max(width, r.text.size());
  auto pad = [&](const std::string& s) {
    return s + std::string(width + 2 - s.size(), ' ');
  };
  out += "\n" + pad("Event") + "Min : Max\n";
  for (const QueryRow& r : t.rows) {
    out += pad(r.text);
    if (!r.error.empty()) {
      out += "undefined (condition has probability 0)\n";
      continue;
    }
    out += FormatInterval(r.interval);
    if (r.interval.open_endpoint) out += "  (condition can have probability 0)";
    out += "\n";
  }
  return out;
}

std::string Json(const ReportTable& t) {
  nlohmann::ordered_json j;
  j["status"] = t.status;
  if (!t.error.empty()) {
    j["error"] = t.error;
    j["line"] = t.error_line;
    j["queries"] = nlohmann::ordered_json::array();
    return j.dump(2) + "\n";
  }
  j["log_likelihood"] = t.log_likelihood ? nlohmann::ordered_json(*t.log_likelihood)
                                         : nlohmann::ordered_json(nullptr);
  j["iterations"] = t.iterations;
  j["stationarity_gap"] = t.stationarity_gap;
  if (t.jdv) {
    j["jdv"] = *t.jdv;
    j["worlds"] = t.world_labels;
  }
  j["nullspace_dim"] = t.nullspace_dim;
  if (t.nullspace) j["nullspace"] = *t.nullspace;
  auto queries = nlohmann::ordered_json::array();
  for (const QueryRow& r : t.rows) {
    nlohmann::ordered_json q;
    q["text"] = r.text;
    if (!r.error.empty()) {
      q["lo"] = nullptr;
      q["hi"] = nullptr;
      q["degenerate"] = false;
      q["error"] = r.error;
    } else {
      q["lo"] = r.interval.lo;
      q["hi"] = r.interval.hi;
      q["degenerate"] = r.interval.degenerate;
      q["open_endpoint"] = r.interval.open_endpoint;
    }
    queries.push_back(std::move(q));
  }
  j["queries"] = std::move(queries);
  return j.dump(2) + "\n";
}

}  // namespace

std::string FormatInterval(const ProbabilityInterval& interval) {
  if (interval.degenerate) return Fixed3(0.5 * (interval.lo + interval.hi));
  return Fixed3(interval.lo) + " : " + Fixed3(interval.hi);
}

std::string EmitReport(const ReportTable& table, ReportFormat format) {
  return format == ReportFormat::kJson ? Json(table) : Text(table);
}

}  // namespace evcomb
