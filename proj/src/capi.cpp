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

#include "evcomb/evcomb.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "evcomb/report.hpp"

struct evcomb_session {
  evcomb::Session session;
  std::string error;
  std::size_t error_line = 0;
  // Report for the most recent failed load/solve, if any.
  std::optional<evcomb::ReportTable> failure;
};

namespace {

evcomb_status StatusFor(evcomb::ErrorKind kind) {
  using evcomb::ErrorKind;
  switch (kind) {
    case ErrorKind::kParse: return EVCOMB_ERR_PARSE;
    case ErrorKind::kInfeasible: return EVCOMB_ERR_INFEASIBLE;
    case ErrorKind::kContradiction: return EVCOMB_ERR_CONTRADICTION;
    case ErrorKind::kPolynomiality: return EVCOMB_ERR_POLYNOMIALITY;
    case ErrorKind::kNotConverged: return EVCOMB_ERR_NOT_CONVERGED;
    case ErrorKind::kImpossibleCondition: return EVCOMB_ERR_IMPOSSIBLE_CONDITION;
    case ErrorKind::kInvalidArgument: return EVCOMB_ERR_INVALID_ARGUMENT;
  }
  return EVCOMB_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and recording the message.
template <typename Body>
evcomb_status Guard(evcomb_session* s, Body&& body, bool record_failure = false) {
  if (s == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  try {
    s->error.clear();
    s->error_line = 0;
    body();
    return EVCOMB_OK;
  } catch (const evcomb::Error& e) {
    s->error = e.what();
    s->error_line = e.line();
    if (record_failure) {
      evcomb::ReportTable t;
      t.status = evcomb::StatusNameFor(e.kind());
      t.error = e.what();
      t.error_line = e.line();
      s->failure = std::move(t);
    }
    return StatusFor(e.kind());
  } catch (const std::bad_alloc&) {
    s->error = "out of memory";
    return EVCOMB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    s->error = e.what();
    return EVCOMB_ERR_INTERNAL;
  }
}

void Fill(const evcomb::ProbabilityInterval& in, evcomb_interval* out) {
  out->lo = in.lo;
  out->hi = in.hi;
  out->degenerate = in.degenerate ? 1 : 0;
  out->open_endpoint = in.open_endpoint ? 1 : 0;
}

}  // namespace

extern "C" {

const char* evcomb_version(void) { return "0.1.0"; }

const char* evcomb_status_name(evcomb_status status) {
  switch (status) {
    case EVCOMB_OK: return "ok";
    case EVCOMB_ERR_PARSE: return "parse_error";
    case EVCOMB_ERR_INFEASIBLE: return "infeasible";
    case EVCOMB_ERR_CONTRADICTION: return "contradiction";
    case EVCOMB_ERR_POLYNOMIALITY: return "polynomiality_violation";
    case EVCOMB_ERR_NOT_CONVERGED: return "not_converged";
    case EVCOMB_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case EVCOMB_ERR_IMPOSSIBLE_CONDITION: return "impossible_condition";
    case EVCOMB_ERR_STATE: return "bad_state";
    case EVCOMB_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

int evcomb_exit_code(evcomb_status status) {
  switch (status) {
    case EVCOMB_OK: return 0;
    case EVCOMB_ERR_INFEASIBLE:
    case EVCOMB_ERR_CONTRADICTION: return 2;
    case EVCOMB_ERR_POLYNOMIALITY: return 3;
    case EVCOMB_ERR_NOT_CONVERGED: return 4;
    default: return 1;
  }
}

void evcomb_options_init(evcomb_options* options) {
  if (options == nullptr) return;
  const evcomb::SolveOptions defaults;
  options->tolerance = defaults.tolerance;
  options->max_iterations = defaults.max_iterations;
  options->use_seed = 0;
  options->seed = 0;
}

evcomb_session* evcomb_session_new(void) {
  return new (std::nothrow) evcomb_session();
}

void evcomb_session_free(evcomb_session* session) { delete session; }

evcomb_status evcomb_session_load(evcomb_session* session, const char* text) {
  if (session == nullptr || text == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  session->failure.reset();
  return Guard(session, [&] { session->session.Load(text); }, true);
}

evcomb_status evcomb_session_solve(evcomb_session* session,
                                   const evcomb_options* options) {
  if (session == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  if (!session->session.loaded()) {
    session->error = "no evidence loaded";
    return EVCOMB_ERR_STATE;
  }
  session->failure.reset();
  evcomb::SolveOptions opts;
  if (options != nullptr) {
    if (!(options->tolerance > 0.0) || options->max_iterations == 0) {
      session->error = "tolerance and max_iterations must be positive";
      return EVCOMB_ERR_INVALID_ARGUMENT;
    }
    opts.tolerance = options->tolerance;
    opts.max_iterations = static_cast<std::size_t>(options->max_iterations);
    if (options->use_seed) opts.seed = options->seed;
  }
  return Guard(session, [&] { session->session.Solve(opts); }, true);
}

const char* evcomb_session_error(const evcomb_session* session) {
  return session == nullptr ? "null session" : session->error.c_str();
}

size_t evcomb_session_error_line(const evcomb_session* session) {
  return session == nullptr ? 0 : session->error_line;
}

evcomb_status evcomb_session_log_likelihood(const evcomb_session* session,
                                            double* value) {
  if (session == nullptr || value == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  if (!session->session.solved()) return EVCOMB_ERR_STATE;
  *value = session->session.result().value;
  return EVCOMB_OK;
}

evcomb_status evcomb_session_iterations(const evcomb_session* session,
                                        uint64_t* iterations) {
  if (session == nullptr || iterations == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  if (!session->session.solved()) return EVCOMB_ERR_STATE;
  *iterations = session->session.result().iterations;
  return EVCOMB_OK;
}

size_t evcomb_session_world_count(const evcomb_session* session) {
  if (session == nullptr || !session->session.loaded()) return 0;
  return static_cast<size_t>(session->session.file().registry.world_count());
}

evcomb_status evcomb_session_jdv(const evcomb_session* session, double* out,
                                 size_t capacity) {
  if (session == nullptr || out == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  if (!session->session.solved()) return EVCOMB_ERR_STATE;
  const auto& jdv = session->session.result().jstar;
  if (capacity < jdv.size()) return EVCOMB_ERR_INVALID_ARGUMENT;
  std::memcpy(out, jdv.data(), jdv.size() * sizeof(double));
  return EVCOMB_OK;
}

evcomb_status evcomb_session_nullspace_dim(const evcomb_session* session,
                                           size_t* dimension) {
  if (session == nullptr || dimension == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  if (!session->session.solved()) return EVCOMB_ERR_STATE;
  *dimension = evcomb::NullSpaceBasis(session->session.model()).size();
  return EVCOMB_OK;
}

size_t evcomb_session_query_count(const evcomb_session* session) {
  if (session == nullptr || !session->session.solved()) return 0;
  return session->session.rows().size();
}

evcomb_status evcomb_session_query(const evcomb_session* session, size_t index,
                                   evcomb_interval* out) {
  if (session == nullptr || out == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  if (!session->session.solved()) return EVCOMB_ERR_STATE;
  const auto& rows = session->session.rows();
  if (index >= rows.size()) return EVCOMB_ERR_INVALID_ARGUMENT;
  if (!rows[index].error.empty()) return EVCOMB_ERR_IMPOSSIBLE_CONDITION;
  Fill(rows[index].interval, out);
  return EVCOMB_OK;
}

evcomb_status evcomb_session_ask(evcomb_session* session, const char* query,
                                 evcomb_interval* out) {
  if (session == nullptr || query == nullptr || out == nullptr) {
    return EVCOMB_ERR_INVALID_ARGUMENT;
  }
  if (!session->session.solved()) {
    session->error = "model not solved";
    return EVCOMB_ERR_STATE;
  }
  return Guard(session, [&] { Fill(session->session.Ask(query), out); });
}

evcomb_status evcomb_session_report(evcomb_session* session, evcomb_format format,
                                    int flags, char** out) {
  if (session == nullptr || out == nullptr) return EVCOMB_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  if (!session->failure && !session->session.solved()) {
    session->error = "nothing to report";
    return EVCOMB_ERR_STATE;
  }
  return Guard(session, [&] {
    const evcomb::ReportTable table =
        session->failure ? *session->failure
                         : session->session.Report((flags & EVCOMB_REPORT_JDV) != 0,
                                                   (flags & EVCOMB_REPORT_NULLSPACE) != 0);
    const std::string text = evcomb::EmitReport(
        table, format == EVCOMB_FORMAT_JSON ? evcomb::ReportFormat::kJson
                                            : evcomb::ReportFormat::kText);
    char* buffer = static_cast<char*>(std::malloc(text.size() + 1));
    if (buffer == nullptr) throw std::bad_alloc();
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out = buffer;
  });
}

void evcomb_string_free(char* text) { std::free(text); }

}  // extern "C"
