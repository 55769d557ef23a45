#include "qcdim/qcdim.h"

#include <cstring>
#include <exception>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcdim/bounds.hpp"
#include "qcdim/commands.hpp"
#include "qcdim/errors.hpp"

struct qcd_session {
  qcdim::RunConfig config;
  std::vector<std::string> pending_warnings;
  std::string last_error;
};

struct qcd_result {
  qcdim::CommandOutput output;
  bool strict = false;
};

namespace {

qcd_status status_of(qcdim::ErrorCode code) {
  switch (code) {
    case qcdim::ErrorCode::Domain: return QCD_ERR_DOMAIN;
    case qcdim::ErrorCode::BracketInvalid: return QCD_ERR_BRACKET;
    case qcdim::ErrorCode::NoConvergence: return QCD_ERR_NO_CONVERGENCE;
    case qcdim::ErrorCode::DegenerateInput: return QCD_ERR_DEGENERATE;
    case qcdim::ErrorCode::Hypothesis: return QCD_ERR_HYPOTHESIS;
    case qcdim::ErrorCode::Pairing: return QCD_ERR_PAIRING;
    case qcdim::ErrorCode::Resource: return QCD_ERR_RESOURCE;
    case qcdim::ErrorCode::Io: return QCD_ERR_IO;
    case qcdim::ErrorCode::Usage: return QCD_ERR_USAGE;
  }
  return QCD_ERR_INTERNAL;
}

struct BufferTooSmall : std::length_error {
  using std::length_error::length_error;
};

// Runs `body`, translating exceptions into a status and the session message.
template <typename Body>
qcd_status guarded(qcd_session* session, Body&& body) {
  if (!session) return QCD_ERR_USAGE;
  session->last_error.clear();
  try {
    body();
    return QCD_OK;
  } catch (const qcdim::Error& e) {
    session->last_error = e.what();
    return status_of(e.code());
  } catch (const BufferTooSmall& e) {
    session->last_error = e.what();
    return QCD_ERR_BUFFER;
  } catch (const std::bad_alloc&) {
    session->last_error = "out of memory";
    return QCD_ERR_RESOURCE;
  } catch (const std::exception& e) {
    session->last_error = e.what();
    return QCD_ERR_INTERNAL;
  }
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

void copy_out(const std::string& value, char* buffer, std::size_t size) {
  if (!buffer || value.size() + 1 > size) {
    throw BufferTooSmall("buffer of " + std::to_string(size) +
                            " bytes cannot hold " + std::to_string(value.size() + 1));
  }
  std::memcpy(buffer, value.c_str(), value.size() + 1);
}

template <typename Command>
qcd_status run_command(qcd_session* session, qcd_result** out, Command&& command) {
  if (!out) {
    if (session) session->last_error = "result pointer is NULL";
    return QCD_ERR_USAGE;
  }
  *out = nullptr;
  return guarded(session, [&] {
    auto result = std::make_unique<qcd_result>();
    result->output = command(session->config);
    result->strict = session->config.strict;
    auto& w = result->output.warnings;
    w.insert(w.begin(), session->pending_warnings.begin(), session->pending_warnings.end());
    session->pending_warnings.clear();
    *out = result.release();
  });
}

}  // namespace

extern "C" {

const char* qcd_version(void) { return qcdim::kArtifactVersion; }

const char* qcd_status_name(qcd_status status) {
  switch (status) {
    case QCD_OK: return "ok";
    case QCD_ERR_DOMAIN: return "domain";
    case QCD_ERR_BRACKET: return "bracket_invalid";
    case QCD_ERR_NO_CONVERGENCE: return "no_convergence";
    case QCD_ERR_DEGENERATE: return "degenerate_input";
    case QCD_ERR_HYPOTHESIS: return "hypothesis";
    case QCD_ERR_PAIRING: return "pairing";
    case QCD_ERR_RESOURCE: return "resource";
    case QCD_ERR_IO: return "io";
    case QCD_ERR_USAGE: return "usage";
    case QCD_ERR_BUFFER: return "buffer";
    case QCD_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

qcd_status qcd_session_create(qcd_session** out) {
  if (!out) return QCD_ERR_USAGE;
  try {
    *out = new qcd_session();
    return QCD_OK;
  } catch (...) {
    *out = nullptr;
    return QCD_ERR_RESOURCE;
  }
}

void qcd_session_destroy(qcd_session* session) { delete session; }

const char* qcd_session_last_error(const qcd_session* session) {
  return session ? session->last_error.c_str() : "session is NULL";
}

qcd_status qcd_session_set_precision(qcd_session* session, int digits) {
  return guarded(session, [&] {
    std::vector<std::string> warnings;
    session->config.precision = qcdim::resolve_precision(digits, warnings);
    session->pending_warnings.insert(session->pending_warnings.end(), warnings.begin(),
                                     warnings.end());
  });
}

int qcd_session_precision(const qcd_session* session) {
  return session ? session->config.precision.digits() : 0;
}

qcd_status qcd_session_set_format(qcd_session* session, qcd_format format) {
  return guarded(session, [&] {
    switch (format) {
      case QCD_FORMAT_CSV: session->config.format = qcdim::OutputFormat::Csv; return;
      case QCD_FORMAT_JSON: session->config.format = qcdim::OutputFormat::Json; return;
      case QCD_FORMAT_TEXT: session->config.format = qcdim::OutputFormat::Text; return;
    }
    throw qcdim::UsageError("unknown output format");
  });
}

qcd_status qcd_session_set_seed(qcd_session* session, uint64_t seed) {
  return guarded(session, [&] { session->config.seed = seed; });
}

qcd_status qcd_session_set_strict(qcd_session* session, int strict) {
  return guarded(session, [&] { session->config.strict = strict != 0; });
}

qcd_status qcd_session_set_tolerance(qcd_session* session, const char* key, double value) {
  return guarded(session, [&] { session->config.set_tolerance(str(key), value); });
}

qcd_status qcd_bounds(qcd_session* session, const char* L, const char* K, const char* methods,
                      qcd_result** out) {
  return run_command(session, out, [&](const qcdim::RunConfig& cfg) {
    return qcdim::cmd_bounds({str(L), str(K), str(methods)}, cfg);
  });
}

qcd_status qcd_verify(qcd_session* session, const char* filter, const char* report_path,
                      qcd_result** out) {
  return run_command(session, out, [&](const qcdim::RunConfig& cfg) {
    qcdim::VerifyArgs args;
    args.filter = str(filter);
    if (report_path && *report_path) args.report_path = report_path;
    qcdim::RunConfig local = cfg;
    local.output_path.reset();
    return qcdim::cmd_verify(args, local);
  });
}

qcd_status qcd_optimize(qcd_session* session, const char* L, const char* K,
                        const char* direction, qcd_result** out) {
  return run_command(session, out, [&](const qcdim::RunConfig& cfg) {
    qcdim::OptimizeArgs args{str(L), str(K), direction ? direction : "lower"};
    return qcdim::cmd_optimize(args, cfg);
  });
}

qcd_status qcd_dim(qcd_session* session, const char* cantor, const char* map,
                   const char* sandwich, int num_scales, qcd_result** out) {
  return run_command(session, out, [&](const qcdim::RunConfig& cfg) {
    qcdim::DimArgs args;
    args.cantor = str(cantor);
    if (map && *map) args.map = map;
    args.sandwich = str(sandwich);
    if (num_scales > 0) args.num_scales = num_scales;
    return qcdim::cmd_dim(args, cfg);
  });
}

const char* qcd_result_text(const qcd_result* result) {
  return result ? result->output.text.c_str() : "";
}

size_t qcd_result_rows(const qcd_result* result) {
  return result ? static_cast<size_t>(result->output.rows) : 0;
}

size_t qcd_result_failures(const qcd_result* result) {
  return result ? static_cast<size_t>(result->output.failures) : 0;
}

size_t qcd_result_flagged(const qcd_result* result) {
  return result ? static_cast<size_t>(result->output.flagged) : 0;
}

int qcd_result_exit_code(const qcd_result* result) {
  return result ? result->output.exit_code(result->strict) : 1;
}

size_t qcd_result_warning_count(const qcd_result* result) {
  return result ? result->output.warnings.size() : 0;
}

const char* qcd_result_warning(const qcd_result* result, size_t index) {
  if (!result || index >= result->output.warnings.size()) return nullptr;
  return result->output.warnings[index].c_str();
}

void qcd_result_destroy(qcd_result* result) { delete result; }

qcd_status qcd_bound_eval(qcd_session* session, const char* method, const char* L,
                          const char* K, char* lower, size_t lower_size, char* upper,
                          size_t upper_size, int* hypotheses_met) {
  return guarded(session, [&] {
    const auto m = qcdim::parse_bound_method(str(method));
    if (!m) throw qcdim::UsageError("unknown bound method '" + str(method) + "'");
    const qcdim::Precision p = session->config.precision;
    const qcdim::BoundSet b = qcdim::evaluate_bounds(
        *m, qcdim::DimensionValue(qcdim::HPReal::parse(str(L), p)),
        qcdim::Distortion::from_K(qcdim::HPReal::parse(str(K), p)));
    copy_out(b.lower.to_string(), lower, lower_size);
    copy_out(b.upper.to_string(), upper, upper_size);
    if (hypotheses_met) *hypotheses_met = b.hypotheses_met ? 1 : 0;
  });
}

qcd_status qcd_balance_root(qcd_session* session, int a, int b, char* out, size_t out_size) {
  return guarded(session, [&] {
    copy_out(qcdim::balance_root(a, b, session->config.precision).to_string(), out, out_size);
  });
}

qcd_status qcd_gap(qcd_session* session, const char* which, const char* k2, const char* L,
                   const char* k, char* out, size_t out_size) {
  return guarded(session, [&] {
    const std::string name = str(which);
    qcdim::GapKind kind;
    if (name == "g0") {
      kind = qcdim::GapKind::G0;
    } else if (name == "g1") {
      kind = qcdim::GapKind::G1;
    } else if (name == "g2") {
      kind = qcdim::GapKind::G2;
    } else {
      throw qcdim::UsageError("gap function must be g0, g1 or g2, got '" + name + "'");
    }
    const qcdim::Precision p = session->config.precision;
    const qcdim::GapSample g =
        qcdim::gap(kind, qcdim::HPReal::parse(str(k2), p),
                   qcdim::DimensionValue(qcdim::HPReal::parse(str(L), p)),
                   qcdim::HPReal::parse(str(k), p));
    copy_out(g.value.to_string(), out, out_size);
  });
}

}  // extern "C"
