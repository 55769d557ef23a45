// qcdim command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 verification or invariant failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcdim/qcdim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct SessionDeleter {
  void operator()(qcd_session* s) const { qcd_session_destroy(s); }
};
struct ResultDeleter {
  void operator()(qcd_result* r) const { qcd_result_destroy(r); }
};
using Session = std::unique_ptr<qcd_session, SessionDeleter>;
using Result = std::unique_ptr<qcd_result, ResultDeleter>;

int exit_for_status(qcd_status s) {
  switch (s) {
    case QCD_OK: return kExitOk;
    case QCD_ERR_USAGE:
    case QCD_ERR_DOMAIN:
    case QCD_ERR_RESOURCE:
    case QCD_ERR_PAIRING:
    case QCD_ERR_IO:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

int fail(const qcd_session* session, qcd_status s) {
  std::cerr << "error: " << qcd_session_last_error(session) << "\n";
  return exit_for_status(s);
}

std::optional<int> environment_precision() {
  const char* raw = std::getenv("QCDIM_PRECISION");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0') throw CLI::ValidationError("QCDIM_PRECISION", "not an integer: " + std::string(raw));
  return static_cast<int>(v);
}

struct Globals {
  std::optional<int> precision;
  std::string format = "csv";
  std::string out;
  bool strict = false;
  std::uint64_t seed = 20240101;
  std::vector<std::string> tolerances;
};

// Applies global flags to the session; returns an exit code on failure.
std::optional<int> configure(qcd_session* session, const Globals& g) {
  int digits = 80;
  try {
    if (auto env = environment_precision()) digits = *env;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (g.precision) digits = *g.precision;
  if (qcd_status s = qcd_session_set_precision(session, digits); s != QCD_OK) {
    return fail(session, s);
  }

  const qcd_format format = g.format == "json" ? QCD_FORMAT_JSON
                            : g.format == "text" ? QCD_FORMAT_TEXT
                                                 : QCD_FORMAT_CSV;
  qcd_session_set_format(session, format);
  qcd_session_set_strict(session, g.strict ? 1 : 0);
  qcd_session_set_seed(session, g.seed);

  for (const std::string& kv : g.tolerances) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --tol expects key=value, got '" << kv << "'\n";
      return kExitUsage;
    }
    char* end = nullptr;
    const std::string value = kv.substr(eq + 1);
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') {
      std::cerr << "error: --tol value for '" << kv.substr(0, eq) << "' is not a number\n";
      return kExitUsage;
    }
    if (qcd_status s = qcd_session_set_tolerance(session, kv.substr(0, eq).c_str(), v);
        s != QCD_OK) {
      return fail(session, s);
    }
  }
  return std::nullopt;
}

// Prints warnings, writes the text and returns the command's exit code.
int finish(const qcd_result* result, const std::string& out_path) {
  for (std::size_t i = 0; i < qcd_result_warning_count(result); ++i) {
    std::cerr << "warning: " << qcd_result_warning(result, i) << "\n";
  }
  if (out_path.empty()) {
    std::cout << qcd_result_text(result);
    std::cout.flush();
  } else {
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    file << qcd_result_text(result);
    if (!file) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitUsage;
    }
  }
  return qcd_result_exit_code(result);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension-distortion bounds for quasiconformal images of line subsets"};
  app.set_version_flag("--version", qcd_version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--precision", g.precision, "Working precision in decimal digits (default 80)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--out", g.out, "Write output here (verify: the JSON report path)");
  app.add_flag("--strict", g.strict, "Exit 1 when any cell raised a domain error");
  app.add_option("--seed", g.seed, "Seed for randomized grids");
  app.add_option("--tol", g.tolerances, "Tolerance override key=value (repeatable)");

  std::string L, K, methods, direction = "lower";
  auto* bounds = app.add_subcommand("bounds", "Tabulate lower/upper bounds");
  bounds->add_option("--L", L, "Dimension L or grid start:stop:count")->required();
  bounds->add_option("--K", K, "Distortion K or grid start:stop:count (default 1)");
  bounds->add_option("--methods", methods, "Comma-separated bound methods (default all)");

  std::string filter, report = "verify_report.json";
  auto* verify = app.add_subcommand("verify", "Re-derive the published numerical claims");
  verify->add_option("--filter", filter, "Glob over claim ids");

  auto* optimize = app.add_subcommand("optimize", "Optimise the split parameter k2");
  optimize->add_option("--L", L, "Dimension L or grid")->required();
  optimize->add_option("--K", K, "Distortion K or grid")->required();
  optimize->add_option("--direction", direction, "lower or upper")
      ->check(CLI::IsMember({"lower", "upper"}));

  std::string cantor, map = "identity", sandwich;
  int scales = 12;
  auto* dim = app.add_subcommand("dim", "Box-counting experiments on Cantor sets");
  dim->add_option("--cantor", cantor, "m:q:n[:offset[:scale]] with ratio 1/q")->required();
  dim->add_option("--map", map, "identity, affine:s:b or power:a");
  dim->add_option("--sandwich", sandwich, "Bound methods to check the estimate against");
  dim->add_option("--scales", scales, "Number of fitted box scales")->check(CLI::Range(4, 60));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  qcd_session* raw = nullptr;
  if (qcd_session_create(&raw) != QCD_OK) {
    std::cerr << "error: cannot create session\n";
    return kExitFailure;
  }
  Session session(raw);
  if (auto code = configure(session.get(), g)) return *code;

  qcd_result* result = nullptr;
  qcd_status s = QCD_OK;
  std::string out_path = g.out;
  if (bounds->parsed()) {
    if (K.empty()) K = "1";
    s = qcd_bounds(session.get(), L.c_str(), K.c_str(), methods.c_str(), &result);
  } else if (verify->parsed()) {
    if (!g.out.empty()) report = g.out;
    out_path.clear();
    s = qcd_verify(session.get(), filter.c_str(), report.c_str(), &result);
  } else if (optimize->parsed()) {
    s = qcd_optimize(session.get(), L.c_str(), K.c_str(), direction.c_str(), &result);
  } else if (dim->parsed()) {
    s = qcd_dim(session.get(), cantor.c_str(), map.c_str(), sandwich.c_str(), scales, &result);
  }
  if (s != QCD_OK) return fail(session.get(), s);

  Result owned(result);
  return finish(owned.get(), out_path);
}
