#ifndef QCDIM_COMMANDS_HPP
#define QCDIM_COMMANDS_HPP

// Front-end commands (bounds, verify, optimize, dim) rendered to text. The C
// API wraps these; the executable only parses flags and prints.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcdim/hpreal.hpp"

namespace qcdim {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kSchemaVersion = "1.0";

enum class OutputFormat { Csv, Json, Text };

std::string_view to_string(OutputFormat f);
/// Throws UsageError for anything but csv, json or text.
OutputFormat parse_output_format(std::string_view name);

struct RunConfig {
  Precision precision;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> output_path;
  std::uint64_t seed = 20240101;
  bool strict = false;
  std::map<std::string, double> tolerance_overrides;

  /// Keys accepted by set_tolerance.
  static const std::map<std::string, double>& tolerance_defaults();
  /// Throws UsageError for an unknown key or a negative value.
  void set_tolerance(const std::string& key, double value);
  double tolerance(const std::string& key) const;
};

/// Reads QCDIM_PRECISION; nullopt when unset or empty. Throws UsageError if
/// the value is not an integer.
std::optional<int> precision_from_environment();

/// Precision for a requested digit count. Counts below the 30-digit floor
/// are honoured as forced precision and a warning is appended; counts below
/// 2 raise UsageError.
Precision resolve_precision(int digits, std::vector<std::string>& warnings);

enum class GridDomain {
  LineDimension,      ///< 0 < L <= 1
  OpenLineDimension,  ///< 0 < L < 1
  Distortion,         ///< K >= 1
};

/// A single value or "start:stop:count" with inclusive endpoints. Values
/// outside the domain raise UsageError naming the domain; nothing is
/// clamped.
std::vector<HPReal> parse_grid(std::string_view text, std::string_view name,
                               GridDomain domain, Precision p);

struct CommandOutput {
  std::string text;  ///< rendered in the configured format
  int rows = 0;
  int failures = 0;  ///< verification or invariant failures
  int flagged = 0;   ///< cells that raised a domain error
  std::vector<std::string> warnings;

  /// 0, or 1 when failures occurred (or flagged cells under --strict).
  int exit_code(bool strict) const;
};

struct BoundsArgs {
  std::string L;
  std::string K;
  std::string methods;  ///< comma-separated; empty selects every method
};
CommandOutput cmd_bounds(const BoundsArgs& args, const RunConfig& cfg);

struct VerifyArgs {
  std::string filter;
  std::string report_path = "verify_report.json";
  int scan_points = 2000;
};
CommandOutput cmd_verify(const VerifyArgs& args, const RunConfig& cfg);

struct OptimizeArgs {
  std::string L;
  std::string K;
  std::string direction = "lower";
};
CommandOutput cmd_optimize(const OptimizeArgs& args, const RunConfig& cfg);

struct DimArgs {
  std::string cantor;
  std::string map = "identity";
  std::string sandwich;  ///< comma-separated bound methods; empty skips
  int num_scales = 12;
};
CommandOutput cmd_dim(const DimArgs& args, const RunConfig& cfg);

}  // namespace qcdim

#endif  // QCDIM_COMMANDS_HPP
