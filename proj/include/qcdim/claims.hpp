#ifndef QCDIM_CLAIMS_HPP
#define QCDIM_CLAIMS_HPP

// Independent re-derivation of the numerical statements behind the improved
// line bounds: balance roots, positivity ranges of the gap functions along
// the split schedules, the k thresholds, and the bound invariants on grids.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qcdim/bounds.hpp"
#include "qcdim/hpreal.hpp"

namespace qcdim {

/// A point value or a closed interval [lo, hi].
struct ClaimValue {
  HPReal lo;
  HPReal hi;
  bool interval = false;

  static ClaimValue point(HPReal v);
  static ClaimValue range(HPReal lo, HPReal hi);
};

struct ClaimResult {
  std::string claim_id;
  std::string description;
  ClaimValue expected;
  ClaimValue computed;
  HPReal tolerance;
  bool passed = false;
  std::string paper_location;
};

/// passed <=> |computed - expected| <= tolerance, endpoint-wise for ranges.
bool within_tolerance(const ClaimValue& expected, const ClaimValue& computed,
                      const HPReal& tolerance);

enum class SplitSchedule { Pow60, Pow27Complement, Pow99, Pow49Complement };

std::string_view to_string(SplitSchedule s);
HPReal apply_schedule(SplitSchedule s, const HPReal& x);

/// Sign of gap(which, schedule(x), x), evaluated with enough guard digits
/// that the sign reflects the formula and not rounding noise.
int gap_sign_along_schedule(GapKind which, SplitSchedule schedule,
                            const HPReal& x);

/// Scans x -> g(schedule(x), x) on [1e-6, 1 - 1e-6] with `scan_points`
/// cells, refines each sign change by bisection and compares the positivity
/// interval with the published one (endpoint tolerance 5e-3).
/// Throws PairingError unless (which, schedule) is one of
/// (g0, pow60), (g0, pow27_complement), (g1, pow99), (g1, pow49_complement).
ClaimResult positivity_range(GapKind which, SplitSchedule schedule,
                             Precision p = Precision(), int scan_points = 2000);

/// x0^60 ~ 1.5e-12, y0^99 ~ 2.67e-21 (5%) and g2(2.67e-21, 1-1e-40) ~
/// 2.67e-21 (1%).
std::vector<ClaimResult> threshold_consistency(Precision p = Precision());

/// The two balance-root reproductions.
std::vector<ClaimResult> root_claims(Precision p = Precision());

/// Bound invariants on random and regular grids (collapse, duality, strict
/// improvement, k/K round trip). `seed` drives the random samples.
std::vector<ClaimResult> invariant_claims(Precision p, std::uint64_t seed);

struct VerifyOptions {
  Precision precision;
  /// Glob over claim ids ('*', '?', '[...]'); empty selects everything.
  std::string filter;
  std::uint64_t seed = 20240101;
  int scan_points = 2000;
  /// Written into the report header verbatim; see report_timestamp().
  std::string timestamp_utc;
  std::string artifact_version;
};

struct VerifySummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
  std::vector<ClaimResult> results;  ///< sorted by claim_id
};

/// Ids of every claim verify_all knows about, sorted.
std::vector<std::string> claim_ids();

/// Throws UsageError for a malformed glob (unbalanced '[').
void validate_claim_filter(const std::string& filter);
bool glob_match(std::string_view pattern, std::string_view text);

/// Runs every selected claim without touching the filesystem.
VerifySummary run_claims(const VerifyOptions& options);

/// run_claims plus the JSON report at `report_path` (IoError if unwritable).
VerifySummary verify_all(const std::filesystem::path& report_path,
                         const VerifyOptions& options);

/// JSON body of the report (rows only), deterministic for fixed inputs.
std::string claims_json_rows(const VerifySummary& summary);
/// Plain-text table, one claim per line.
std::string claims_text_table(const VerifySummary& summary);

/// SOURCE_DATE_EPOCH when set (reproducible builds convention), otherwise the
/// current time, as an ISO-8601 UTC string.
std::string report_timestamp();

}  // namespace qcdim

#endif  // QCDIM_CLAIMS_HPP
