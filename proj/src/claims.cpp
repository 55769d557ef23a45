#include "qcdim/claims.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qcdim/errors.hpp"
#include "qcdim/numerics.hpp"

namespace qcdim {

using ordered_json = nlohmann::ordered_json;

ClaimValue ClaimValue::point(HPReal v) {
  HPReal copy = v;
  return ClaimValue{std::move(v), std::move(copy), false};
}

ClaimValue ClaimValue::range(HPReal lo, HPReal hi) {
  return ClaimValue{std::move(lo), std::move(hi), true};
}

bool within_tolerance(const ClaimValue& expected, const ClaimValue& computed,
                      const HPReal& tolerance) {
  return abs(computed.lo - expected.lo) <= tolerance &&
         abs(computed.hi - expected.hi) <= tolerance;
}

std::string_view to_string(SplitSchedule s) {
  switch (s) {
    case SplitSchedule::Pow60: return "pow60";
    case SplitSchedule::Pow27Complement: return "pow27_complement";
    case SplitSchedule::Pow99: return "pow99";
    case SplitSchedule::Pow49Complement: return "pow49_complement";
  }
  return "unknown";
}

HPReal apply_schedule(SplitSchedule s, const HPReal& x) {
  switch (s) {
    case SplitSchedule::Pow60: return pow(x, 60);
    case SplitSchedule::Pow27Complement: return pow(1 - x, 27);
    case SplitSchedule::Pow99: return pow(x, 99);
    case SplitSchedule::Pow49Complement: return pow(1 - x, 49);
  }
  throw DomainError("unknown split schedule");
}

int gap_sign_along_schedule(GapKind which, SplitSchedule schedule,
                            const HPReal& x) {
  const Precision base = x.precision();
  Precision p = guarded_precision(base, apply_schedule(schedule, x));
  for (int attempt = 0; attempt < 4; ++attempt) {
    const HPReal xp = x.with_precision(p);
    const HPReal v = gap_value(which, apply_schedule(schedule, xp), xp);
    const HPReal noise = pow(HPReal(10L, p), -(p.digits() - 15));
    if (abs(v) > noise) return v.sign() > 0 ? 1 : -1;
    p = p.plus(p.digits());
  }
  return 0;
}

namespace {

struct PublishedRange {
  GapKind which;
  SplitSchedule schedule;
  const char* id;
  const char* lo;
  const char* hi;
  const char* location;
};

// Positivity intervals as published; 0 and 1 stand for the open ends.
constexpr PublishedRange kPublishedRanges[] = {
    {GapKind::G0, SplitSchedule::Pow60, "range.g0_pow60", "0", "0.986",
     "lower-bound theorem, proof of case (1): range 0 < x < 0.986..."},
    {GapKind::G0, SplitSchedule::Pow27Complement, "range.g0_pow27_complement",
     "0.179", "1", "lower-bound theorem, proof of case (2): range 0.179... < x < 1"},
    {GapKind::G1, SplitSchedule::Pow99, "range.g1_pow99", "0", "1",
     "upper-bound theorem, proof of case (1): every 0 < x <= 1"},
    {GapKind::G1, SplitSchedule::Pow49Complement, "range.g1_pow49_complement",
     "0.119", "1", "upper-bound theorem, proof of case (2): range 0.119... < x < 1"},
};

const PublishedRange& published_range(GapKind which, SplitSchedule schedule) {
  for (const auto& r : kPublishedRanges) {
    if (r.which == which && r.schedule == schedule) return r;
  }
  throw PairingError("no published positivity range for (" +
                     std::string(to_string(which)) + ", " +
                     std::string(to_string(schedule)) + ")");
}

HPReal tolerance_digits(Precision p) {
  return pow(HPReal(10L, p), -(p.digits() - 10));
}

}  // namespace

ClaimResult positivity_range(GapKind which, SplitSchedule schedule, Precision p,
                             int scan_points) {
  const PublishedRange& pub = published_range(which, schedule);
  const HPReal scan_lo = HPReal::parse("1e-6", p);
  const HPReal scan_hi = 1 - scan_lo;

  const RealFn sign_fn = [which, schedule](const HPReal& x) {
    return HPReal(static_cast<long>(gap_sign_along_schedule(which, schedule, x)),
                  x.precision());
  };
  const std::vector<Bracket> brackets =
      scan_sign_change(sign_fn, scan_lo, scan_hi, scan_points);

  std::vector<HPReal> roots;
  for (const Bracket& b : brackets) {
    roots.push_back(bisect(sign_fn, b, HPReal::parse("1e-20", p)));
  }

  const int first_sign = gap_sign_along_schedule(which, schedule, scan_lo);
  // The positivity set is a single interval: positive-then-negative gives
  // [scan_lo, root], negative-then-positive gives [root, scan_hi].
  HPReal lo = scan_lo;
  HPReal hi = scan_hi;
  bool shape_ok = false;
  if (roots.empty()) {
    shape_ok = first_sign > 0;
  } else if (roots.size() == 1) {
    shape_ok = true;
    if (first_sign > 0) {
      hi = roots.front();
    } else {
      lo = roots.front();
    }
  }
  if (!shape_ok) {
    // No single positivity interval; report the hull of the sign changes.
    if (!roots.empty()) {
      lo = roots.front();
      hi = roots.back();
    }
  }

  ClaimResult r;
  r.claim_id = pub.id;
  std::ostringstream desc;
  desc << to_string(which) << "(" << to_string(schedule) << "(x), x) > 0 on the "
       << "published range; " << roots.size() << " sign change(s) on [1e-6, 1-1e-6]";
  if (!roots.empty()) desc << ", refined at " << roots.front().to_string(12);
  r.description = desc.str();
  r.expected = ClaimValue::range(HPReal::parse(pub.lo, p), HPReal::parse(pub.hi, p));
  r.computed = ClaimValue::range(std::move(lo), std::move(hi));
  r.tolerance = HPReal::parse("5e-3", p);
  r.passed = shape_ok && within_tolerance(r.expected, r.computed, r.tolerance);
  r.paper_location = pub.location;
  return r;
}

std::vector<ClaimResult> root_claims(Precision p) {
  std::vector<ClaimResult> out;
  struct RootSpec {
    int a, b;
    const char* id;
    const char* expected;
    const char* tol;
    const char* location;
  };
  const RootSpec specs[] = {
      {60, 27, "root.balance_60_27", "0.635212", "5e-7",
       "lower-bound theorem: case split at 0.635212..."},
      {99, 49, "root.balance_99_49", "0.6197", "5e-5",
       "upper-bound theorem: case split at 0.6197..."},
  };
  for (const RootSpec& s : specs) {
    ClaimResult r;
    r.claim_id = s.id;
    HPReal x = balance_root(s.a, s.b, p);
    r.description = "unique x in (0,1) with x^" + std::to_string(s.a) +
                    " = (1-x)^" + std::to_string(s.b) + ", refined " +
                    x.to_string(25);
    r.expected = ClaimValue::point(HPReal::parse(s.expected, p));
    r.computed = ClaimValue::point(std::move(x));
    r.tolerance = HPReal::parse(s.tol, p);
    r.passed = within_tolerance(r.expected, r.computed, r.tolerance);
    r.paper_location = s.location;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ClaimResult> threshold_consistency(Precision p) {
  std::vector<ClaimResult> out;

  auto relative_claim = [&](const char* id, std::string description,
                            HPReal computed, const char* expected,
                            const char* rel_tol, const char* location) {
    ClaimResult r;
    r.claim_id = id;
    r.description = std::move(description);
    const HPReal e = HPReal::parse(expected, p);
    r.expected = ClaimValue::point(e);
    r.computed = ClaimValue::point(std::move(computed));
    r.tolerance = e * HPReal::parse(rel_tol, p);
    r.passed = within_tolerance(r.expected, r.computed, r.tolerance);
    r.paper_location = location;
    out.push_back(std::move(r));
  };

  relative_claim("threshold.lower_split",
                 "largest lower-bound split parameter x0^60, x0 = balance_root(60,27)",
                 pow(balance_root(60, 27, p), 60), "1.5e-12", "0.05",
                 "lower-bound theorem hypothesis k >= 1.5e-12");
  relative_claim("threshold.upper_split",
                 "largest upper-bound split parameter y0^99, y0 = balance_root(99,49)",
                 pow(balance_root(99, 49, p), 99), "2.67e-21", "0.05",
                 "upper-bound theorem hypothesis k >= 2.67e-21");

  const HPReal k2 = upper_split_threshold(p);
  const HPReal L = 1 - HPReal::parse("1e-40", p);
  relative_claim("threshold.g2_point",
                 "g2(2.67e-21, 1-1e-40) at working precision",
                 gap_value(GapKind::G2, k2, L), "2.67e-21", "0.01",
                 "upper-bound theorem, proof of case (3)");
  return out;
}

std::vector<ClaimResult> invariant_claims(Precision p, std::uint64_t seed) {
  std::vector<ClaimResult> out;
  const HPReal tol = tolerance_digits(p);
  const HPReal zero(0L, p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto deviation_claim = [&](const char* id, std::string description,
                             HPReal worst, const char* location) {
    ClaimResult r;
    r.claim_id = id;
    r.description = std::move(description) + "; worst deviation " + worst.to_string(6);
    r.expected = ClaimValue::point(zero);
    r.computed = ClaimValue::point(std::move(worst));
    r.tolerance = tol;
    r.passed = within_tolerance(r.expected, r.computed, r.tolerance);
    r.paper_location = location;
    out.push_back(std::move(r));
  };

  auto count_claim = [&](const char* id, std::string description, long violations,
                         const char* location) {
    ClaimResult r;
    r.claim_id = id;
    r.description = std::move(description);
    r.expected = ClaimValue::point(zero);
    r.computed = ClaimValue::point(HPReal(violations, p));
    r.tolerance = zero;
    r.passed = violations == 0;
    r.paper_location = location;
    out.push_back(std::move(r));
  };

  {
    HPReal worst = zero;
    for (int i = 0; i < 100; ++i) {
      const Distortion d = Distortion::from_k(HPReal(0.999 * unit(rng), p));
      const HPReal k_sq = d.k() * d.k();
      const DimensionValue one(HPReal(1L, p));
      const BoundSet a = antisymmetric_bounds(one, d);
      const BoundSet s = symmetric_bounds(one, d);
      worst = max(worst, abs(a.lower - (1 - k_sq)));
      worst = max(worst, abs(a.upper - (1 + k_sq)));
      worst = max(worst, abs(s.lower - (1 - k_sq)));
    }
    deviation_claim("invariant.clean_line_bounds",
                    "dimension-one sets: antisymmetric (1-k^2, 1+k^2), symmetric "
                    "lower 1-k^2, 100 random k",
                    std::move(worst), "introduction: clean bounds for dimension one");
  }
  {
    HPReal worst = zero;
    const Distortion identity = Distortion::from_k(zero);
    for (int i = 0; i < 100; ++i) {
      const DimensionValue L(HPReal(0.001 + 0.998 * unit(rng), p));
      for (BoundMethod m : {BoundMethod::Astala, BoundMethod::Antisymmetric,
                            BoundMethod::Symmetric, BoundMethod::ComposedLine,
                            BoundMethod::Theorem42, BoundMethod::Theorem43}) {
        const BoundSet b = evaluate_bounds(m, L, identity);
        worst = max(worst, abs(b.lower - L.value()));
        worst = max(worst, abs(b.upper - L.value()));
      }
    }
    deviation_claim("invariant.identity_collapse",
                    "all methods return (L, L) at k = 0, 100 random L",
                    std::move(worst), "all bounds reduce to L for conformal maps");
  }
  {
    HPReal worst = zero;
    for (int i = 0; i < 10000; ++i) {
      const DimensionValue t(HPReal(1e-3 + (2.0 - 1e-3) * unit(rng), p));
      const HPReal k(0.999 * unit(rng), p);
      const HPReal t_star = exponent_maps(t, k).t_star_k;
      const HPReal back = exponent_maps(DimensionValue(t_star), k).t_k;
      worst = max(worst, abs(back - t.value()));
    }
    deviation_claim("invariant.exponent_duality",
                    "t(k) after t*(k) is the identity, 10^4 random (t, k)",
                    std::move(worst), "exponent maps t(k), t*(k)");
  }
  {
    HPReal worst = zero;
    for (int i = 0; i < 10000; ++i) {
      const HPReal K(1.0 + 99.0 * unit(rng), p);
      const Distortion d = Distortion::from_K(K);
      const Distortion back = Distortion::from_k(d.k());
      worst = max(worst, abs(back.K() - K));
    }
    deviation_claim("invariant.k_roundtrip",
                    "K -> k -> K round trip, 10^4 random K in [1, 100]",
                    std::move(worst), "k = (K-1)/(K+1)");
  }
  {
    long lower_violations = 0;
    long upper_violations = 0;
    for (const char* K_text : {"1.01", "2", "10"}) {
      const Distortion d = Distortion::from_K(HPReal::parse(K_text, p));
      for (int i = 0; i < 200; ++i) {
        const DimensionValue L(HPReal::parse("0.005", p) +
                               HPReal::parse("0.99", p) * i / 199);
        const BoundSet lo = improved_lower_bound(L, d);
        const Precision lp = lo.lower.precision();
        if (!(lo.lower - astala_lower(L.value().with_precision(lp),
                                      d.K().with_precision(lp)) > 0)) {
          ++lower_violations;
        }
        const BoundSet up = improved_upper_bound(L, d);
        const Precision up_p = up.upper.precision();
        if (!(astala_upper(L.value().with_precision(up_p),
                           d.K().with_precision(up_p)) - up.upper > 0)) {
          ++upper_violations;
        }
      }
    }
    count_claim("invariant.lower_strict_grid",
                "split lower bound strictly above the classical lower bound on a "
                "200 x {1.01, 2, 10} grid of (L, K)",
                lower_violations, "lower-bound theorem, strict inequality");
    count_claim("invariant.upper_strict_grid",
                "split upper bound strictly below the classical upper bound on a "
                "200 x {1.01, 2, 10} grid of (L, K)",
                upper_violations, "upper-bound theorem, strict inequality");
  }
  return out;
}

namespace {

using ClaimProducer = std::function<std::vector<ClaimResult>(const VerifyOptions&)>;

struct Producer {
  std::vector<std::string> ids;
  ClaimProducer run;
};

std::vector<Producer> producers() {
  std::vector<Producer> out;
  out.push_back({{"root.balance_60_27", "root.balance_99_49"},
                 [](const VerifyOptions& o) { return root_claims(o.precision); }});
  for (const auto& pub : kPublishedRanges) {
    out.push_back({{pub.id}, [which = pub.which, sched = pub.schedule](
                                 const VerifyOptions& o) {
                     return std::vector<ClaimResult>{
                         positivity_range(which, sched, o.precision, o.scan_points)};
                   }});
  }
  out.push_back({{"threshold.g2_point", "threshold.lower_split",
                  "threshold.upper_split"},
                 [](const VerifyOptions& o) { return threshold_consistency(o.precision); }});
  out.push_back({{"invariant.clean_line_bounds", "invariant.exponent_duality",
                  "invariant.identity_collapse", "invariant.k_roundtrip",
                  "invariant.lower_strict_grid", "invariant.upper_strict_grid"},
                 [](const VerifyOptions& o) {
                   return invariant_claims(o.precision, o.seed);
                 }});
  return out;
}

}  // namespace

std::vector<std::string> claim_ids() {
  std::vector<std::string> ids;
  for (const Producer& p : producers()) ids.insert(ids.end(), p.ids.begin(), p.ids.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

void validate_claim_filter(const std::string& filter) {
  bool in_class = false;
  for (char c : filter) {
    if (c == '[') {
      if (in_class) throw UsageError("claim filter: nested '[' in '" + filter + "'");
      in_class = true;
    } else if (c == ']') {
      if (!in_class) throw UsageError("claim filter: unmatched ']' in '" + filter + "'");
      in_class = false;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      throw UsageError("claim filter: control character in pattern");
    }
  }
  if (in_class) throw UsageError("claim filter: unterminated '[' in '" + filter + "'");
}

bool glob_match(std::string_view pattern, std::string_view text) {
  return ::fnmatch(std::string(pattern).c_str(), std::string(text).c_str(), 0) == 0;
}

VerifySummary run_claims(const VerifyOptions& options) {
  validate_claim_filter(options.filter);
  auto selected = [&](const std::string& id) {
    return options.filter.empty() || glob_match(options.filter, id);
  };

  // Producers are independent; run the selected ones concurrently.
  std::vector<std::future<std::vector<ClaimResult>>> jobs;
  for (Producer& p : producers()) {
    if (std::none_of(p.ids.begin(), p.ids.end(), selected)) continue;
    jobs.push_back(std::async(std::launch::async,
                              [run = std::move(p.run), &options] { return run(options); }));
  }

  VerifySummary summary;
  for (auto& job : jobs) {
    for (ClaimResult& r : job.get()) {
      if (selected(r.claim_id)) summary.results.push_back(std::move(r));
    }
  }
  std::sort(summary.results.begin(), summary.results.end(),
            [](const ClaimResult& a, const ClaimResult& b) { return a.claim_id < b.claim_id; });
  summary.total = static_cast<int>(summary.results.size());
  summary.passed = static_cast<int>(std::count_if(
      summary.results.begin(), summary.results.end(),
      [](const ClaimResult& r) { return r.passed; }));
  summary.failed = summary.total - summary.passed;
  return summary;
}

namespace {

ordered_json value_json(const ClaimValue& v) {
  if (v.interval) return ordered_json::array({v.lo.to_string(30), v.hi.to_string(30)});
  return v.lo.to_string(30);
}

}  // namespace

std::string claims_json_rows(const VerifySummary& summary) {
  ordered_json rows = ordered_json::array();
  for (const ClaimResult& r : summary.results) {
    ordered_json row;
    row["claim_id"] = r.claim_id;
    row["description"] = r.description;
    row["expected"] = value_json(r.expected);
    row["computed"] = value_json(r.computed);
    row["tolerance"] = r.tolerance.to_string(6);
    row["passed"] = r.passed;
    row["paper_location"] = r.paper_location;
    rows.push_back(std::move(row));
  }
  return rows.dump(2);
}

std::string claims_text_table(const VerifySummary& summary) {
  std::ostringstream os;
  auto show = [](const ClaimValue& v) {
    if (v.interval) return "[" + v.lo.to_string(8) + ", " + v.hi.to_string(8) + "]";
    return v.lo.to_string(12);
  };
  for (const ClaimResult& r : summary.results) {
    os << (r.passed ? "PASS  " : "FAIL  ") << r.claim_id << "  computed "
       << show(r.computed) << "  expected " << show(r.expected) << "  tol "
       << r.tolerance.to_string(3) << "\n";
  }
  os << summary.passed << "/" << summary.total << " claims passed\n";
  return os.str();
}

std::string report_timestamp() {
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

VerifySummary verify_all(const std::filesystem::path& report_path,
                         const VerifyOptions& options) {
  VerifySummary summary = run_claims(options);

  ordered_json doc;
  doc["schema_version"] = "1.0";
  doc["command"] = "verify";
  ordered_json config;
  config["precision_digits"] = options.precision.digits();
  config["filter"] = options.filter;
  config["seed"] = options.seed;
  config["scan_points"] = options.scan_points;
  doc["config"] = std::move(config);
  ordered_json header;
  header["precision_digits"] = options.precision.digits();
  header["artifact_version"] = options.artifact_version;
  header["timestamp_utc_iso8601"] = options.timestamp_utc;
  doc["header"] = std::move(header);
  doc["rows"] = ordered_json::parse(claims_json_rows(summary));
  ordered_json counts;
  counts["total"] = summary.total;
  counts["passed"] = summary.passed;
  counts["failed"] = summary.failed;
  doc["summary"] = std::move(counts);

  std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open report file '" + report_path.string() + "'");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("failed writing report file '" + report_path.string() + "'");
  return summary;
}

}  // namespace qcdim
