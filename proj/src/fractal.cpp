#include "qcdim/fractal.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>

#include "qcdim/errors.hpp"
#include "qcdim/numerics.hpp"

namespace qcdim {

namespace {

// Finest dyadic level; box indices stay inside a signed 64-bit integer.
constexpr int kMaxLevel = 62;

std::vector<std::string> split_fields(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    out.emplace_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  return out;
}

double parse_double(const std::string& field, std::string_view what) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(v)) {
    throw UsageError(std::string(what) + ": '" + field + "' is not a number");
  }
  return v;
}

int parse_int(const std::string& field, std::string_view what) {
  char* end = nullptr;
  const long v = std::strtol(field.c_str(), &end, 10);
  if (field.empty() || end != field.c_str() + field.size() || v < INT32_MIN ||
      v > INT32_MAX) {
    throw UsageError(std::string(what) + ": '" + field + "' is not an integer");
  }
  return static_cast<int>(v);
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string csv_number(double v) { return HPReal(v, Precision(30)).to_string(30); }

}  // namespace

// -- CantorSpec -------------------------------------------------------------

void CantorSpec::validate() const {
  if (pieces < 2) throw DomainError("CantorSpec: pieces must be >= 2");
  if (!(ratio > 0) || !(ratio * pieces <= 1.0 + 1e-15)) {
    throw DomainError("CantorSpec: ratio must lie in (0, 1/m]");
  }
  if (depth < 1) throw DomainError("CantorSpec: depth must be >= 1");
  if (!(scale > 0) || !std::isfinite(scale) || !std::isfinite(offset)) {
    throw DomainError("CantorSpec: scale must be positive and offset finite");
  }
}

double CantorSpec::analytic_dimension() const {
  return std::log(static_cast<double>(pieces)) / std::log(1.0 / ratio);
}

HPReal CantorSpec::analytic_dimension(Precision p) const {
  const HPReal v = log(HPReal(static_cast<long>(pieces), p)) / -log(HPReal(ratio, p));
  // m r = 1 up to the double rounding of r: the set is a full segment.
  return v > 1 ? HPReal(1L, p) : v;
}

std::string CantorSpec::label() const {
  std::string s = std::to_string(pieces) + ":" + short_number(1.0 / ratio) + ":" +
                  std::to_string(depth);
  if (offset != 0.0 || scale != 1.0) {
    s += ":" + short_number(offset) + ":" + short_number(scale);
  }
  return s;
}

CantorSpec CantorSpec::parse(std::string_view text) {
  const auto f = split_fields(text);
  if (f.size() < 3 || f.size() > 5) {
    throw UsageError("cantor spec must be m:q:n[:offset[:scale]] with r = 1/q, got '" +
                     std::string(text) + "'");
  }
  CantorSpec spec;
  spec.pieces = parse_int(f[0], "cantor pieces");
  const double q = parse_double(f[1], "cantor inverse ratio");
  if (!(q > 0)) throw DomainError("CantorSpec: inverse ratio must be positive");
  spec.ratio = 1.0 / q;
  spec.depth = parse_int(f[2], "cantor depth");
  if (f.size() > 3) spec.offset = parse_double(f[3], "cantor offset");
  if (f.size() > 4) spec.scale = parse_double(f[4], "cantor scale");
  spec.validate();
  return spec;
}

// -- Covers -----------------------------------------------------------------

bool IntervalCover::well_formed() const {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (!(intervals[i].right > intervals[i].left)) return false;
    if (i > 0 && intervals[i].left < intervals[i - 1].right) return false;
  }
  return true;
}

IntervalCover generate_cantor(const CantorSpec& spec) {
  spec.validate();
  const double count = std::pow(static_cast<double>(spec.pieces), spec.depth);
  if (count > kMaxCantorIntervals) {
    throw ResourceError("generate_cantor: m^n = " + short_number(count) +
                        " exceeds the cap of 1e7 intervals");
  }

  // Rebuild r from q = 1/r so ratios such as 1/3 are exact to quad precision.
  const Coord q = std::max(static_cast<Coord>(1.0 / spec.ratio), static_cast<Coord>(spec.pieces));
  const Coord r = 1 / q;
  const Coord gap_step = (1 - r) / (spec.pieces - 1);

  std::vector<Coord> lefts{static_cast<Coord>(spec.offset)};
  Coord length = spec.scale;
  for (int level = 0; level < spec.depth; ++level) {
    std::vector<Coord> next;
    next.reserve(lefts.size() * spec.pieces);
    for (const Coord a : lefts) {
      for (int j = 0; j < spec.pieces; ++j) next.push_back(a + j * gap_step * length);
    }
    lefts = std::move(next);
    length *= r;
  }

  IntervalCover cover;
  cover.generation = spec.depth;
  cover.intervals.reserve(lefts.size());
  for (const Coord a : lefts) cover.intervals.push_back({a, a + length});
  return cover;
}

// -- Model maps -------------------------------------------------------------

ModelMap ModelMap::identity() { return ModelMap{}; }

ModelMap ModelMap::affine(double slope, double intercept) {
  if (slope == 0.0 || !std::isfinite(slope) || !std::isfinite(intercept)) {
    throw DomainError("affine map needs a finite nonzero slope");
  }
  return ModelMap{MapKind::Affine, slope, intercept, 1.0};
}

ModelMap ModelMap::power_stretch(double a) {
  if (!(a >= 1) || !std::isfinite(a)) {
    throw DomainError("power stretch exponent must be >= 1, got " + short_number(a));
  }
  return ModelMap{MapKind::PowerStretch, 1.0, 0.0, a};
}

double ModelMap::distortion_K() const {
  return kind == MapKind::PowerStretch ? exponent : 1.0;
}

Coord ModelMap::operator()(Coord x) const {
  switch (kind) {
    case MapKind::Identity:
      return x;
    case MapKind::Affine:
      return static_cast<Coord>(slope) * x + static_cast<Coord>(intercept);
    case MapKind::PowerStretch: {
      const Coord m = powq(fabsq(x), static_cast<Coord>(exponent));
      return x < 0 ? -m : m;
    }
  }
  return x;
}

std::string ModelMap::label() const {
  switch (kind) {
    case MapKind::Identity: return "identity";
    case MapKind::Affine: return "affine:" + short_number(slope) + ":" + short_number(intercept);
    case MapKind::PowerStretch: return "power:" + short_number(exponent);
  }
  return "unknown";
}

ModelMap ModelMap::parse(std::string_view text) {
  const auto f = split_fields(text);
  if (f[0] == "identity" && f.size() == 1) return identity();
  if (f[0] == "affine" && f.size() == 3) {
    return affine(parse_double(f[1], "affine slope"), parse_double(f[2], "affine intercept"));
  }
  if (f[0] == "power" && f.size() == 2) return power_stretch(parse_double(f[1], "power exponent"));
  throw UsageError("map must be identity, affine:slope:intercept or power:a, got '" +
                   std::string(text) + "'");
}

IntervalCover apply_map(const ModelMap& map, const IntervalCover& cover) {
  IntervalCover out;
  out.generation = cover.generation;
  out.intervals.reserve(cover.intervals.size());
  for (const Interval& iv : cover.intervals) {
    if (map.kind == MapKind::PowerStretch && iv.left < 0 && iv.right > 0) {
      throw DomainError("apply_map: interval [" + format_coord(iv.left, 17) + ", " +
                        format_coord(iv.right, 17) +
                        "] straddles 0; split the cover at 0 first");
    }
    const Coord a = map(iv.left);
    const Coord b = map(iv.right);
    out.intervals.push_back({a < b ? a : b, a < b ? b : a});
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const Interval& x, const Interval& y) { return x.left < y.left; });
  return out;
}

IntervalCover split_at_zero(const IntervalCover& cover) {
  IntervalCover out;
  out.generation = cover.generation;
  for (const Interval& iv : cover.intervals) {
    if (iv.left < 0 && iv.right > 0) {
      out.intervals.push_back({iv.left, 0});
      out.intervals.push_back({0, iv.right});
    } else {
      out.intervals.push_back(iv);
    }
  }
  return out;
}

// -- Box counting -----------------------------------------------------------

namespace {

long long box_index(Coord x, Coord lo, Coord delta, long long last) {
  const Coord q = floorq((x - lo) / delta);
  if (q <= 0) return 0;
  if (q >= static_cast<Coord>(last)) return last;
  return static_cast<long long>(q);
}

// Occupied boxes of size diameter / 2^level, counted without enumeration.
double count_boxes(const std::vector<Interval>& intervals, Coord lo, Coord diameter,
                   int level) {
  const long long last = (1LL << level) - 1;
  const Coord delta = diameter / static_cast<Coord>(1LL << level);
  double count = 0;
  long long covered = -1;
  for (const Interval& iv : intervals) {
    const long long a = std::max(box_index(iv.left, lo, delta, last), covered + 1);
    const long long b = box_index(iv.right, lo, delta, last);
    if (b >= a) {
      count += static_cast<double>(b - a + 1);
      covered = b;
    }
  }
  return count;
}

}  // namespace

DimEstimate box_dimension(const IntervalCover& cover, int num_scales) {
  if (num_scales < 4) throw DomainError("box_dimension: num_scales must be >= 4");
  if (cover.intervals.empty()) throw DegenerateInput("box_dimension: empty cover");

  Coord lo = cover.intervals.front().left;
  Coord hi = cover.intervals.front().right;
  Coord longest = 0;
  for (const Interval& iv : cover.intervals) {
    lo = std::min(lo, iv.left);
    hi = std::max(hi, iv.right);
    longest = std::max(longest, iv.right - iv.left);
  }
  const Coord diameter = hi - lo;
  if (!(diameter > 0)) {
    throw DegenerateInput("box_dimension: cover collapses to a single point");
  }

  const int total = num_scales + 2;
  int finest = kMaxLevel;
  if (longest > 0) {
    finest = std::min(kMaxLevel, static_cast<int>(floorq(log2q(diameter / longest))));
  }
  finest = std::max(finest, total - 1);
  if (finest > kMaxLevel) throw DomainError("box_dimension: num_scales too large");

  std::vector<int> levels;
  for (int i = 2; i < total; ++i) {
    levels.push_back(static_cast<int>(std::lround(static_cast<double>(i) * finest / (total - 1))));
  }

  std::vector<std::future<double>> counts;
  for (int level : levels) {
    counts.push_back(std::async(std::launch::async, [&cover, lo, diameter, level] {
      return count_boxes(cover.intervals, lo, diameter, level);
    }));
  }

  std::vector<std::pair<double, double>> points;
  const double log_diameter = static_cast<double>(log2q(diameter)) * std::log(2.0);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double log_inv_delta = levels[i] * std::log(2.0) - log_diameter;
    points.emplace_back(log_inv_delta, std::log(counts[i].get()));
  }
  const LineFit fit = fit_slope(points);

  const double d = static_cast<double>(diameter);
  return DimEstimate{fit.slope, fit.r2, static_cast<int>(levels.size()),
                     {std::ldexp(d, -levels.back()), std::ldexp(d, -levels.front())}};
}

// -- Sandwich ---------------------------------------------------------------

std::vector<SandwichRow> sandwich_check(const CantorSpec& spec, const ModelMap& map,
                                        const std::vector<BoundMethod>& methods,
                                        double slack, Precision p, int num_scales) {
  const IntervalCover image = apply_map(map, generate_cantor(spec));
  const DimEstimate est = box_dimension(image, num_scales);
  const HPReal L = spec.analytic_dimension(p);
  const double K = map.distortion_K();
  const Distortion d = Distortion::from_K(HPReal(K, p));

  std::vector<SandwichRow> rows;
  for (BoundMethod method : methods) {
    SandwichRow row{spec.label(), map.label(), K, L, est, method, HPReal(p), HPReal(p),
                    true, false, ""};
    try {
      const BoundSet b = evaluate_bounds(method, DimensionValue(L), d);
      row.lower = b.lower;
      row.upper = b.upper;
      row.hypotheses_met = b.hypotheses_met;
      row.inside = est.value >= b.lower.to_double() - slack &&
                   est.value <= b.upper.to_double() + slack;
    } catch (const DomainError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_coord(Coord x, int digits) {
  char buf[128];
  quadmath_snprintf(buf, sizeof buf, "%.*Qe", digits - 1, x);
  return buf;
}

std::string cover_csv(const IntervalCover& cover) {
  std::ostringstream os;
  os << "left,right\n";
  for (const Interval& iv : cover.intervals) {
    os << format_coord(iv.left) << "," << format_coord(iv.right) << "\n";
  }
  return os.str();
}

std::string sandwich_csv(const std::vector<SandwichRow>& rows) {
  std::ostringstream os;
  os << "spec,map,K,L_analytic,estimate,r2,method,lower,upper,inside\n";
  for (const SandwichRow& r : rows) {
    os << r.spec << "," << r.map << "," << csv_number(r.K) << ","
       << r.L_analytic.to_string(30) << "," << csv_number(r.estimate.value) << ","
       << csv_number(r.estimate.r2) << "," << to_string(r.method) << ",";
    if (r.error.empty()) {
      os << r.lower.to_string(30) << "," << r.upper.to_string(30) << ","
         << (r.inside ? "true" : "false");
    } else {
      os << ",,";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace qcdim
