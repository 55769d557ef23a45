#ifndef QCDIM_FRACTAL_HPP
#define QCDIM_FRACTAL_HPP

// Self-similar Cantor sets on the line, explicit symmetric model maps, and a
// dyadic box-counting estimator used to probe the bound sandwiches.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcdim/bounds.hpp"

namespace qcdim {

/// Interval endpoints. Quad precision keeps level-n intervals of length
/// ~1e-21 (dimension 0.2 at depth 14) distinct from their neighbours.
using Coord = __float128;

struct CantorSpec {
  int pieces = 2;       ///< m >= 2
  double ratio = 1.0 / 3.0;  ///< r in (0, 1/m]
  int depth = 1;        ///< n >= 1
  double offset = 0.0;
  double scale = 1.0;   ///< > 0

  /// Throws DomainError if an invariant fails.
  void validate() const;
  /// ln m / ln(1/r).
  double analytic_dimension() const;
  HPReal analytic_dimension(Precision p) const;
  /// "m:q:n" with q = 1/r, plus ":offset:scale" when not the unit interval.
  std::string label() const;

  /// Parses "m:q:n[:offset[:scale]]" where q = 1/r. Throws UsageError on
  /// malformed text and DomainError on invalid values.
  static CantorSpec parse(std::string_view text);
};

struct Interval {
  Coord left;
  Coord right;
};

struct IntervalCover {
  std::vector<Interval> intervals;  ///< sorted, pairwise disjoint
  int generation = 0;

  /// True when intervals are sorted by left endpoint, have right > left and
  /// do not overlap.
  bool well_formed() const;
};

/// Cap on m^n, the number of generated intervals.
inline constexpr double kMaxCantorIntervals = 1e7;

/// The m^n level-n intervals, each of length scale * r^n. Throws
/// ResourceError when m^n exceeds kMaxCantorIntervals.
IntervalCover generate_cantor(const CantorSpec& spec);

enum class MapKind { Identity, Affine, PowerStretch };

/// Symmetric model maps with explicit monotone real traces.
struct ModelMap {
  MapKind kind = MapKind::Identity;
  double slope = 1.0;      ///< Affine
  double intercept = 0.0;  ///< Affine
  double exponent = 1.0;   ///< PowerStretch, a >= 1

  static ModelMap identity();
  /// Throws DomainError for a zero slope.
  static ModelMap affine(double slope, double intercept);
  /// x -> sign(x)|x|^a, the real trace of the radial stretch z|z|^(a-1).
  /// Throws DomainError unless a >= 1.
  static ModelMap power_stretch(double a);

  /// 1 for Identity and Affine, a for PowerStretch.
  double distortion_K() const;
  Coord operator()(Coord x) const;
  /// "identity", "affine:s:b" or "power:a".
  std::string label() const;

  /// Inverse of label(). Throws UsageError on unknown text.
  static ModelMap parse(std::string_view text);
};

/// Image of every interval under the map's monotone trace, re-sorted.
/// Throws DomainError when a PowerStretch input interval straddles 0.
IntervalCover apply_map(const ModelMap& map, const IntervalCover& cover);

/// Splits intervals that straddle 0 so PowerStretch can be applied.
IntervalCover split_at_zero(const IntervalCover& cover);

struct DimEstimate {
  double value = 0.0;
  double r2 = 0.0;
  int scales_used = 0;
  std::pair<double, double> scale_range;  ///< (smallest, largest) box size
};

/// Box-counting estimate from dyadic boxes anchored at the cover's bounding
/// interval. num_scales + 2 levels are spread between the overall diameter
/// and the largest interval length; the two coarsest are dropped and the
/// slope of log N against log(1/delta) is fitted over the rest. A cover
/// whose scale range is too short (a single segment, say) is resolved below
/// the interval length instead. Throws DegenerateInput for an empty cover or
/// one that collapses to a single point, DomainError if num_scales < 4.
DimEstimate box_dimension(const IntervalCover& cover, int num_scales = 12);

inline constexpr double kSandwichSlack = 0.05;

struct SandwichRow {
  std::string spec;
  std::string map;
  double K = 1.0;
  HPReal L_analytic;
  DimEstimate estimate;
  BoundMethod method = BoundMethod::Astala;
  HPReal lower;
  HPReal upper;
  bool hypotheses_met = true;
  bool inside = false;
  std::string error;  ///< non-empty when the bound raised a domain error
};

/// Generates the set, maps it, estimates the image dimension and checks
/// estimate in [lower - slack, upper + slack] for each method's bounds at
/// (L_analytic, K = map.distortion_K()).
std::vector<SandwichRow> sandwich_check(const CantorSpec& spec, const ModelMap& map,
                                        const std::vector<BoundMethod>& methods,
                                        double slack = kSandwichSlack,
                                        Precision p = Precision(),
                                        int num_scales = 12);

/// "left,right" per interval, 36 significant digits.
std::string cover_csv(const IntervalCover& cover);
/// spec,map,K,L_analytic,estimate,r2,method,lower,upper,inside
std::string sandwich_csv(const std::vector<SandwichRow>& rows);

/// Decimal text of a quad value with `digits` significant digits.
std::string format_coord(Coord x, int digits = 36);

}  // namespace qcdim

#endif  // QCDIM_FRACTAL_HPP
