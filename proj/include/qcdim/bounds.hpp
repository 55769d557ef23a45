#ifndef QCDIM_BOUNDS_HPP
#define QCDIM_BOUNDS_HPP

// Dimension-distortion bounds for images of line subsets under planar
// quasiconformal maps, evaluated in arbitrary precision.
//
// Naming: L or t is the Hausdorff dimension of the source set, k the
// distortion coefficient in [0, 1) and K = (1+k)/(1-k) the distortion.
// All functions are pure and run at the precision of their inputs, except
// the two split-based bounds, which promote their inputs to enough guard
// digits to resolve improvements of the size of the split parameter.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>

#include "qcdim/hpreal.hpp"

namespace qcdim {

class Distortion {
 public:
  /// Throws DomainError unless 0 <= k < 1.
  static Distortion from_k(const HPReal& k);
  /// Throws DomainError unless K >= 1.
  static Distortion from_K(const HPReal& K);

  const HPReal& k() const { return k_; }
  const HPReal& K() const { return K_; }
  Precision precision() const { return std::max(k_.precision(), K_.precision()); }
  Distortion with_precision(Precision p) const;

 private:
  Distortion(HPReal k, HPReal K) : k_(std::move(k)), K_(std::move(K)) {}
  HPReal k_;
  HPReal K_;
};

/// A dimension value t in (0, 2].
class DimensionValue {
 public:
  explicit DimensionValue(HPReal t);
  const HPReal& value() const { return t_; }
  Precision precision() const { return t_.precision(); }

 private:
  HPReal t_;
};

enum class BoundMethod {
  Astala,
  Antisymmetric,
  Symmetric,
  ComposedLine,
  Theorem42,
  Theorem43,
};

std::string_view to_string(BoundMethod m);
/// Accepts the names printed by to_string plus "composed" as an alias.
std::optional<BoundMethod> parse_bound_method(std::string_view name);

struct BoundSet {
  DimensionValue input_dim;
  Distortion distortion;
  HPReal lower;
  HPReal upper;
  BoundMethod method;
  bool hypotheses_met = true;
  std::string notes;
};

/// f = f1 o f2 with K = K1 * K2 and K2 = (1+k2)/(1-k2).
struct DecompositionSplit {
  HPReal k2;
  HPReal K2;
  HPReal K1;
  Distortion parent;

  /// Throws DomainError unless 0 <= k2 <= k.
  static DecompositionSplit make(const Distortion& parent, const HPReal& k2);
};

struct ExponentPair {
  HPReal t_k;       ///< upper exponent t(k)
  HPReal t_star_k;  ///< lower exponent t*(k)
};

struct CoveringConstants {
  HPReal alpha;
  HPReal ell;
  HPReal upper_coeff;
  HPReal upper_sum_exponent;
  HPReal lower_coeff;
  HPReal lower_sum_exponent;
  std::optional<HPReal> D_const;
  HPReal C_K;
  std::optional<HPReal> epsilon;
};

struct HarnackInterval {
  HPReal lo;
  HPReal hi;
};

enum class GapKind { G0, G1, G2 };

std::string_view to_string(GapKind g);

struct GapSample {
  GapKind which;
  HPReal k2;
  HPReal L;
  HPReal k;
  HPReal value;
};

// -- Classical and line-restricted bounds ----------------------------------

/// Two-sided bound valid for every planar set of dimension t in (0, 2].
BoundSet astala_bounds(const DimensionValue& t, const Distortion& d);

/// Lower end of astala_bounds as a bare function of (t, K).
HPReal astala_lower(const HPReal& t, const HPReal& K);
/// Upper end of astala_bounds as a bare function of (t, K).
HPReal astala_upper(const HPReal& t, const HPReal& K);

/// t(k) = (1+k^2) t / (1-k^2+k^2 t) and t*(k) = (1-k^2) t / (1+k^2-k^2 t).
ExponentPair exponent_maps(const DimensionValue& t, const HPReal& k);

/// (t*(k), t(k)) for maps whose dilatation is antisymmetric about the line.
/// Requires t <= 1.
BoundSet antisymmetric_bounds(const DimensionValue& t, const Distortion& d);

/// Delta(d, k) = d (1-k^2) / (1 + k sqrt(1-d))^2. Negative k is allowed and
/// gives the reflected form used by the upper bound.
HPReal delta_function(const HPReal& dim, const HPReal& k);

/// (Delta(d, k), Delta(d, -min{k, sqrt(1-d)})) for maps commuting with
/// complex conjugation. Requires 0 < d <= 1.
BoundSet symmetric_bounds(const DimensionValue& dim, const Distortion& d);

/// Composition of the symmetric and antisymmetric estimates for any K-qc map
/// and any subset of the line. L = 1 is allowed (quasicircle branch above).
BoundSet composed_line_bounds(const DimensionValue& L, const Distortion& d);

/// Lower end of composed_line_bounds: (1-k^2) Delta / (1 + k^2 - k^2 Delta).
HPReal composed_lower(const HPReal& L, const HPReal& k);
/// Upper end of composed_line_bounds (switches to 1 + k^2 when L > 1 - k^2).
HPReal composed_upper(const HPReal& L, const HPReal& k);

// -- Gap functions -----------------------------------------------------------

/// Gap value without any domain check (the verification scans evaluate the
/// formulas on whole intervals). g0 = composed lower - Astala lower at K2,
/// g1 = Astala upper at K2 - composed upper formula, g2 = Astala upper at
/// K2 - (1 + k2^2).
HPReal gap_value(GapKind which, const HPReal& k2, const HPReal& L);

/// Checked gap evaluation. Domains: g0 needs k2 in [0, k]; g1 needs
/// k2 in [0, min{k, sqrt(1-L)}]; g2 needs k2 in (0, k]. Requires 0 < L < 1.
GapSample gap(GapKind which, const HPReal& k2, const DimensionValue& L,
              const HPReal& k);

// -- Split-based improvements --------------------------------------------------

/// Smallest k for which the split lower bound is asserted (1.5e-12).
HPReal lower_split_threshold(Precision p);
/// Smallest k for which the split upper bound is asserted (2.67e-21).
HPReal upper_split_threshold(Precision p);

/// Unique x in (0, 1) with x^a = (1-x)^b, to 1e-40 (and to the full working
/// precision when that is coarser). Memoised per (a, b, precision).
HPReal balance_root(int a, int b, Precision p = Precision());

/// Split parameter used by the lower-bound theorem at dimension L:
/// L^60 up to the balance root of (60, 27), (1-L)^27 beyond it. Not clamped.
HPReal lower_split_schedule(const HPReal& L);

/// Split parameter used by the upper-bound theorem at dimension L:
/// L^99 up to the balance root of (99, 49), (1-L)^49 up to
/// 1 - 2.67^2 * 1e-42, and the constant 2.67e-21 beyond.
HPReal upper_split_schedule(const HPReal& L);

/// Lower bound after splitting off a K2 = (1+k2)/(1-k2) factor:
/// 1 / (K1 (1/B - 1/2) + 1/2) with B the composed lower bound at k2.
HPReal split_lower_objective(const HPReal& L, const Distortion& d,
                             const HPReal& k2);

/// Upper bound after splitting off K2:
/// 1 / ((1/K1)(1/I - 1/2) + 1/2) with I the composed upper bound at k2.
HPReal split_upper_objective(const HPReal& L, const Distortion& d,
                             const HPReal& k2);

/// Lower bound with the theorem's split schedule. Requires 0 < L < 1.
/// hypotheses_met is false when k < 1.5e-12; the split parameter is then
/// clamped to k so the bound is still valid, just not asserted to improve.
BoundSet improved_lower_bound(const DimensionValue& L, const Distortion& d);

/// Upper bound with the theorem's split schedule. Requires 0 < L < 1.
/// hypotheses_met is false when k < 2.67e-21 (split clamped to k).
BoundSet improved_upper_bound(const DimensionValue& L, const Distortion& d);

/// Dispatch by method. Domain errors propagate.
BoundSet evaluate_bounds(BoundMethod method, const DimensionValue& L,
                         const Distortion& d);

// -- Covering-sum constants and Harnack interval -----------------------------

/// Constants of the covering-sum estimates for antisymmetric maps.
/// Requires k < alpha < 1 and C_K >= 1; epsilon, when given, must lie in
/// (0, t) and enables D_const.
CoveringConstants covering_constants(const DimensionValue& t,
                                     const Distortion& d, const HPReal& alpha,
                                     const HPReal& C_K,
                                     const std::optional<HPReal>& epsilon);

/// Two-sided Harnack bound for v(iy) given v(0) = v0 >= 0 and |y| < 1.
HarnackInterval harnack_interval(const HPReal& v0, const HPReal& y);

}  // namespace qcdim

#endif  // QCDIM_BOUNDS_HPP
