#ifndef QCDIM_NUMERICS_HPP
#define QCDIM_NUMERICS_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qcdim/hpreal.hpp"

namespace qcdim {

using RealFn = std::function<HPReal(const HPReal&)>;

/// Interval known to contain a sign change of some function.
/// A degenerate bracket (lo == hi) marks a point where the function is
/// exactly zero; its signs are the nearest nonzero neighbours when available.
struct Bracket {
  HPReal lo;
  HPReal hi;
  int f_lo_sign = -1;
  int f_hi_sign = +1;

  bool degenerate() const { return lo == hi; }
  HPReal width() const { return hi - lo; }
};

/// Root of `f` inside `bracket` to within `tol`. Throws BracketInvalid when the
/// endpoint signs agree and NoConvergence after 10 * digits halvings.
HPReal bisect(const RealFn& f, const Bracket& bracket, const HPReal& tol);

/// Evaluates `f` on n+1 equally spaced points of [lo, hi] and returns every
/// adjacent pair with opposite nonzero signs plus a degenerate bracket for
/// each exact zero, in increasing order.
std::vector<Bracket> scan_sign_change(const RealFn& f, const HPReal& lo,
                                      const HPReal& hi, int n);

struct MinResult {
  HPReal x;
  HPReal fx;
  int evaluations = 0;
};

/// Golden-section search for a local minimiser of `f` on [lo, hi].
MinResult golden_min(const RealFn& f, const HPReal& lo, const HPReal& hi,
                     const HPReal& tol);

/// Coarse scan followed by golden-section refinement of the best cell.
/// The grid is log-spaced when lo > 0 and hi/lo > 1e3, uniform otherwise.
/// Unimodality is not assumed; the refined point only replaces the grid
/// winner when it is at least as good.
MinResult grid_min(const RealFn& f, const HPReal& lo, const HPReal& hi,
                   const HPReal& tol, int grid_points = 200);

/// Grid nodes used by grid_min: n points from lo to hi inclusive.
std::vector<HPReal> make_grid(const HPReal& lo, const HPReal& hi, int n,
                              bool log_spaced);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares. Throws DegenerateInput for fewer than three
/// points or when all x coincide.
LineFit fit_slope(std::span<const std::pair<double, double>> points);

}  // namespace qcdim

#endif  // QCDIM_NUMERICS_HPP
