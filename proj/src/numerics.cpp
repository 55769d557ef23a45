#include "qcdim/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "qcdim/errors.hpp"

namespace qcdim {

namespace {

int sign_of(const HPReal& v) {
  const int s = v.sign();
  return s > 0 ? 1 : (s < 0 ? -1 : 0);
}

}  // namespace

HPReal bisect(const RealFn& f, const Bracket& bracket, const HPReal& tol) {
  if (!(tol > 0)) throw DomainError("bisect: tolerance must be positive");
  if (bracket.degenerate()) return bracket.lo;
  if (!(bracket.lo < bracket.hi)) throw BracketInvalid("bisect: lo must be below hi");

  HPReal lo = bracket.lo;
  HPReal hi = bracket.hi;
  HPReal f_lo = f(lo);
  const HPReal f_hi = f(hi);
  if (f_lo.is_zero()) return lo;
  if (f_hi.is_zero()) return hi;
  int s_lo = sign_of(f_lo);
  if (s_lo == sign_of(f_hi)) {
    throw BracketInvalid("bisect: f has the same sign at both ends of [" +
                         lo.to_string(12) + ", " + hi.to_string(12) + "]");
  }

  const int cap = 10 * std::max(lo.precision(), hi.precision()).digits();
  for (int i = 0; i < cap; ++i) {
    HPReal mid = (lo + hi) / 2;
    if (hi - lo <= tol) return mid;
    // Interval already at the resolution of the working precision.
    if (mid == lo || mid == hi) return mid;
    const HPReal f_mid = f(mid);
    const int s_mid = sign_of(f_mid);
    if (s_mid == 0) return mid;
    if (s_mid == s_lo) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  throw NoConvergence("bisect: iteration cap of " + std::to_string(cap) +
                      " exceeded");
}

std::vector<Bracket> scan_sign_change(const RealFn& f, const HPReal& lo,
                                      const HPReal& hi, int n) {
  if (!(lo < hi)) throw DomainError("scan_sign_change: lo must be below hi");
  if (n < 1) throw DomainError("scan_sign_change: need at least one cell");

  std::vector<HPReal> xs;
  std::vector<int> signs;
  xs.reserve(n + 1);
  signs.reserve(n + 1);
  const HPReal width = hi - lo;
  for (int i = 0; i <= n; ++i) {
    HPReal x = i == n ? hi : lo + width * i / n;
    signs.push_back(sign_of(f(x)));
    xs.push_back(std::move(x));
  }

  std::vector<Bracket> out;
  for (int i = 0; i <= n; ++i) {
    if (signs[i] == 0) {
      int left = 0;
      for (int j = i - 1; j >= 0 && left == 0; --j) left = signs[j];
      int right = 0;
      for (int j = i + 1; j <= n && right == 0; ++j) right = signs[j];
      Bracket b{xs[i], xs[i], left != 0 ? left : -1, right != 0 ? right : +1};
      out.push_back(std::move(b));
      continue;
    }
    if (i < n && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
      out.push_back(Bracket{xs[i], xs[i + 1], signs[i], signs[i + 1]});
    }
  }
  return out;
}

MinResult golden_min(const RealFn& f, const HPReal& lo, const HPReal& hi,
                     const HPReal& tol) {
  if (!(lo < hi)) throw DomainError("golden_min: lo must be below hi");
  if (!(tol > 0)) throw DomainError("golden_min: tolerance must be positive");

  const Precision p = std::max(lo.precision(), hi.precision());
  const HPReal inv_phi = (sqrt(HPReal(5L, p)) - 1) / 2;

  HPReal a = lo;
  HPReal b = hi;
  HPReal c = b - inv_phi * (b - a);
  HPReal d = a + inv_phi * (b - a);
  HPReal fc = f(c);
  HPReal fd = f(d);
  int evaluations = 2;

  const int cap = 20 * p.digits() + 200;
  for (int i = 0; b - a > tol; ++i) {
    if (i >= cap) {
      throw NoConvergence("golden_min: iteration cap of " + std::to_string(cap) +
                          " exceeded");
    }
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evaluations;
    if (c >= d) break;  // resolution limit of the working precision
  }

  HPReal x = (a + b) / 2;
  HPReal fx = f(x);
  ++evaluations;
  return MinResult{std::move(x), std::move(fx), evaluations};
}

std::vector<HPReal> make_grid(const HPReal& lo, const HPReal& hi, int n,
                              bool log_spaced) {
  if (n < 2) throw DomainError("make_grid: need at least two nodes");
  std::vector<HPReal> nodes;
  nodes.reserve(n);
  if (log_spaced) {
    const HPReal log_lo = log(lo);
    const HPReal step = (log(hi) - log_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      nodes.push_back(i == 0 ? lo : (i == n - 1 ? hi : exp(log_lo + step * i)));
    }
  } else {
    const HPReal step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      nodes.push_back(i == n - 1 ? hi : lo + step * i);
    }
  }
  return nodes;
}

MinResult grid_min(const RealFn& f, const HPReal& lo, const HPReal& hi,
                   const HPReal& tol, int grid_points) {
  if (!(lo < hi)) throw DomainError("grid_min: lo must be below hi");
  const bool log_spaced = lo > 0 && hi / lo > 1000;
  const std::vector<HPReal> nodes = make_grid(lo, hi, grid_points, log_spaced);

  std::size_t best = 0;
  HPReal best_f;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    HPReal v = f(nodes[i]);
    if (i == 0 || v < best_f) {
      best = i;
      best_f = std::move(v);
    }
  }
  int evaluations = static_cast<int>(nodes.size());

  const HPReal& cell_lo = nodes[best == 0 ? 0 : best - 1];
  const HPReal& cell_hi = nodes[best + 1 == nodes.size() ? best : best + 1];
  MinResult refined = golden_min(f, cell_lo, cell_hi, tol);
  evaluations += refined.evaluations;
  if (refined.fx <= best_f) {
    refined.evaluations = evaluations;
    return refined;
  }
  return MinResult{nodes[best], best_f, evaluations};
}

LineFit fit_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw DegenerateInput("fit_slope: need at least 3 points, got " +
                          std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
    syy += (y - mean_y) * (y - mean_y);
  }
  if (sxx == 0.0) throw DegenerateInput("fit_slope: all x values are equal");

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
  }
  // A flat line fitted exactly has no variance left to explain.
  fit.r2 = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

}  // namespace qcdim
