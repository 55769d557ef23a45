#include "qcdim/bounds.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "qcdim/errors.hpp"
#include "qcdim/numerics.hpp"

namespace qcdim {

namespace {

HPReal half(Precision p) { return HPReal(1L, p) / 2; }

Precision joint(const HPReal& a, const HPReal& b) {
  return std::max(a.precision(), b.precision());
}

void require_line_dim(const HPReal& L, bool allow_one, const char* who) {
  if (!(L > 0) || (allow_one ? !(L <= 1) : !(L < 1))) {
    throw DomainError(std::string(who) + ": dimension must lie in " +
                      (allow_one ? "(0, 1]" : "the open interval (0, 1)") +
                      ", got " + L.to_string(20));
  }
}

void require_k(const HPReal& k, const char* who) {
  if (!(k >= 0) || !(k < 1)) {
    throw DomainError(std::string(who) + ": k must lie in [0, 1), got " +
                      k.to_string(20));
  }
}

}  // namespace

// -- Types ------------------------------------------------------------------

Distortion Distortion::from_k(const HPReal& k) {
  require_k(k, "Distortion");
  HPReal K = (1 + k) / (1 - k);
  return Distortion(k, std::move(K));
}

Distortion Distortion::from_K(const HPReal& K) {
  if (!(K >= 1) || !K.is_finite()) {
    throw DomainError("Distortion: K must be >= 1, got " + K.to_string(20));
  }
  HPReal k = (K - 1) / (K + 1);
  return Distortion(std::move(k), K);
}

Distortion Distortion::with_precision(Precision p) const {
  return Distortion(k_.with_precision(p), K_.with_precision(p));
}

DimensionValue::DimensionValue(HPReal t) : t_(std::move(t)) {
  if (!(t_ > 0) || !(t_ <= 2)) {
    throw DomainError("dimension must lie in (0, 2], got " + t_.to_string(20));
  }
}

std::string_view to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::Astala: return "astala";
    case BoundMethod::Antisymmetric: return "antisymmetric";
    case BoundMethod::Symmetric: return "symmetric";
    case BoundMethod::ComposedLine: return "composed_line";
    case BoundMethod::Theorem42: return "theorem42";
    case BoundMethod::Theorem43: return "theorem43";
  }
  return "unknown";
}

std::optional<BoundMethod> parse_bound_method(std::string_view name) {
  for (BoundMethod m : {BoundMethod::Astala, BoundMethod::Antisymmetric,
                        BoundMethod::Symmetric, BoundMethod::ComposedLine,
                        BoundMethod::Theorem42, BoundMethod::Theorem43}) {
    if (name == to_string(m)) return m;
  }
  if (name == "composed") return BoundMethod::ComposedLine;
  return std::nullopt;
}

std::string_view to_string(GapKind g) {
  switch (g) {
    case GapKind::G0: return "g0";
    case GapKind::G1: return "g1";
    case GapKind::G2: return "g2";
  }
  return "unknown";
}

DecompositionSplit DecompositionSplit::make(const Distortion& parent,
                                            const HPReal& k2) {
  if (!(k2 >= 0) || !(k2 <= parent.k())) {
    throw DomainError("split parameter k2 must lie in [0, k], got " +
                      k2.to_string(20));
  }
  HPReal K2 = (1 + k2) / (1 - k2);
  HPReal K1 = parent.K() / K2;
  return DecompositionSplit{k2, std::move(K2), std::move(K1), parent};
}

// -- Classical bounds -------------------------------------------------------

HPReal astala_lower(const HPReal& t, const HPReal& K) {
  const HPReal h = half(joint(t, K));
  return 1 / (K * (1 / t - h) + h);
}

HPReal astala_upper(const HPReal& t, const HPReal& K) {
  const HPReal h = half(joint(t, K));
  return 1 / ((1 / K) * (1 / t - h) + h);
}

BoundSet astala_bounds(const DimensionValue& t, const Distortion& d) {
  return BoundSet{t, d, astala_lower(t.value(), d.K()),
                  astala_upper(t.value(), d.K()), BoundMethod::Astala, true, ""};
}

ExponentPair exponent_maps(const DimensionValue& t, const HPReal& k) {
  require_k(k, "exponent_maps");
  const HPReal& x = t.value();
  const HPReal k_sq = k * k;
  HPReal t_k = (1 + k_sq) * x / (1 - k_sq + k_sq * x);
  HPReal t_star = (1 - k_sq) * x / (1 + k_sq - k_sq * x);
  return ExponentPair{std::move(t_k), std::move(t_star)};
}

BoundSet antisymmetric_bounds(const DimensionValue& t, const Distortion& d) {
  if (!(t.value() <= 1)) {
    throw DomainError("antisymmetric_bounds: line subsets have dimension <= 1, got " +
                      t.value().to_string(20));
  }
  ExponentPair e = exponent_maps(t, d.k());
  return BoundSet{t, d, std::move(e.t_star_k), std::move(e.t_k),
                  BoundMethod::Antisymmetric, true, ""};
}

HPReal delta_function(const HPReal& dim, const HPReal& k) {
  const HPReal denom = 1 + k * sqrt(1 - dim);
  return dim * (1 - k * k) / (denom * denom);
}

BoundSet symmetric_bounds(const DimensionValue& dim, const Distortion& d) {
  require_line_dim(dim.value(), true, "symmetric_bounds");
  const HPReal& x = dim.value();
  const HPReal m = min(d.k(), sqrt(1 - x));
  return BoundSet{dim, d, delta_function(x, d.k()), delta_function(x, -m),
                  BoundMethod::Symmetric, true, ""};
}

HPReal composed_lower(const HPReal& L, const HPReal& k) {
  const HPReal delta = delta_function(L, k);
  const HPReal k_sq = k * k;
  return (1 - k_sq) * delta / (1 + k_sq - k_sq * delta);
}

HPReal composed_upper(const HPReal& L, const HPReal& k) {
  const HPReal k_sq = k * k;
  if (L <= 1 - k_sq) {
    return (1 + k_sq) * L / (1 + k_sq - 2 * k * sqrt(1 - L));
  }
  return 1 + k_sq;
}

BoundSet composed_line_bounds(const DimensionValue& L, const Distortion& d) {
  require_line_dim(L.value(), true, "composed_line_bounds");
  const bool quasicircle = !(L.value() <= 1 - d.k() * d.k());
  return BoundSet{L,
                  d,
                  composed_lower(L.value(), d.k()),
                  composed_upper(L.value(), d.k()),
                  BoundMethod::ComposedLine,
                  true,
                  quasicircle ? "upper: quasicircle bound 1+k^2" : ""};
}

// -- Gap functions ----------------------------------------------------------

HPReal gap_value(GapKind which, const HPReal& k2, const HPReal& L) {
  const HPReal K2 = (1 + k2) / (1 - k2);
  switch (which) {
    case GapKind::G0:
      return composed_lower(L, k2) - astala_lower(L, K2);
    case GapKind::G1: {
      const HPReal k2_sq = k2 * k2;
      return astala_upper(L, K2) -
             (1 + k2_sq) * L / (1 + k2_sq - 2 * k2 * sqrt(1 - L));
    }
    case GapKind::G2:
      return astala_upper(L, K2) - (1 + k2 * k2);
  }
  throw DomainError("gap_value: unknown gap function");
}

GapSample gap(GapKind which, const HPReal& k2, const DimensionValue& L,
              const HPReal& k) {
  require_line_dim(L.value(), false, "gap");
  require_k(k, "gap");
  const std::string name(to_string(which));
  switch (which) {
    case GapKind::G0:
      if (!(k2 >= 0) || !(k2 <= k)) {
        throw DomainError(name + ": k2 must lie in [0, k]");
      }
      break;
    case GapKind::G1:
      if (!(k2 >= 0) || !(k2 <= min(k, sqrt(1 - L.value())))) {
        throw DomainError(name + ": k2 must lie in [0, min{k, sqrt(1-L)}]");
      }
      break;
    case GapKind::G2:
      if (!(k2 > 0) || !(k2 <= k)) {
        throw DomainError(name + ": k2 must lie in (0, k]");
      }
      break;
  }
  return GapSample{which, k2, L.value(), k, gap_value(which, k2, L.value())};
}

// -- Split schedules --------------------------------------------------------

HPReal lower_split_threshold(Precision p) { return HPReal::parse("1.5e-12", p); }
HPReal upper_split_threshold(Precision p) { return HPReal::parse("2.67e-21", p); }

HPReal balance_root(int a, int b, Precision p) {
  if (a < 1 || b < 1) {
    throw DomainError("balance_root: exponents must be positive integers");
  }
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, HPReal> cache;
  const auto key = std::make_tuple(a, b, p.digits());
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  // Solve at >= 60 digits so the 1e-40 target is reachable, then round.
  const Precision work = std::max(p, Precision(60));
  const RealFn f = [a, b](const HPReal& x) { return pow(x, a) - pow(1 - x, b); };
  const Bracket bracket{HPReal(0L, work), HPReal(1L, work), -1, +1};
  const HPReal tol = HPReal::parse("1e-45", work);
  HPReal root = bisect(f, bracket, min(tol, pow(HPReal(10L, work), -work.digits() + 5)))
                    .with_precision(p);

  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(root)).first->second;
}

HPReal lower_split_schedule(const HPReal& L) {
  const HPReal x0 = balance_root(60, 27, L.precision());
  return L <= x0 ? pow(L, 60) : pow(1 - L, 27);
}

HPReal upper_split_schedule(const HPReal& L) {
  const Precision p = L.precision();
  const HPReal y0 = balance_root(99, 49, p);
  const HPReal k_cap = upper_split_threshold(p);
  if (L <= y0) return pow(L, 99);
  if (L <= 1 - k_cap * k_cap) return pow(1 - L, 49);
  return k_cap;
}

HPReal split_lower_objective(const HPReal& L, const Distortion& d,
                             const HPReal& k2) {
  const DecompositionSplit split = DecompositionSplit::make(d, k2);
  const HPReal h = half(joint(L, k2));
  const HPReal inner = composed_lower(L, k2);
  return 1 / (split.K1 * (1 / inner - h) + h);
}

HPReal split_upper_objective(const HPReal& L, const Distortion& d,
                             const HPReal& k2) {
  const DecompositionSplit split = DecompositionSplit::make(d, k2);
  const HPReal h = half(joint(L, k2));
  const HPReal inner = composed_upper(L, k2);
  return 1 / ((1 / split.K1) * (1 / inner - h) + h);
}

namespace {

struct ScheduledSplit {
  HPReal L;
  Distortion d;
  HPReal k2;
  bool hypotheses_met;
  bool clamped;
};

// Promotes (L, d) so that an improvement of size ~k2 survives rounding.
ScheduledSplit schedule_split(const DimensionValue& L, const Distortion& d,
                              HPReal (*schedule)(const HPReal&),
                              const HPReal& threshold) {
  const Precision base = std::max(L.precision(), d.precision());
  const HPReal nominal = schedule(L.value().with_precision(base));
  const Precision guarded = guarded_precision(base, min(nominal, d.k()));

  HPReal Lg = L.value().with_precision(guarded);
  Distortion dg = d.with_precision(guarded);
  HPReal k2 = schedule(Lg);
  const bool clamped = k2 > dg.k();
  if (clamped) k2 = dg.k();
  return ScheduledSplit{std::move(Lg), std::move(dg), std::move(k2),
                        d.k() >= threshold, clamped};
}

std::string split_notes(const char* branch, const ScheduledSplit& s) {
  std::string notes = std::string("k2 = ") + branch + " = " + s.k2.to_string(12);
  if (s.clamped) notes += " (clamped to k)";
  if (!s.hypotheses_met) notes += "; k below threshold, improvement not asserted";
  return notes;
}

}  // namespace

BoundSet improved_lower_bound(const DimensionValue& L, const Distortion& d) {
  require_line_dim(L.value(), false, "improved_lower_bound");
  const Precision base = std::max(L.precision(), d.precision());
  ScheduledSplit s = schedule_split(L, d, lower_split_schedule,
                                    lower_split_threshold(base));
  const bool first_branch = L.value() <= balance_root(60, 27, L.precision());
  HPReal lower = split_lower_objective(s.L, s.d, s.k2);
  HPReal upper = astala_upper(s.L, s.d.K());
  std::string notes = split_notes(first_branch ? "L^60" : "(1-L)^27", s);
  return BoundSet{L, d, std::move(lower), std::move(upper),
                  BoundMethod::Theorem42, s.hypotheses_met, std::move(notes)};
}

BoundSet improved_upper_bound(const DimensionValue& L, const Distortion& d) {
  require_line_dim(L.value(), false, "improved_upper_bound");
  const Precision base = std::max(L.precision(), d.precision());
  const HPReal k_cap = upper_split_threshold(base);
  ScheduledSplit s = schedule_split(L, d, upper_split_schedule, k_cap);
  const char* branch = "2.67e-21";
  if (L.value() <= balance_root(99, 49, L.precision())) {
    branch = "L^99";
  } else if (L.value() <= 1 - k_cap * k_cap) {
    branch = "(1-L)^49";
  }
  HPReal lower = astala_lower(s.L, s.d.K());
  HPReal upper = split_upper_objective(s.L, s.d, s.k2);
  std::string notes = split_notes(branch, s);
  return BoundSet{L, d, std::move(lower), std::move(upper),
                  BoundMethod::Theorem43, s.hypotheses_met, std::move(notes)};
}

BoundSet evaluate_bounds(BoundMethod method, const DimensionValue& L,
                         const Distortion& d) {
  switch (method) {
    case BoundMethod::Astala: return astala_bounds(L, d);
    case BoundMethod::Antisymmetric: return antisymmetric_bounds(L, d);
    case BoundMethod::Symmetric: return symmetric_bounds(L, d);
    case BoundMethod::ComposedLine: return composed_line_bounds(L, d);
    case BoundMethod::Theorem42: return improved_lower_bound(L, d);
    case BoundMethod::Theorem43: return improved_upper_bound(L, d);
  }
  throw DomainError("evaluate_bounds: unknown method");
}

// -- Covering constants -----------------------------------------------------

CoveringConstants covering_constants(const DimensionValue& t,
                                     const Distortion& d, const HPReal& alpha,
                                     const HPReal& C_K,
                                     const std::optional<HPReal>& epsilon) {
  const HPReal& k = d.k();
  if (!(alpha > k) || !(alpha < 1)) {
    throw DomainError("covering_constants: alpha must lie in (k, 1)");
  }
  if (!(C_K >= 1)) throw DomainError("covering_constants: C(K) must be >= 1");
  if (epsilon && (!(*epsilon > 0) || !(*epsilon < t.value()))) {
    throw DomainError("covering_constants: epsilon must lie in (0, t)");
  }

  const Precision p = std::max({t.precision(), d.precision(), alpha.precision()});
  const HPReal eight(8L, p);
  const HPReal q = k / alpha;
  HPReal ell = exp(-HPReal::pi(p) * (1 + q) / (1 - q));
  const HPReal a_sq = alpha * alpha;
  const HPReal ratio = (1 + a_sq) / (1 - a_sq);

  const ExponentPair e = exponent_maps(t, alpha);
  HPReal upper_coeff = pow(eight / ell, e.t_k);
  HPReal upper_sum_exponent = ((1 - a_sq) / (1 + a_sq)) * e.t_k / t.value();

  auto lower_coefficient = [&](const HPReal& s_star) {
    return pow(eight, s_star) * pow(ell, -s_star) * pow(eight, -ratio * s_star) *
           pow(ell, ratio * s_star);
  };
  HPReal lower_coeff = lower_coefficient(e.t_star_k);
  HPReal lower_sum_exponent = ratio * e.t_star_k / t.value();

  std::optional<HPReal> D;
  if (epsilon) {
    // The whole chain is re-evaluated at the reduced exponent s = t - eps.
    const HPReal s = t.value() - *epsilon;
    const HPReal s_star = exponent_maps(DimensionValue(s), alpha).t_star_k;
    const HPReal inner = pow(1 / C_K, s) * pow(HPReal(5L, p), -s);
    D = lower_coefficient(s_star) * pow(inner, ratio * s_star / s);
  }
  return CoveringConstants{alpha,
                           std::move(ell),
                           std::move(upper_coeff),
                           std::move(upper_sum_exponent),
                           std::move(lower_coeff),
                           std::move(lower_sum_exponent),
                           std::move(D),
                           C_K,
                           epsilon};
}

HarnackInterval harnack_interval(const HPReal& v0, const HPReal& y) {
  if (!(v0 >= 0)) throw DomainError("harnack_interval: v0 must be >= 0");
  if (!(abs(y) < 1)) throw DomainError("harnack_interval: |y| must be < 1");
  const HPReal y_sq = y * y;
  return HarnackInterval{v0 * (1 - y_sq) / (1 + y_sq),
                         v0 * (1 + y_sq) / (1 - y_sq)};
}

}  // namespace qcdim
