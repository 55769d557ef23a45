#include "qcdim/optimizer.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "qcdim/errors.hpp"
#include "qcdim/numerics.hpp"

namespace qcdim {

std::string_view to_string(Direction d) {
  return d == Direction::Lower ? "lower" : "upper";
}

std::optional<Direction> parse_direction(std::string_view name) {
  if (name == "lower") return Direction::Lower;
  if (name == "upper") return Direction::Upper;
  return std::nullopt;
}

namespace {

constexpr int kGridPoints = 200;

// Objective to minimise: the negated lower bound or the upper bound.
HPReal objective(Direction dir, const HPReal& L, const Distortion& d,
                 const HPReal& k2) {
  return dir == Direction::Lower ? -split_lower_objective(L, d, k2)
                                 : split_upper_objective(L, d, k2);
}

}  // namespace

OptimizationResult optimize_k2(const DimensionValue& L, const Distortion& d,
                               Direction direction) {
  if (!(L.value() > 0) || !(L.value() < 1)) {
    throw DomainError("optimize_k2: L must lie in the open interval (0, 1), got " +
                      L.value().to_string(20));
  }
  const Precision base = std::max(L.precision(), d.precision());

  const BoundSet theorem = direction == Direction::Lower
                               ? improved_lower_bound(L, d)
                               : improved_upper_bound(L, d);
  HPReal theorem_bound = direction == Direction::Lower ? theorem.lower : theorem.upper;
  HPReal theorem_k2 = direction == Direction::Lower
                          ? lower_split_schedule(L.value())
                          : upper_split_schedule(L.value());
  theorem_k2 = min(theorem_k2, d.k());

  if (d.k().is_zero()) {
    return OptimizationResult{L, d, direction, HPReal(0L, base), theorem_bound,
                              theorem_k2, theorem_bound, HPReal(0L, base),
                              theorem.hypotheses_met, 0};
  }

  const HPReal grid_lo = min(HPReal::parse("1e-60", base),
                             d.k() * HPReal::parse("1e-6", base));
  const Precision work = guarded_precision(base, grid_lo);
  const HPReal Lw = L.value().with_precision(work);
  const Distortion dw = d.with_precision(work);
  const HPReal lo = grid_lo.with_precision(work);
  const HPReal& hi = dw.k();

  std::vector<HPReal> nodes = make_grid(lo, hi, kGridPoints, true);
  if (direction == Direction::Upper) {
    // Regime switch of the inner bound; include it so the kink is sampled.
    HPReal kink = sqrt(1 - Lw);
    if (kink > lo && kink < hi) {
      nodes.push_back(std::move(kink));
      std::sort(nodes.begin(), nodes.end());
    }
  }

  const RealFn f = [&](const HPReal& k2) { return objective(direction, Lw, dw, k2); };

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

  HPReal k2_star = nodes[best];
  const HPReal& cell_lo = nodes[best == 0 ? 0 : best - 1];
  const HPReal& cell_hi = nodes[best + 1 == nodes.size() ? best : best + 1];
  const HPReal tol = nodes[best] * HPReal::parse("1e-20", work);
  MinResult refined = golden_min(f, cell_lo, cell_hi, tol);
  evaluations += refined.evaluations;
  if (refined.fx < best_f) {
    k2_star = std::move(refined.x);
    best_f = std::move(refined.fx);
  }

  HPReal bound_star = direction == Direction::Lower ? -best_f : best_f;
  HPReal improvement = direction == Direction::Lower ? bound_star - theorem_bound
                                                     : theorem_bound - bound_star;
  return OptimizationResult{L,
                            d,
                            direction,
                            std::move(k2_star),
                            std::move(bound_star),
                            std::move(theorem_k2),
                            std::move(theorem_bound),
                            std::move(improvement),
                            theorem.hypotheses_met,
                            evaluations};
}

std::vector<ImprovementRow> improvement_table(const std::vector<HPReal>& L_grid,
                                              const std::vector<HPReal>& K_grid,
                                              Direction direction) {
  std::vector<HPReal> Ls = L_grid;
  std::vector<HPReal> Ks = K_grid;
  std::sort(Ls.begin(), Ls.end());
  std::sort(Ks.begin(), Ks.end());

  std::vector<std::future<ImprovementRow>> cells;
  for (const HPReal& L : Ls) {
    for (const HPReal& K : Ks) {
      cells.push_back(std::async(std::launch::async, [L, K, direction] {
        ImprovementRow row{L, K, direction, std::nullopt, std::nullopt, ""};
        try {
          const DimensionValue dim(L);
          const Distortion d = Distortion::from_K(K);
          row.result = optimize_k2(dim, d, direction);
          row.astala_bound = direction == Direction::Lower ? astala_lower(L, d.K())
                                                           : astala_upper(L, d.K());
        } catch (const DomainError& e) {
          row.error = e.what();
        }
        return row;
      }));
    }
  }

  std::vector<ImprovementRow> rows;
  rows.reserve(cells.size());
  for (auto& c : cells) rows.push_back(c.get());
  return rows;
}

std::string improvement_csv(const std::vector<ImprovementRow>& rows) {
  std::ostringstream os;
  os << "L,K,direction,astala_bound,theorem_bound,optimized_bound,k2_star,"
        "hypotheses_met\n";
  for (const ImprovementRow& row : rows) {
    os << row.L.to_string(30) << "," << row.K.to_string(30) << ","
       << to_string(row.direction) << ",";
    if (row.result) {
      const OptimizationResult& r = *row.result;
      os << row.astala_bound->to_string(30) << "," << r.theorem_bound.to_string(30)
         << "," << r.bound_star.to_string(30) << "," << r.k2_star.to_string(30)
         << "," << (r.hypotheses_met ? "true" : "false");
    } else {
      os << ",,,,false";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace qcdim
