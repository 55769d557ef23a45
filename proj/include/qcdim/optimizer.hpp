#ifndef QCDIM_OPTIMIZER_HPP
#define QCDIM_OPTIMIZER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcdim/bounds.hpp"

namespace qcdim {

enum class Direction { Lower, Upper };

std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view name);

struct OptimizationResult {
  DimensionValue L;
  Distortion distortion;
  Direction direction;
  HPReal k2_star;
  HPReal bound_star;
  HPReal theorem_k2;
  HPReal theorem_bound;
  HPReal improvement_over_theorem;  ///< absolute, in dimension units
  bool hypotheses_met = true;
  int evaluations = 0;
};

/// Chooses the split parameter k2 in (0, k] that gives the best composed
/// bound: largest lower bound or smallest upper bound. A 200-point log grid
/// on [min(1e-60, k 1e-6), k] (plus sqrt(1-L) for the upper direction) is
/// refined by golden-section search in the best cell to relative tolerance
/// 1e-20. k = 0 returns the degenerate result k2* = 0, bound = L.
/// Throws DomainError unless 0 < L < 1.
OptimizationResult optimize_k2(const DimensionValue& L, const Distortion& d,
                               Direction direction);

struct ImprovementRow {
  HPReal L;
  HPReal K;
  Direction direction;
  std::optional<OptimizationResult> result;
  std::optional<HPReal> astala_bound;
  std::string error;  ///< non-empty when the cell raised a domain error
};

/// One row per (L, K) in lexicographic order; invalid cells are flagged.
std::vector<ImprovementRow> improvement_table(const std::vector<HPReal>& L_grid,
                                              const std::vector<HPReal>& K_grid,
                                              Direction direction);

/// CSV with header L,K,direction,astala_bound,theorem_bound,optimized_bound,
/// k2_star,hypotheses_met; numbers at 30 significant digits. Flagged rows
/// keep their (L, K, direction) and leave the numeric cells empty.
std::string improvement_csv(const std::vector<ImprovementRow>& rows);

}  // namespace qcdim

#endif  // QCDIM_OPTIMIZER_HPP
