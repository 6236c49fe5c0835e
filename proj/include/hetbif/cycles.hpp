#pragma once

// Limit cycles as fixed points of the return map to a cross-section.

#include "hetbif/integrate.hpp"

#include <utility>
#include <vector>

namespace hetbif {

enum class Stability { Stable, Unstable, SemiStable };
const char* to_string(Stability s);

/// Multiplier band around 1 inside which a cycle counts as semi-stable.
inline constexpr double kSemiStableBand = 1e-4;

struct CycleOptions {
  Tolerance tol;
  double max_time = 3000.0;
  double fd_step = 1e-6;  // multiplier step; shrunk near the bracket ends
};

struct LimitCycle {
  CrossSection section;
  double coordinate = 0.0;
  double period = 0.0;
  double multiplier = 1.0;
  Stability stability = Stability::SemiStable;
};

Stability stability_of(double multiplier);

/// P(x) - x, or NaN when the orbit does not return (escape, tangency, stiffness).
double displacement(const BoundField& field, const CrossSection& section, double coord, const CycleOptions& opts = {});

/// Displacement at every coordinate. The OpenMP version and the serial reference
/// return identical vectors.
std::vector<double> displacement_samples(const BoundField& field, const CrossSection& section,
                                         const std::vector<double>& coords, const CycleOptions& opts = {});
std::vector<double> displacement_samples_serial(const BoundField& field, const CrossSection& section,
                                                const std::vector<double>& coords, const CycleOptions& opts = {});

/// Fixed point in [lo, hi] by bracketed root finding. NoCycleInBracket without a sign change.
LimitCycle find_cycle(const BoundField& field, const CrossSection& section, double lo, double hi,
                      const CycleOptions& opts = {});

/// Sample grid for a section: log-spaced offsets above each break (separatrix crossing)
/// plus a uniform grid, sorted, restricted to the section extent.
std::vector<double> cycle_grid(const CrossSection& section, const std::vector<double>& breaks, int per_decade = 6,
                               double min_offset = 1e-12, int uniform = 40);

/// All sign changes of the displacement on the grid, refined. Sign changes across a
/// break are not counted: the map is discontinuous there.
std::vector<LimitCycle> count_cycles(const BoundField& field, const CrossSection& section,
                                     const std::vector<double>& coords, const std::vector<double>& breaks,
                                     const CycleOptions& opts = {});

struct FoldExtremum {
  double coordinate = 0.0;
  double g = 0.0;   // P - x at the extremum
  double dg = 0.0;  // P' - 1 there
  int roots = 0;    // sign changes seen while sampling
};

/// Extremum of s*g on (lo, hi), s = +1 for a maximum. Searched in log(x - lo), which
/// resolves folds that sit exponentially close to a separatrix at lo.
FoldExtremum fold_extremum(const BoundField& field, const CrossSection& section, double lo, double hi, int s,
                           const CycleOptions& opts = {});

/// (P(x)-x, P'(x)-1) at the near-double root. FoldBracketError when the bracket holds
/// no fixed point (and no near touch) or more than two.
std::pair<double, double> fold_condition(const BoundField& field, const CrossSection& section, double lo, double hi,
                                         int s, const CycleOptions& opts = {});

}  // namespace hetbif
