#pragma once

// Scenario-level bifurcation work: zero functions per curve tag, codim-2 points,
// flashing series and full diagram assembly.

#include "hetbif/continuation.hpp"
#include "hetbif/scenarios.hpp"

#include <string>
#include <vector>

namespace hetbif {

/// Gap of the tagged connection (k turns), or the fold extremum value for F.
ZeroFunction zero_function(const Scenario& s, CurveTag tag, int k = 0);

/// (H_L gap, H_M gap) at k = 0.
ResidualPair contour_residuals(const Scenario& s);

/// Newton on the contour residuals, with saddle data and subcase attached.
Codim2Point find_codim2(const Scenario& s, Vec2 guess);

/// gamma_0 of the reversible scenario: zero of the single splitting function on
/// [lo, hi]. BracketError when the gap does not change sign.
double find_reversible_contour(const Scenario& s, double lo, double hi);

/// Flashing series of the tagged connection along a-b, accumulating where the
/// accumulation curve crosses the segment.
FlashingSeries scenario_flashing_series(const Scenario& s, CurveTag tag, CurveTag accumulate_on, Vec2 a, Vec2 b,
                                        int k_max);

ContinuationOptions continuation_options(const Scenario& s, const std::vector<Vec2>& snap = {});

struct CurveFailure {
  std::string tag;
  int k = 0;
  std::string message;
};

struct Diagram {
  std::string scenario;
  std::string p1_name, p2_name;
  Box bounds;
  std::vector<Codim2Point> codim2;
  std::vector<BifurcationCurve> curves;
  std::vector<CurveFailure> failures;
};

/// Every applicable curve: H_L, H_M, P_L, P_M through each codim-2 point, H^(k)
/// for k <= k_max in non-monodromic scenarios, F where the scenario has a fold.
Diagram build_diagram(const Scenario& s, int k_max = 5);

/// Largest distance from a point of a to the polyline b.
double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b);
double polyline_distance(Vec2 p, const std::vector<Vec2>& poly);

}  // namespace hetbif
