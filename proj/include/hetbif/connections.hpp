#pragma once

#include "hetbif/manifolds.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hetbif {

/// Source unstable branch -> target stable branch, measured on a section.
/// source == target gives a homoclinic query.
struct ConnectionSpec {
  Saddle source;
  Side source_side = Side::Plus;
  Saddle target;
  Side target_side = Side::Plus;
  CrossSection section;
  Crossing direction = Crossing::Any;  // forward-time crossing direction of the connection
  std::optional<Vec2> winding_center;  // location of the winding saddle
  int winding_count_requested = 0;
};

struct GapOptions {
  Tolerance tol;
  std::optional<double> delta;
  double max_time = 400.0;
  double arclength_cap = 80.0;
  std::vector<Vec2> extra_equilibria;
};

struct SplittingResult {
  double gap = 0.0;  // source coordinate minus target coordinate
  int winding_count = 0;
  bool transversal = true;
  double source_coordinate = 0.0;
  double target_coordinate = 0.0;
};

enum class GapStatus { Ok, InsufficientWinding, TargetMissing, Tangency };

/// Non-throwing gap evaluation: the building block for scans and zero functions.
struct GapEvaluation {
  GapStatus status = GapStatus::Ok;
  SplittingResult result;
  int achieved = -1;               // highest crossing index reached by the source branch
  std::optional<double> last_gap;  // gap at that crossing, when the target is known
  std::string message;
  bool ok() const { return status == GapStatus::Ok; }
};

inline constexpr double kConnectionGapTolerance = 1e-6;

GapEvaluation evaluate_gap(const BoundField& field, const ConnectionSpec& spec, const GapOptions& opts = {});

/// Winding count 0. NoIntersection / TangencyError on failure.
SplittingResult splitting(const BoundField& field, ConnectionSpec spec, const GapOptions& opts = {});
/// Gap at the (k+1)-th section crossing, k = spec.winding_count_requested.
/// InsufficientWindingError(k_achieved) when the branch leaves first.
SplittingResult winding_connection_gap(const BoundField& field, const ConnectionSpec& spec, const GapOptions& opts = {});

enum class ContourKind { Monodromic, NonMonodromic };
const char* to_string(ContourKind k);

struct ContourClass {
  ContourKind kind = ContourKind::Monodromic;
  Side lm_source_side, lm_target_side, ml_source_side, ml_target_side;  // contour branches
  bool L_free_inside = false;  // free branches of L point into the contour
  bool M_free_inside = false;
  bool probe_circulates = false;  // limit-set probe: inside orbit follows the contour
  bool probe_agrees = false;
};

/// Both connections must close to kConnectionGapTolerance (NoContour otherwise).
ContourClass classify_contour(const BoundField& field, const ConnectionSpec& lm, const ConnectionSpec& ml,
                              const GapOptions& opts = {});

/// Closed polyline through both connections (L -> M -> L).
std::vector<Vec2> contour_polyline(const BoundField& field, const ConnectionSpec& lm, const ConnectionSpec& ml,
                                   const GapOptions& opts = {});

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly);

}  // namespace hetbif
