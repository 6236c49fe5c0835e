#pragma once

// Pseudo-arclength continuation of scalar zero functions in a two-parameter plane,
// codim-2 points, and flashing series along parameter segments.

#include "hetbif/equilibria.hpp"
#include "hetbif/geometry.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hetbif {

/// Parameter-plane scalar function; nullopt where it is undefined.
using ZeroFunction = std::function<std::optional<double>(Vec2)>;

enum class CurveTag { P_L, P_M, F, H_L, H_M };
const char* to_string(CurveTag t);
CurveTag curve_tag_from_string(const std::string& s);

enum class EndReason { Bounds, Codim2, Stall, Closed, MaxPoints, Start };
const char* to_string(EndReason r);

struct ContinuationOptions {
  Box bounds{-1.0, 1.0, -1.0, 1.0};
  Vec2 scale{1.0, 1.0};       // steps and distances are measured in p / scale
  double h_init = 2e-3;
  double h_min = 1e-6;
  double h_max = 1e-2;
  double residual_tol = 1e-6;  // acceptance: |f| at every stored point
  double corrector_tol = 1e-13;
  int max_points = 4000;
  std::vector<Vec2> snap_points;  // known codim-2 points; reaching one ends the branch
  double snap_radius = 1e-3;      // in scaled units
  bool both_directions = true;
};

struct BifurcationCurve {
  std::string tag;  // P_L, P_M, F, H_L, H_M
  int k = 0;
  std::vector<Vec2> points;
  std::vector<double> residuals;
  std::array<EndReason, 2> ends{EndReason::Start, EndReason::Start};  // [first point, last point]
  std::string note;
};

/// Root of f on the segment a-b (sign change required, BracketError otherwise).
Vec2 solve_on_segment(const ZeroFunction& f, Vec2 a, Vec2 b, double tol = 1e-14);

/// Predictor along the tangent, secant corrector along the normal, adaptive step.
/// Branch ends at the box (clipped onto the edge by a 1D solve), at a snap point,
/// when it closes on itself, or on stall. CurveStall when the start cannot be corrected.
BifurcationCurve continue_curve(const ZeroFunction& f, Vec2 start, const ContinuationOptions& opts);

/// Sign changes of f on a circle, refined: curves emanating from a codim-2 point.
std::vector<Vec2> seeds_on_circle(const ZeroFunction& f, Vec2 center, Vec2 radius, int samples = 72);

/// f at every point. OpenMP kernel and serial reference; identical results.
std::vector<std::optional<double>> sample_points(const ZeroFunction& f, const std::vector<Vec2>& pts);
std::vector<std::optional<double>> sample_points_serial(const ZeroFunction& f, const std::vector<Vec2>& pts);

/// Two gaps vanishing together.
using ResidualPair = std::function<std::optional<std::array<double, 2>>(Vec2)>;

struct Codim2Point {
  Vec2 location;
  std::array<double, 2> residuals{};
  Saddle L, M;
  SubcaseTag subcase;
};

/// Damped 2D Newton with a finite-difference Jacobian. Degenerate when the Jacobian
/// is singular, NoConvergence when the residuals are undefined or stagnate.
Vec2 newton_codim2(const ResidualPair& r, Vec2 guess, Vec2 scale = {1.0, 1.0}, double tol = 1e-11);

/// Zero of a scalar function of one parameter in [a, b]; BracketError without a sign change.
double bracketed_root(const std::function<std::optional<double>(double)>& f, double a, double b, double tol = 1e-12);

struct FlashingZero {
  int k = 0;
  double s = 0.0;  // segment parameter in [0, 1]
  Vec2 point;
};

struct FlashingSeries {
  std::vector<FlashingZero> zeros;  // one per k, in k order
  std::string truncation;           // why the series stopped, empty if it reached k_max
};

/// For k = 0..k_max, the zero of gap_k along a + s(b - a) closest to s_acc (the
/// accumulation point on the segment). Sampling is log-spaced toward s_acc.
FlashingSeries flashing_series(const std::function<ZeroFunction(int)>& gap_k, Vec2 a, Vec2 b, double s_acc, int k_max,
                               int samples = 160);

}  // namespace hetbif
