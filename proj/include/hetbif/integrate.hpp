#pragma once

#include "hetbif/geometry.hpp"
#include "hetbif/vectorfield.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hetbif {

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;
};

/// A line through base_point; coordinate = signed distance along tangent.
/// The coordinate extent restricts which crossings count (half-lines, segments).
struct CrossSection {
  Vec2 base_point;
  Vec2 normal{1.0, 0.0};
  Vec2 tangent{0.0, 1.0};
  double coord_min = -std::numeric_limits<double>::infinity();
  double coord_max = std::numeric_limits<double>::infinity();

  /// Validates unit length and orthogonality (ConfigError otherwise).
  static CrossSection make(Vec2 base, Vec2 normal, Vec2 tangent,
                           double coord_min = -std::numeric_limits<double>::infinity(),
                           double coord_max = std::numeric_limits<double>::infinity());

  double signed_distance(Vec2 z) const { return dot(normal, z - base_point); }
  double coordinate(Vec2 z) const { return dot(tangent, z - base_point); }
  Vec2 point(double coord) const { return base_point + coord * tangent; }
  bool in_extent(double coord) const { return coord >= coord_min && coord <= coord_max; }
};

/// Crossing direction along the section normal, in forward time.
enum class Crossing { Any, Positive, Negative };

struct EventSpec {
  CrossSection section;
  Crossing direction = Crossing::Any;
  int stop_after = 0;  // terminate at this many hits; 0 = never
};

struct EventHit {
  int event = 0;
  int occurrence = 0;  // 0-based count of hits of this event so far
  double t = 0.0;
  Vec2 point;
  double coordinate = 0.0;
  double normal_velocity = 0.0;  // n . F at the hit (forward-time field)
  double winding_angle = 0.0;    // accumulated angle about the winding center at the hit
};

enum class Termination { TimeLimit, Event, Blowup, EquilibriumApproach, ArclengthLimit };
const char* to_string(Termination t);

struct IntegrateOptions {
  Tolerance tol;
  std::vector<EventSpec> events;
  std::vector<Vec2> equilibria;  // candidate targets for EquilibriumApproach
  double equilibrium_radius = 1e-8;
  double blowup_radius = 1e6;
  double arclength_cap = std::numeric_limits<double>::infinity();
  std::optional<Vec2> winding_center;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 2'000'000;
  bool keep_dense = true;
};

class Trajectory {
 public:
  struct Sample {
    double t;
    Vec2 z;
  };

  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<EventHit>& hits() const { return hits_; }
  Termination termination() const { return termination_; }
  int terminal_event() const { return terminal_event_; }
  double arclength() const { return arclength_; }
  double winding_angle() const { return winding_angle_; }
  double t_start() const { return samples_.front().t; }
  double t_end() const { return samples_.back().t; }
  Vec2 end_point() const { return samples_.back().z; }
  /// Dense-output evaluation (needs keep_dense).
  Vec2 at(double t) const;

 private:
  friend Trajectory integrate(const BoundField&, Vec2, double, const IntegrateOptions&);
  struct Dense {
    double t0, h;
    Vec2 r[5];
  };
  std::vector<Sample> samples_;
  std::vector<Dense> dense_;
  std::vector<EventHit> hits_;
  Termination termination_ = Termination::TimeLimit;
  int terminal_event_ = -1;
  double arclength_ = 0.0;
  double winding_angle_ = 0.0;
};

/// Dormand-Prince 5(4) from t=0 to t_span (negative = backward). Step underflow and
/// step-count exhaustion throw StiffnessError; blowup is a termination reason.
Trajectory integrate(const BoundField& field, Vec2 x0, double t_span, const IntegrateOptions& opts = {});
Trajectory integrate(const ParametricSystem& sys, const ParamValues& params, Vec2 x0, double t_span,
                     const IntegrateOptions& opts = {});

struct ReturnResult {
  double coordinate = 0.0;
  double time = 0.0;
  Vec2 point;
};

/// First return to the section in the crossing direction of the flow at the start point.
/// NoReturn when none within max_time; TangencyError for tangential start or return.
ReturnResult poincare_map(const BoundField& field, const CrossSection& section, double coord0, double max_time,
                          Tolerance tol = {});

/// Fixed-step classical RK4; reference oracle for tests.
std::vector<Trajectory::Sample> rk4_fixed(const BoundField& field, Vec2 x0, double t_span, double dt);

}  // namespace hetbif
