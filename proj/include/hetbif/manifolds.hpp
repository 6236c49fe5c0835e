#pragma once

#include "hetbif/equilibria.hpp"
#include "hetbif/integrate.hpp"

#include <optional>
#include <vector>

namespace hetbif {

enum class BranchKind { Stable, Unstable };
enum class Side { Plus, Minus };
const char* to_string(BranchKind k);
const char* to_string(Side s);

struct BranchOptions {
  Tolerance tol;
  std::optional<double> delta;  // default 1e-7 * (1 + |location|)
  double arclength_cap = 50.0;
  double max_time = 400.0;
  std::vector<EventSpec> events;
  std::vector<Vec2> equilibria;  // registered targets (not the seeding saddle)
  double equilibrium_radius = 1e-8;
  std::optional<Vec2> winding_center;
  bool keep_dense = true;
};

struct ManifoldBranch {
  Saddle saddle;
  BranchKind kind = BranchKind::Unstable;
  Side side = Side::Plus;
  double seed_offset = 0.0;
  Vec2 seed;
  Trajectory curve;  // stable branches run in backward time
};

double default_seed_offset(const Saddle& s);
Vec2 seed_point(const Saddle& s, BranchKind kind, Side side, double delta);

/// Shoots from the eigenvector offset. BlowupAtSeed if the integration blows up
/// before leaving a small neighbourhood of the seed.
ManifoldBranch grow_branch(const BoundField& field, const Saddle& saddle, BranchKind kind, Side side,
                           const BranchOptions& opts = {});

/// Distance between the first crossings of a section for seeds delta and delta/2
/// (first-order seed error estimate). NoIntersection if either branch misses.
double seed_sensitivity(const BoundField& field, const Saddle& saddle, BranchKind kind, Side side,
                        const CrossSection& section, const BranchOptions& opts = {});

}  // namespace hetbif
