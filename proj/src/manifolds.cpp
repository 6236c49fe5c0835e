#include "hetbif/manifolds.hpp"

#include "hetbif/error.hpp"

namespace hetbif {

const char* to_string(BranchKind k) { return k == BranchKind::Stable ? "Stable" : "Unstable"; }
const char* to_string(Side s) { return s == Side::Plus ? "Plus" : "Minus"; }

double default_seed_offset(const Saddle& s) { return 1e-7 * (1.0 + norm(s.location)); }

Vec2 seed_point(const Saddle& s, BranchKind kind, Side side, double delta) {
  Vec2 v = kind == BranchKind::Stable ? s.v_s : s.v_u;
  return s.location + (side == Side::Plus ? delta : -delta) * v;
}

ManifoldBranch grow_branch(const BoundField& field, const Saddle& saddle, BranchKind kind, Side side,
                           const BranchOptions& opts) {
  ManifoldBranch b;
  b.saddle = saddle;
  b.kind = kind;
  b.side = side;
  b.seed_offset = opts.delta.value_or(default_seed_offset(saddle));
  b.seed = seed_point(saddle, kind, side, b.seed_offset);

  IntegrateOptions io;
  io.tol = opts.tol;
  io.events = opts.events;
  io.equilibria = opts.equilibria;
  io.equilibrium_radius = opts.equilibrium_radius;
  io.arclength_cap = opts.arclength_cap;
  io.winding_center = opts.winding_center;
  io.keep_dense = opts.keep_dense;
  double span = kind == BranchKind::Stable ? -opts.max_time : opts.max_time;
  b.curve = integrate(field, b.seed, span, io);
  if (b.curve.termination() == Termination::Blowup && b.curve.arclength() < 1e-3 * (1.0 + norm(saddle.location)))
    throw Error(ErrorKind::BlowupAtSeed, "branch blew up immediately after seeding");
  return b;
}

double seed_sensitivity(const BoundField& field, const Saddle& saddle, BranchKind kind, Side side,
                        const CrossSection& section, const BranchOptions& opts) {
  auto crossing = [&](double delta) {
    BranchOptions o = opts;
    o.delta = delta;
    o.events = {{section, Crossing::Any, 1}};
    o.keep_dense = false;
    ManifoldBranch b = grow_branch(field, saddle, kind, side, o);
    if (b.curve.termination() != Termination::Event) throw Error(ErrorKind::NoIntersection, "branch misses the section");
    return b.curve.hits().back().point;
  };
  double d = opts.delta.value_or(default_seed_offset(saddle));
  return norm(crossing(d) - crossing(0.5 * d));
}

}  // namespace hetbif
