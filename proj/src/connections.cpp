#include "hetbif/connections.hpp"

#include "hetbif/error.hpp"

#include <cmath>
#include <numbers>

namespace hetbif {

const char* to_string(ContourKind k) { return k == ContourKind::Monodromic ? "Monodromic" : "NonMonodromic"; }

namespace {

BranchOptions branch_options(const GapOptions& opts, const ConnectionSpec& spec) {
  BranchOptions b;
  b.tol = opts.tol;
  b.delta = opts.delta;
  b.max_time = opts.max_time;
  b.arclength_cap = opts.arclength_cap;
  b.equilibria = opts.extra_equilibria;
  b.equilibria.push_back(spec.source.location);
  if (norm(spec.target.location - spec.source.location) > 1e-12) b.equilibria.push_back(spec.target.location);
  b.keep_dense = false;
  return b;
}

int turns(double angle) { return static_cast<int>(std::floor(std::abs(angle) / (2 * std::numbers::pi))); }

}  // namespace

GapEvaluation evaluate_gap(const BoundField& field, const ConnectionSpec& spec, const GapOptions& opts) {
  GapEvaluation ev;
  const int k = spec.winding_count_requested;
  if (k < 0) throw Error(ErrorKind::ConfigError, "winding count must be non-negative");

  // Target: first crossing of the stable branch, integrated backward.
  BranchOptions tb = branch_options(opts, spec);
  tb.events = {{spec.section, spec.direction, 1}};
  ManifoldBranch target = grow_branch(field, spec.target, BranchKind::Stable, spec.target_side, tb);
  std::optional<double> target_coord;
  if (target.curve.termination() == Termination::Event) target_coord = target.curve.hits().back().coordinate;

  BranchOptions sb = branch_options(opts, spec);
  sb.events = {{spec.section, spec.direction, k + 1}};
  sb.winding_center = spec.winding_center;
  ManifoldBranch source = grow_branch(field, spec.source, BranchKind::Unstable, spec.source_side, sb);
  const auto& hits = source.curve.hits();
  ev.achieved = static_cast<int>(hits.size()) - 1;
  if (!hits.empty() && target_coord) ev.last_gap = hits.back().coordinate - *target_coord;

  if (static_cast<int>(hits.size()) < k + 1) {
    ev.status = GapStatus::InsufficientWinding;
    ev.message = std::string("source branch ended (") + to_string(source.curve.termination()) + ") after " +
                 std::to_string(hits.size()) + " crossings";
    return ev;
  }
  if (!target_coord) {
    ev.status = GapStatus::TargetMissing;
    ev.message = std::string("stable branch of target ended (") + to_string(target.curve.termination()) +
                 ") before the section";
    return ev;
  }
  const EventHit& hit = hits.back();
  const EventHit& thit = target.curve.hits().back();
  ev.result.source_coordinate = hit.coordinate;
  ev.result.target_coordinate = *target_coord;
  ev.result.gap = hit.coordinate - *target_coord;
  ev.result.winding_count = spec.winding_center ? turns(hit.winding_angle) : 0;
  ev.result.transversal = std::abs(hit.normal_velocity) > 1e-8 && std::abs(thit.normal_velocity) > 1e-8;
  if (!ev.result.transversal) {
    ev.status = GapStatus::Tangency;
    ev.message = "tangential section crossing";
  }
  return ev;
}

SplittingResult splitting(const BoundField& field, ConnectionSpec spec, const GapOptions& opts) {
  spec.winding_count_requested = 0;
  GapEvaluation ev = evaluate_gap(field, spec, opts);
  switch (ev.status) {
    case GapStatus::Ok: return ev.result;
    case GapStatus::Tangency: throw Error(ErrorKind::TangencyError, ev.message);
    default: throw Error(ErrorKind::NoIntersection, ev.message);
  }
}

SplittingResult winding_connection_gap(const BoundField& field, const ConnectionSpec& spec, const GapOptions& opts) {
  GapEvaluation ev = evaluate_gap(field, spec, opts);
  switch (ev.status) {
    case GapStatus::Ok: return ev.result;
    case GapStatus::Tangency: throw Error(ErrorKind::TangencyError, ev.message);
    case GapStatus::InsufficientWinding: throw InsufficientWindingError(std::max(ev.achieved, 0), ev.message);
    case GapStatus::TargetMissing: throw Error(ErrorKind::NoIntersection, ev.message);
  }
  return ev.result;
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
  // Winding number; nonzero means inside.
  int wn = 0;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % n];
    double c = cross(b - a, p - a);
    if (a.y <= p.y) {
      if (b.y > p.y && c > 0) ++wn;
    } else if (b.y <= p.y && c < 0) {
      --wn;
    }
  }
  return wn != 0;
}

std::vector<Vec2> contour_polyline(const BoundField& field, const ConnectionSpec& lm, const ConnectionSpec& ml,
                                   const GapOptions& opts) {
  double scale = norm(lm.source.location - lm.target.location);
  auto run = [&](const Saddle& from, Side side, const Saddle& to) {
    BranchOptions b;
    b.tol = opts.tol;
    b.delta = opts.delta;
    b.max_time = opts.max_time;
    b.arclength_cap = opts.arclength_cap;
    b.equilibria = {to.location};
    b.equilibrium_radius = 1e-3 * scale;
    b.keep_dense = false;
    ManifoldBranch br = grow_branch(field, from, BranchKind::Unstable, side, b);
    if (br.curve.termination() != Termination::EquilibriumApproach)
      throw Error(ErrorKind::NoContour, "connection branch does not reach the target saddle");
    std::vector<Vec2> pts{from.location};
    for (const auto& s : br.curve.samples()) pts.push_back(s.z);
    return pts;
  };
  std::vector<Vec2> poly = run(lm.source, lm.source_side, lm.target);
  std::vector<Vec2> back = run(ml.source, ml.source_side, ml.target);
  poly.insert(poly.end(), back.begin(), back.end());
  return poly;
}

ContourClass classify_contour(const BoundField& field, const ConnectionSpec& lm, const ConnectionSpec& ml,
                              const GapOptions& opts) {
  for (const ConnectionSpec* c : {&lm, &ml}) {
    GapEvaluation ev = evaluate_gap(field, *c, opts);
    if (!ev.ok() || std::abs(ev.result.gap) > kConnectionGapTolerance)
      throw Error(ErrorKind::NoContour, "connection is broken at these parameters");
  }
  std::vector<Vec2> poly = contour_polyline(field, lm, ml, opts);
  const Saddle& L = lm.source;
  const Saddle& M = lm.target;
  double r = 0.05 * norm(L.location - M.location);
  auto flip = [](Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; };

  ContourClass cc;
  cc.lm_source_side = lm.source_side;
  cc.lm_target_side = lm.target_side;
  cc.ml_source_side = ml.source_side;
  cc.ml_target_side = ml.target_side;
  cc.L_free_inside = point_in_polygon(seed_point(L, BranchKind::Unstable, flip(lm.source_side), r), poly);
  cc.M_free_inside = point_in_polygon(seed_point(M, BranchKind::Unstable, flip(ml.source_side), r), poly);
  cc.kind = cc.L_free_inside == cc.M_free_inside ? ContourKind::Monodromic : ContourKind::NonMonodromic;

  // Limit-set probe: start just inside the L->M connection and see whether the orbit
  // comes back around the contour in forward or backward time.
  std::size_t mid = poly.size() / 4;
  Vec2 p = poly[mid];
  Vec2 tdir = normalized(field(p));
  Vec2 n = perp(tdir);
  double off = 2e-3 * norm(L.location - M.location);
  Vec2 probe = point_in_polygon(p + off * n, poly) ? p + off * n : p - off * n;
  double w = 0.05 * norm(L.location - M.location);
  CrossSection sec = CrossSection::make(p, tdir, perp(tdir), -w, w);
  for (double span : {1.0, -1.0}) {
    IntegrateOptions io;
    io.tol = opts.tol;
    io.events = {{sec, Crossing::Positive, 1}};
    io.keep_dense = false;
    io.equilibria = {L.location, M.location};
    io.equilibrium_radius = 1e-6;
    Trajectory tr = integrate(field, probe, span * opts.max_time, io);
    if (tr.termination() == Termination::Event) {
      // Must have travelled around the contour, not just wiggled locally.
      double reach = 0.0;
      for (const auto& s : tr.samples()) reach = std::max(reach, norm(s.z - probe));
      if (reach > 0.5 * norm(L.location - M.location)) cc.probe_circulates = true;
    }
  }
  cc.probe_agrees = cc.probe_circulates == (cc.kind == ContourKind::Monodromic);
  return cc;
}

}  // namespace hetbif
