#include "hetbif/scenarios.hpp"

#include "hetbif/error.hpp"

#include <algorithm>
#include <cmath>

namespace hetbif {

ParamValues Scenario::at(Vec2 p) const {
  ParamValues v = base;
  v[p1] = p.x;
  if (p2 >= 0) v[p2] = p.y;
  return v;
}

SaddlePair Scenario::saddles(const BoundField& f) const {
  Equilibrium l = find_equilibrium(f, L_guess);
  Equilibrium m = find_equilibrium(f, M_guess);
  if (norm(l.point - m.point) < 1e-6) throw Error(ErrorKind::NoConvergence, "L and M guesses converged to the same point");
  return {saddle_data(f, l.point), saddle_data(f, m.point)};
}

ConnectionSpec Scenario::connection(CurveTag tag, int k, const SaddlePair& s) const {
  ConnectionSpec c;
  switch (tag) {
    case CurveTag::H_L:
      c = {s.L, Lu, s.M, Ms, sigma_M, dir_M, std::nullopt, 0};
      break;
    case CurveTag::H_M:
      c = {s.M, Mu, s.L, Ls, sigma_L, dir_L, std::nullopt, 0};
      break;
    case CurveTag::P_L:
      c = {s.L, Lu, s.L, Ls, sigma_L, dir_L, std::nullopt, 0};
      break;
    case CurveTag::P_M:
      c = {s.M, Mu, s.M, Ms, sigma_M, dir_M, std::nullopt, 0};
      break;
    case CurveTag::F:
      throw Error(ErrorKind::ConfigError, "F is a cycle condition, not a connection");
  }
  if (wind_about_L) c.winding_center = s.L.location;
  c.winding_count_requested = k;
  return c;
}

GapEvaluation Scenario::gap(CurveTag tag, int k, Vec2 p) const {
  try {
    BoundField f = field(p);
    SaddlePair s = saddles(f);
    return evaluate_gap(f, connection(tag, k, s), gap_options);
  } catch (const Error& e) {
    GapEvaluation ev;
    ev.status = GapStatus::TargetMissing;
    ev.message = e.what();
    return ev;
  }
}

std::vector<double> Scenario::cycle_breaks(const BoundField& f, const SaddlePair& s) const {
  std::vector<double> out;
  BranchOptions o;
  o.events = {{cycle_section, Crossing::Any, 1}};
  o.equilibria = {s.L.location, s.M.location};
  o.keep_dense = false;
  for (const Saddle* sd : {&s.L, &s.M})
    for (Side side : {Side::Plus, Side::Minus}) {
      ManifoldBranch b = grow_branch(f, *sd, BranchKind::Stable, side, o);
      if (b.curve.termination() == Termination::Event) out.push_back(b.curve.hits().back().coordinate);
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LimitCycle> Scenario::cycles(Vec2 p, const CycleOptions& opts) const {
  BoundField f = field(p);
  std::vector<double> breaks = cycle_breaks(f, saddles(f));
  return count_cycles(f, cycle_section, cycle_grid(cycle_section, breaks), breaks, opts);
}

FoldExtremum Scenario::fold(Vec2 p, const CycleOptions& opts) const {
  if (fold_sign == 0) throw Error(ErrorKind::ConfigError, "scenario " + name + " has no fold curve");
  BoundField f = field(p);
  std::vector<double> breaks = cycle_breaks(f, saddles(f));
  double lo = cycle_section.coord_min;
  for (double b : breaks)
    if (b < cycle_section.coord_max) lo = std::max(lo, b);
  if (lo == cycle_section.coord_min) throw Error(ErrorKind::FoldBracketError, "no separatrix below the fold bracket");
  return fold_extremum(f, cycle_section, lo, cycle_section.coord_max, fold_sign, opts);
}

namespace {


Scenario mono(const std::string& name, const char* c, double x_focus) {
  ParametricSystem sys = builtin("mono_perturbed");
  Scenario s(name, sys);
  s.base = sys.defaults();
  s.base[sys.parameter_index("c")] = to_double(parse_rational(c));
  s.p1 = sys.parameter_index("alpha");
  s.p2 = sys.parameter_index("eps");
  s.p1_name = "alpha";
  s.p2_name = "eps";
  s.contour = ContourKind::Monodromic;
  s.L_guess = {0.0, 0.0};
  s.M_guess = {1.0, 0.0};
  // Positive coordinates point into the contour on both sections.
  s.sigma_M = CrossSection::make({0.5, 0.0}, {1.0, 0.0}, {0.0, 1.0}, -0.1, 0.1);
  s.sigma_L = CrossSection::make({0.5, 0.25}, {-1.0, 0.0}, {0.0, -1.0}, -0.1, 0.1);
  s.Lu = Side::Plus;
  s.Ls = Side::Plus;
  s.Mu = Side::Minus;
  s.Ms = Side::Minus;
  s.cycle_section = CrossSection::make({x_focus, 0.0}, {1.0, 0.0}, {0.0, 1.0}, -0.05, 0.09);
  s.bounds = {-0.02, 0.02, -0.02, 0.02};
  s.max_step = 1e-3;
  s.seeds = {{CurveTag::H_L, 0, {-0.01, 0.01}, {0.01, 0.01}},
             {CurveTag::H_M, 0, {0.01, -0.01}, {0.01, 0.01}}};
  s.codim2_guesses = {{0.0, 0.0}};
  return s;
}

Scenario heart() {
  ParametricSystem sys = builtin("diss_heart");
  Scenario s("diss_heart", sys);
  s.base = sys.defaults();
  s.p1 = sys.parameter_index("alpha");
  s.p2 = sys.parameter_index("eps");
  s.p1_name = "alpha";
  s.p2_name = "eps";
  s.contour = ContourKind::NonMonodromic;
  s.L_guess = {0.0, 0.0};
  s.M_guess = {0.0, -2.7};
  // Half-lines y = -1. Right: flow goes down, tangent (-1,0) so positive = toward the
  // contour interior near M. Left: flow goes up; the same tangent makes positive point
  // away from L's interior, i.e. the flipped orientation of the non-monodromic maps.
  s.sigma_M = CrossSection::make({1.378, -1.0}, {0.0, -1.0}, {-1.0, 0.0}, -4.0, 1.378);
  s.sigma_L = CrossSection::make({-1.54, -1.0}, {0.0, 1.0}, {-1.0, 0.0}, -1.54, 4.0);
  s.Lu = Side::Plus;
  s.Ls = Side::Minus;
  s.Mu = Side::Minus;
  s.Ms = Side::Plus;
  s.wind_about_L = true;
  s.cycle_section = s.sigma_M;
  s.bounds = {-0.8, 0.8, -0.8, 0.8};
  s.max_step = 1e-2;
  s.codim2_guesses = {{0.4, -0.45}, {-0.4, 0.45}};
  return s;
}

Scenario revers() {
  ParametricSystem sys = builtin("revers_gamma");
  Scenario s("revers_gamma", sys);
  s.base = sys.defaults();
  s.p1 = sys.parameter_index("gamma");
  s.p2 = -1;
  s.p1_name = "gamma";
  s.contour = ContourKind::NonMonodromic;
  s.L_guess = {0.0, 0.0};
  s.M_guess = {0.0, -2.5315};
  s.sigma_M = CrossSection::make({1.378, -1.0}, {0.0, -1.0}, {-1.0, 0.0}, -4.0, 1.378);
  s.sigma_L = CrossSection::make({-1.54, -1.0}, {0.0, 1.0}, {-1.0, 0.0}, -1.54, 4.0);
  s.Lu = Side::Plus;
  s.Ls = Side::Minus;
  s.Mu = Side::Minus;
  s.Ms = Side::Plus;
  s.cycle_section = s.sigma_M;
  s.bounds = {2.0, 3.5, 0.0, 0.0};
  return s;
}

}  // namespace

Scenario scenario(const std::string& name) {
  if (name == "mono_c32") {
    Scenario s = mono(name, "3/2", 2.0 / 3.0);
    s.seeds.push_back({CurveTag::P_L, 0, {-0.01, 0.0}, {-0.01, 0.004}});
    s.seeds.push_back({CurveTag::P_M, 0, {0.0, -0.01}, {0.002, -0.01}});
    return s;
  }
  if (name == "mono_c12") {
    Scenario s = mono(name, "1/2", 6.0 / 11.0);
    s.fold_sign = 1;
    // P_L hugs the eps axis and P_M, F sit within 2e-6 of the alpha axis.
    s.seeds.push_back({CurveTag::P_L, 0, {-1e-5, 0.001}, {-1e-5, 0.02}});
    s.seeds.push_back({CurveTag::P_M, 0, {1e-6, -0.01}, {2e-6, -0.01}});
    s.seeds.push_back({CurveTag::F, 0, {1e-6, -0.01}, {2e-6, -0.01}});
    return s;
  }
  if (name == "diss_heart") return heart();
  if (name == "revers_gamma") return revers();
  throw Error(ErrorKind::NotFound, "no scenario named '" + name + "'");
}

std::vector<std::string> scenario_names() { return {"mono_c32", "mono_c12", "diss_heart", "revers_gamma"}; }

}  // namespace hetbif
