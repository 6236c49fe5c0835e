#pragma once

// Registered two-parameter scenarios: the system, which two parameters span the
// diagram, where L and M sit, and the cross-sections on which gaps are measured.

#include "hetbif/connections.hpp"
#include "hetbif/continuation.hpp"
#include "hetbif/cycles.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hetbif {

struct SeedSegment {
  CurveTag tag;
  int k = 0;
  Vec2 a, b;  // parameter-plane segment expected to cross the curve once
};

struct SaddlePair {
  Saddle L, M;
};

struct Scenario {
  Scenario(std::string n, ParametricSystem sys) : name(std::move(n)), system(std::move(sys)) {}

  std::string name;
  ParametricSystem system;
  ParamValues base;
  int p1 = 0, p2 = 1;  // indices of the active parameters
  std::string p1_name, p2_name;
  ContourKind contour = ContourKind::Monodromic;

  Vec2 L_guess, M_guess;
  // Sigma_M carries L->M (H_L, P_M); Sigma_L carries M->L (H_M, P_L).
  CrossSection sigma_M, sigma_L;
  Crossing dir_M = Crossing::Positive, dir_L = Crossing::Positive;
  Side Lu = Side::Plus, Ls = Side::Plus, Mu = Side::Plus, Ms = Side::Plus;
  bool wind_about_L = false;

  CrossSection cycle_section;
  int fold_sign = 0;  // nonzero: the scenario has an F curve; +1 = fold is a maximum of P(x)-x
  Box bounds;
  double max_step = 1e-2;
  std::vector<SeedSegment> seeds;
  std::vector<Vec2> codim2_guesses;
  GapOptions gap_options;

  ParamValues at(Vec2 p) const;
  BoundField field(Vec2 p) const { return system.bind(at(p)); }
  /// Newton from the stored guesses. Throws on failure.
  SaddlePair saddles(const BoundField& f) const;
  ConnectionSpec connection(CurveTag tag, int k, const SaddlePair& s) const;
  /// Non-throwing; saddle failures come back as status TargetMissing with a message.
  GapEvaluation gap(CurveTag tag, int k, Vec2 p) const;

  /// Coordinates where stable branches of L and M cross the cycle section.
  std::vector<double> cycle_breaks(const BoundField& f, const SaddlePair& s) const;
  std::vector<LimitCycle> cycles(Vec2 p, const CycleOptions& opts = {}) const;
  /// Fold extremum above the highest separatrix crossing. Throws FoldBracketError
  /// when there is none.
  FoldExtremum fold(Vec2 p, const CycleOptions& opts = {}) const;
};

/// mono_c32, mono_c12, diss_heart, revers_gamma (one parameter, gamma, as p1).
Scenario scenario(const std::string& name);
std::vector<std::string> scenario_names();

}  // namespace hetbif
