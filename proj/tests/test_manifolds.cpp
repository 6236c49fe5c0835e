#include "hetbif/error.hpp"
#include "hetbif/manifolds.hpp"

#include "doctest.h"

#include <cmath>

using namespace hetbif;

namespace {
double G(Vec2 z) { return z.y * (z.y - z.x * (1 - z.x)); }
ParametricSystem mono() { return builtin("mono_perturbed"); }
ParamValues at(double alpha, double eps) { return mono().with({{"alpha", alpha}, {"eps", eps}}); }
}  // namespace

TEST_CASE("unstable branch of L runs along the x axis into M") {
  BoundField f = mono().bind(at(0, 0));
  Saddle L = saddle_data(f, {0, 0}), M = saddle_data(f, {1, 0});
  BranchOptions o;
  o.equilibria = {M.location};
  o.equilibrium_radius = 1e-6;
  ManifoldBranch b = grow_branch(f, L, BranchKind::Unstable, Side::Plus, o);
  CHECK(b.curve.termination() == Termination::EquilibriumApproach);
  CHECK(norm(b.curve.end_point() - M.location) <= 1e-6);
  for (const auto& s : b.curve.samples()) CHECK(std::abs(s.z.y) <= 1e-12);
}

TEST_CASE("unstable branch of M stays on the parabola") {
  BoundField f = mono().bind(at(0.004, 0));
  Saddle L = saddle_data(f, {0, 0}), M = saddle_data(f, {1, 0});
  BranchOptions o;
  o.equilibria = {L.location};
  o.equilibrium_radius = 1e-6;
  ManifoldBranch b = grow_branch(f, M, BranchKind::Unstable, Side::Minus, o);
  CHECK(b.curve.termination() == Termination::EquilibriumApproach);
  double worst = 0;
  for (const auto& s : b.curve.samples()) worst = std::max(worst, std::abs(G(s.z)));
  CHECK(worst <= 1e-7);
}

TEST_CASE("seed sits on the eigenvector, and halving the offset barely moves the crossing") {
  BoundField f = mono().bind(at(0.005, 0.005));
  Saddle L = saddle_data(f, {0, 0});
  double d = default_seed_offset(L);
  CHECK(d == doctest::Approx(1e-7));
  for (BranchKind k : {BranchKind::Stable, BranchKind::Unstable})
    for (Side s : {Side::Plus, Side::Minus}) {
      Vec2 v = k == BranchKind::Stable ? L.v_s : L.v_u;
      Vec2 off = seed_point(L, k, s, d) - L.location;
      CHECK(std::abs(norm(off) - d) <= 1e-20);
      CHECK(std::abs(cross(off, v)) <= 1e-20);
      CHECK(dot(off, v) * (s == Side::Plus ? 1 : -1) > 0);
    }
  auto sec = CrossSection::make({0.5, 0}, {1, 0}, {0, 1}, -0.1, 0.1);
  CHECK(seed_sensitivity(f, L, BranchKind::Unstable, Side::Plus, sec) <= 1e-6);
}

TEST_CASE("stable branches are unstable branches of the reversed field") {
  ParamValues p = at(0.003, -0.002);
  BoundField f = mono().bind(p), r = time_reversed(mono()).bind(p);
  Saddle M = saddle_data(f, {1, 0}), Mr = saddle_data(r, {1, 0});
  CHECK(norm(M.v_s - Mr.v_u) <= 1e-12);
  BranchOptions o;
  o.max_time = 3.0;
  ManifoldBranch s = grow_branch(f, M, BranchKind::Stable, Side::Minus, o);
  ManifoldBranch u = grow_branch(r, Mr, BranchKind::Unstable, Side::Minus, o);
  CHECK(s.curve.t_end() < 0);
  CHECK(u.curve.t_end() > 0);
  CHECK(norm(s.curve.end_point() - u.curve.end_point()) <= 1e-8);
}

TEST_CASE("missing section gives NoIntersection") {
  BoundField f = mono().bind(at(0, 0));
  Saddle L = saddle_data(f, {0, 0});
  auto far = CrossSection::make({5, 5}, {1, 0}, {0, 1}, -0.1, 0.1);
  BranchOptions o;
  o.max_time = 20;
  o.equilibria = {{1, 0}};
  try {
    seed_sensitivity(f, L, BranchKind::Unstable, Side::Plus, far, o);
    FAIL("found a crossing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoIntersection);
  }
}
