#include "hetbif/diagram.hpp"
#include "hetbif/error.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace hetbif;

namespace {
// x' = -y + x(1 - r^2), y' = x + y(1 - r^2): stable cycle r = 1, period 2 pi, multiplier exp(-4 pi).
BoundField hopf() {
  return parse_system(R"({"name":"hopf","parameters":[],
    "x_dot":[{"coeff":"-1","px":0,"py":1},{"coeff":"1","px":1,"py":0},{"coeff":"-1","px":3,"py":0},{"coeff":"-1","px":1,"py":2}],
    "y_dot":[{"coeff":"1","px":1,"py":0},{"coeff":"1","px":0,"py":1},{"coeff":"-1","px":2,"py":1},{"coeff":"-1","px":0,"py":3}]})")
      .bind({});
}
const CrossSection ray = CrossSection::make({0, 0}, {0, 1}, {1, 0}, 0, 10);
}  // namespace

TEST_CASE("analytic cycle: location, period, multiplier") {
  LimitCycle c = find_cycle(hopf(), ray, 0.5, 2.0);
  CHECK(c.coordinate == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c.period == doctest::Approx(2 * std::numbers::pi).epsilon(1e-8));
  CHECK(c.multiplier == doctest::Approx(std::exp(-4 * std::numbers::pi)).epsilon(1e-3));
  CHECK(c.stability == Stability::Stable);
  CHECK(displacement(hopf(), ray, 0.5) > 0);
  CHECK(displacement(hopf(), ray, 1.5) < 0);
  try {
    find_cycle(hopf(), ray, 1.5, 2.0);
    FAIL("found a cycle");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoCycleInBracket);
  }
  CHECK(stability_of(1 + kSemiStableBand / 2) == Stability::SemiStable);
  CHECK(stability_of(1.5) == Stability::Unstable);
}

TEST_CASE("parallel displacement kernel matches the serial reference") {
  std::vector<double> xs;
  for (int i = 1; i <= 24; ++i) xs.push_back(0.1 * i);
  auto par = displacement_samples(hopf(), ray, xs), ser = displacement_samples_serial(hopf(), ray, xs);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(par[i] == ser[i]);
}

TEST_CASE("grid is sorted, inside the extent, dense above breaks") {
  auto sec = CrossSection::make({0, 0}, {0, 1}, {1, 0}, -1, 1);
  auto g = cycle_grid(sec, {0.2}, 6, 1e-10, 20);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(g.front() >= -1);
  CHECK(g.back() <= 1);
  int near = 0;
  for (double x : g)
    if (x > 0.2 && x < 0.2 + 1e-6) ++near;
  CHECK(near >= 20);
}

TEST_CASE("mono_c12 at eps = -0.015: one, two, then no cycles across P_M and F") {
  Scenario s = scenario("mono_c12");
  auto count = [&](double a) { return s.cycles({a, -0.015}); };
  CHECK(count(2.98e-6).size() == 1);
  auto two = count(0.5 * (3.3119e-6 + 3.3349e-6));
  REQUIRE(two.size() == 2);
  // Case 3 is the time reversal of case 1: around an unstable focus the inner cycle
  // (nearer the focus, larger coordinate) attracts and the outer one repels.
  BoundField f = s.field({3.3e-6, -0.015});
  Equilibrium focus = find_equilibrium(f, {6.0 / 11, 0.1});
  CHECK(focus.type == EquilibriumType::UnstableFocus);
  const LimitCycle& outer = two[0].coordinate < two[1].coordinate ? two[0] : two[1];
  const LimitCycle& inner = two[0].coordinate < two[1].coordinate ? two[1] : two[0];
  CHECK(inner.stability == Stability::Stable);
  CHECK(outer.stability == Stability::Unstable);
  CHECK(count(3.67e-6).empty());
}

TEST_CASE("mono_c12: fold residuals vanish on the traced F curve") {
  Scenario s = scenario("mono_c12");
  Diagram d = build_diagram(s, 0);
  const BifurcationCurve* F = nullptr;
  for (const auto& c : d.curves)
    if (c.tag == "F") F = &c;
  REQUIRE(F != nullptr);
  int checked = 0;
  for (std::size_t i = 0; i < F->points.size(); i += 3) {
    // The fold cycle collapses into the contour at the codim-2 end.
    if (std::abs(F->points[i].y) < 2e-3) continue;
    ++checked;
    BoundField g = s.field(F->points[i]);
    double lo = s.cycle_breaks(g, s.saddles(g)).back();
    auto [r0, r1] = fold_condition(g, s.cycle_section, lo, s.cycle_section.coord_max, 1);
    CHECK(std::abs(r0) <= 1e-6);
    CHECK(std::abs(r1) <= 1e-6);
  }
  CHECK(checked >= 8);
}

TEST_CASE("time reversal inverts the multiplier") {
  // weak radial rate so the repelling reversed cycle doesn't blow up within one turn
  auto sys = parse_system(R"({"name":"hopf_slow","parameters":[],
    "x_dot":[{"coeff":"-1","px":0,"py":1},{"coeff":"1/20","px":1,"py":0},{"coeff":"-1/20","px":3,"py":0},{"coeff":"-1/20","px":1,"py":2}],
    "y_dot":[{"coeff":"1","px":1,"py":0},{"coeff":"1/20","px":0,"py":1},{"coeff":"-1/20","px":2,"py":1},{"coeff":"-1/20","px":0,"py":3}]})");
  CycleOptions o;
  o.fd_step = 1e-4;
  LimitCycle fwd = find_cycle(sys.bind({}), ray, 0.5, 1.1, o);
  LimitCycle bwd = find_cycle(time_reversed(sys).bind({}), ray, 0.5, 1.1, o);
  CHECK(fwd.multiplier == doctest::Approx(std::exp(-std::numbers::pi / 5)).epsilon(1e-3));
  CHECK(fwd.multiplier * bwd.multiplier == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(bwd.stability == Stability::Unstable);
}

TEST_CASE("heart: a stable cycle inside the wedge near C1") {
  Scenario s = scenario("diss_heart");
  Codim2Point c = find_codim2(s, {0.4, -0.45});
  double r = 0.016;
  auto at = [&](double deg) {
    double t = deg * std::numbers::pi / 180;
    return c.location + Vec2{r * std::cos(t), r * std::sin(t)};
  };
  auto in = s.cycles(at(135));
  REQUIRE(in.size() == 1);
  CHECK(in[0].stability == Stability::Stable);
  CHECK(s.cycles(at(100)).empty());
  CHECK(s.cycles(at(170)).empty());
}
