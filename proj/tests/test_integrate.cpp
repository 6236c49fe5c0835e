#include "hetbif/error.hpp"
#include "hetbif/integrate.hpp"

#include "doctest.h"

#include <cmath>

using namespace hetbif;

namespace {
double G(Vec2 z) { return z.y * (z.y - z.x * (1 - z.x)); }
BoundField mono32() {
  auto u = builtin("mono_unperturbed");
  return u.bind(u.with({{"c", 1.5}}));
}
}  // namespace

TEST_CASE("DOPRI5 against fixed-step RK4 on revers_base") {
  BoundField f = builtin("revers_base").bind({});
  Trajectory t = integrate(f, {0.01, 0}, 5.0);
  CHECK(t.termination() == Termination::TimeLimit);
  auto ref = rk4_fixed(f, {0.01, 0}, 5.0, 1e-4);
  double dev = 0;
  for (std::size_t i = 0; i < ref.size(); i += 500) dev = std::max(dev, norm(t.at(ref[i].t) - ref[i].z));
  dev = std::max(dev, norm(t.end_point() - ref.back().z));
  CHECK(dev <= 1e-6);
  CHECK(norm(t.end_point() - Vec2{0.01, 0}) > 0.1);
  for (std::size_t i = 1; i < t.samples().size(); ++i) CHECK(t.samples()[i].t > t.samples()[i - 1].t);
}

TEST_CASE("tolerance halving converges monotonically") {
  BoundField f = builtin("revers_base").bind({});
  Vec2 exact = rk4_fixed(f, {0.01, 0}, 2.0, 1e-5).back().z;
  double prev = INFINITY;
  for (double tol : {1e-6, 5e-7, 2.5e-7, 1.25e-7, 6.25e-8}) {
    IntegrateOptions o;
    o.tol = {tol, tol};
    double err = norm(integrate(f, {0.01, 0}, 2.0, o).end_point() - exact);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("equilibria stay put, blowup is a termination reason") {
  BoundField f = mono32();
  Trajectory t = integrate(f, {1, 0}, 10.0);
  CHECK(t.end_point().x == 1.0);
  CHECK(t.end_point().y == 0.0);

  BoundField r = builtin("revers_gamma").bind({2.5315});
  Trajectory b = integrate(r, {0.0, 3.0}, 50.0);
  CHECK(b.termination() == Termination::Blowup);
}

TEST_CASE("orbits on the invariant parabola stay on it") {
  BoundField f = mono32();
  Trajectory t = integrate(f, {0.5, 0.25}, 10.0);
  for (const auto& s : t.samples()) CHECK(std::abs(G(s.z)) <= 1e-8);
}

TEST_CASE("forward then backward returns to the start") {
  BoundField f = builtin("revers_base").bind({});
  Vec2 z0{0.3, 0.2};
  Vec2 z1 = integrate(f, z0, 3.0).end_point();
  Vec2 back = integrate(f, z1, -3.0).end_point();
  CHECK(norm(back - z0) <= 10 * 1e-10 * (1 + norm(z1)) * 100);
}

TEST_CASE("events are polished and not re-detected at their own start") {
  BoundField f = mono32();
  auto sec = CrossSection::make({0.5, 0}, {1, 0}, {0, 1});
  IntegrateOptions o;
  o.events = {{sec, Crossing::Any, 1}};
  Trajectory t = integrate(f, {0.8, 0.16}, 20.0, o);
  REQUIRE(t.termination() == Termination::Event);
  const EventHit& h = t.hits().back();
  CHECK(std::abs(sec.signed_distance(h.point)) <= 1e-10);
  Trajectory again = integrate(f, h.point, 20.0, o);
  if (!again.hits().empty()) CHECK(again.hits().front().t > 1e-3);
}

TEST_CASE("Poincare map: periodic annulus, expanding focus, failures") {
  auto h = builtin("diss_heart");
  BoundField f = h.bind(h.defaults());
  auto axis = CrossSection::make({0, 0}, {1, 0}, {0, 1});
  ReturnResult r = poincare_map(f, axis, -2.0, 200);
  CHECK(r.coordinate == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(r.time > 0);

  BoundField rb = builtin("revers_base").bind({});
  auto ray = CrossSection::make({1, 0}, {0, 1}, {1, 0}, 0, 10);
  CHECK(poincare_map(rb, ray, 0.01, 100).coordinate > 0.01);

  try {
    poincare_map(f, axis, 1.0, 200);
    FAIL("returned");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoReturn);
  }
  // Flow along the section at (1,0) of mono: tangential start.
  auto tangent = CrossSection::make({0.5, 0}, {0, 1}, {1, 0});
  CHECK_THROWS_AS(poincare_map(mono32(), tangent, 0.0, 10), Error);
}
