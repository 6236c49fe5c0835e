#include "hetbif/diagram.hpp"
#include "hetbif/error.hpp"

#include "doctest.h"

#include <cmath>

using namespace hetbif;

namespace {
double gap(const Scenario& s, CurveTag t, Vec2 p, int k = 0) {
  GapEvaluation e = s.gap(t, k, p);
  REQUIRE_MESSAGE(e.ok(), e.message);
  return e.result.gap;
}
}  // namespace

TEST_CASE("both connections close at the unperturbed mono system") {
  for (const char* name : {"mono_c32", "mono_c12"}) {
    Scenario s = scenario(name);
    CHECK(std::abs(gap(s, CurveTag::H_L, {0, 0})) <= 1e-8);
    CHECK(std::abs(gap(s, CurveTag::H_M, {0, 0})) <= 1e-8);
  }
}

TEST_CASE("alpha breaks only the x-axis connection, eps only the parabola") {
  Scenario s = scenario("mono_c32");
  CHECK(std::abs(gap(s, CurveTag::H_M, {0.005, 0})) <= 1e-8);
  CHECK(std::abs(gap(s, CurveTag::H_L, {0.005, 0})) > 1e-4);
  CHECK(std::abs(gap(s, CurveTag::H_L, {0, 0.005})) <= 1e-8);
  CHECK(std::abs(gap(s, CurveTag::H_M, {0, 0.005})) > 1e-5);
}

TEST_CASE("gap changes sign across the connection") {
  Scenario s = scenario("mono_c32");
  double hp = gap(s, CurveTag::H_L, {1e-4, 0}), hm = gap(s, CurveTag::H_L, {-1e-4, 0});
  CHECK(hp * hm < 0);
  CHECK(hp == doctest::Approx(-hm).epsilon(1e-2));
  double mp = gap(s, CurveTag::H_M, {0, 1e-4}), mm = gap(s, CurveTag::H_M, {0, -1e-4});
  CHECK(mp * mm < 0);
}

TEST_CASE("contour classification") {
  Scenario m = scenario("mono_c32");
  BoundField f = m.field({0, 0});
  SaddlePair sp = m.saddles(f);
  ContourClass c = classify_contour(f, m.connection(CurveTag::H_L, 0, sp), m.connection(CurveTag::H_M, 0, sp));
  CHECK(c.kind == ContourKind::Monodromic);
  CHECK(c.probe_agrees);

  Scenario h = scenario("diss_heart");
  Codim2Point p = find_codim2(h, {0.4, -0.45});
  BoundField g = h.field(p.location);
  SaddlePair hp = h.saddles(g);
  ContourClass d = classify_contour(g, h.connection(CurveTag::H_L, 0, hp), h.connection(CurveTag::H_M, 0, hp));
  CHECK(d.kind == ContourKind::NonMonodromic);
  CHECK(d.probe_agrees);

  // Off the codim-2 point the contour does not close.
  BoundField off = m.field({0.01, 0.01});
  SaddlePair op = m.saddles(off);
  try {
    classify_contour(off, m.connection(CurveTag::H_L, 0, op), m.connection(CurveTag::H_M, 0, op));
    FAIL("classified an open contour");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoContour);
  }

  auto poly = contour_polyline(f, m.connection(CurveTag::H_L, 0, sp), m.connection(CurveTag::H_M, 0, sp));
  CHECK(point_in_polygon({0.5, 0.1}, poly));
  CHECK_FALSE(point_in_polygon({0.5, -0.1}, poly));
}

TEST_CASE("heart: winding connections at the codim-2 point") {
  Scenario h = scenario("diss_heart");
  Codim2Point p = find_codim2(h, {0.4, -0.45});
  CHECK(std::abs(p.residuals[0]) <= 1e-6);
  CHECK(std::abs(p.residuals[1]) <= 1e-6);
  // The k = 1 connection needs one extra turn about L; at C1 it is not closed.
  GapEvaluation e = h.gap(CurveTag::H_L, 1, p.location);
  if (e.ok()) {
    CHECK(e.result.winding_count == 1);
    CHECK(std::abs(e.result.gap) > 1e-6);
  } else {
    CHECK(e.status == GapStatus::InsufficientWinding);
  }
}
