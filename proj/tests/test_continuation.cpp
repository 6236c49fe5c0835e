#include "hetbif/diagram.hpp"
#include "hetbif/error.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace hetbif;

TEST_CASE("circle: closes on itself with small residuals") {
  ZeroFunction f = [](Vec2 p) -> std::optional<double> { return p.x * p.x + p.y * p.y - 0.25; };
  Vec2 start = solve_on_segment(f, {0, 0}, {1, 0});
  CHECK(start.x == doctest::Approx(0.5).epsilon(1e-13));
  ContinuationOptions o;
  o.h_max = 0.05;
  BifurcationCurve c = continue_curve(f, start, o);
  CHECK((c.ends[0] == EndReason::Closed || c.ends[1] == EndReason::Closed));
  for (Vec2 p : c.points) CHECK(std::abs(norm(p) - 0.5) <= 1e-6);
  CHECK(c.points.size() > 20);
  CHECK_THROWS_AS(solve_on_segment(f, {0, 0}, {0.1, 0}), Error);
}

TEST_CASE("line leaves the box on both sides and is clipped onto the edge") {
  ZeroFunction f = [](Vec2 p) -> std::optional<double> { return p.y - 0.3 * p.x - 0.1; };
  BifurcationCurve c = continue_curve(f, {0, 0.1}, {});
  CHECK(c.ends[0] == EndReason::Bounds);
  CHECK(c.ends[1] == EndReason::Bounds);
  CHECK(std::abs(std::abs(c.points.front().x) - 1) <= 1e-9);
  CHECK(std::abs(std::abs(c.points.back().x) - 1) <= 1e-9);
}

TEST_CASE("a function without a zero stalls at the start") {
  ZeroFunction f = [](Vec2) -> std::optional<double> { return 1.0; };
  try {
    continue_curve(f, {0, 0}, {});
    FAIL("continued");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CurveStall);
  }
}

TEST_CASE("parallel sampling kernel matches the serial reference") {
  ZeroFunction f = [](Vec2 p) -> std::optional<double> {
    if (p.x < -0.5) return std::nullopt;
    return std::sin(3 * p.x) * p.y;
  };
  std::vector<Vec2> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({-1 + 0.01 * i, 0.5 - 0.003 * i});
  CHECK(sample_points(f, pts) == sample_points_serial(f, pts));
}

TEST_CASE("mono_c32: the parabola connection survives along eps = 0") {
  Scenario s = scenario("mono_c32");
  ContinuationOptions o = continuation_options(s);
  BifurcationCurve hm = continue_curve(zero_function(s, CurveTag::H_M), {0.01, 0}, o);
  for (Vec2 p : hm.points) CHECK(std::abs(p.y) <= 1e-9);
  BifurcationCurve hl = continue_curve(zero_function(s, CurveTag::H_L), {0, 0.01}, o);
  for (Vec2 p : hl.points) CHECK(std::abs(p.x) <= 1e-9);
}

TEST_CASE("heart codim-2 points are symmetric") {
  Scenario s = scenario("diss_heart");
  Codim2Point c1 = find_codim2(s, {0.4, -0.45}), c2 = find_codim2(s, {-0.4, 0.45});
  CHECK(c1.location.x == doctest::Approx(0.422437996).epsilon(1e-7));
  CHECK(c1.location.y == doctest::Approx(-0.452010899).epsilon(1e-7));
  CHECK(norm(c1.location + c2.location) <= 1e-8);
  CHECK(c1.L.index() == doctest::Approx(1.017545).epsilon(1e-5));
  CHECK(c1.M.index() == doctest::Approx(1.267411).epsilon(1e-5));
  CHECK(c1.subcase.case_id == 5);
  // The mirror point has inverted indices.
  CHECK(c2.L.index() == doctest::Approx(0.982).epsilon(1e-3));
  CHECK(c2.M.index() == doctest::Approx(0.789).epsilon(1e-3));
  CHECK(c2.subcase.case_id == 6);
  CHECK(c1.L.lambda_s == doctest::Approx(-1.7151).epsilon(1e-4));
  CHECK(c1.L.lambda_u == doctest::Approx(1.6856).epsilon(1e-4));
}

TEST_CASE("reversible contour value and bracket failure") {
  Scenario r = scenario("revers_gamma");
  CHECK(find_reversible_contour(r, 2.4, 2.7) == doctest::Approx(2.53134758).epsilon(1e-8));
  try {
    find_reversible_contour(r, 3.0, 3.1);
    FAIL("found a root");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BracketError);
  }
}

TEST_CASE("heart flashing: H_L zeros accumulate on P_M") {
  Scenario s = scenario("diss_heart");
  Codim2Point c = find_codim2(s, {0.4, -0.45});
  Vec2 rad{0.016, 0.016};
  auto cr = seeds_on_circle(zero_function(s, CurveTag::P_M, 0), c.location, rad);
  REQUIRE_FALSE(cr.empty());
  Vec2 rel = cr.front() - c.location;
  double th = std::atan2(rel.y, rel.x), sp = 12 * std::numbers::pi / 180;
  auto at = [&](double t) { return c.location + Vec2{rad.x * std::cos(t), rad.y * std::sin(t)}; };
  FlashingSeries fs = scenario_flashing_series(s, CurveTag::H_L, CurveTag::P_M, at(th - sp), at(th + sp), 3);
  REQUIRE(fs.zeros.size() == 4);
  double expect[] = {0.04486, 0.44303, 0.49082, 0.49880};
  for (int k = 0; k < 4; ++k) CHECK(fs.zeros[k].s == doctest::Approx(expect[k]).epsilon(2e-3));
  for (int k = 2; k < 4; ++k)
    CHECK(std::abs(fs.zeros[k].s - fs.zeros[k - 1].s) < std::abs(fs.zeros[k - 1].s - fs.zeros[k - 2].s));
}
