#include "hetbif/error.hpp"
#include "hetbif/modelmap.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace hetbif;

TEST_CASE("closed-form evaluations") {
  ModelMap<double> m{0.5, 0.5, 1, 1, Orientation::Monodromic, 0, 0};
  CHECK(*m.eval(1.0 / 16) == doctest::Approx(0.5));
  CHECK(*m.eval(0.0) == 0.0);
  CHECK_FALSE(m.eval(-1e-3).has_value());

  ModelMap<double> n{0.5, 0.5, 1, 1, Orientation::NonMonodromic, 0.02, 0.1};
  CHECK(*n.eval(0.0025) == doctest::Approx(0.02 - std::sqrt(0.05)));
  // The orbit misses Sigma_M once theta1 xi^lambda exceeds beta2.
  CHECK_FALSE(n.eval(0.02).has_value());

  ModelMap<double> affine{1, 1, 1, 1, Orientation::Monodromic, 0.1, 0.2};
  CHECK(*affine.eval(0.3) == doctest::Approx(0.6));
  ModelMap<double> heart{1.0175, 1.2674, 1, 1, Orientation::NonMonodromic, 0.01, -0.01};
  CHECK_FALSE(heart.eval(0.0).has_value());
  ModelMap<double> origin{0.5, 3, 1, 1, Orientation::NonMonodromic, 0, 0};
  CHECK(*connection_condition(origin, CurveTag::H_L, 0) == 0.0);
  CHECK(*connection_condition(origin, CurveTag::H_M, 0) == 0.0);

  ModelMap<double> g{2.0, 0.5, 3, 0.25, Orientation::Monodromic, -0.1, 0.2};
  double xi = 0.3;
  CHECK(*g.eval(xi) == doctest::Approx(-0.1 + 0.25 * std::sqrt(0.2 + 3 * xi * xi)));
}

TEST_CASE("orientation flips the sign of the corner passage") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.05, 0.05), x(0, 0.2);
  for (int i = 0; i < 200; ++i) {
    double b1 = u(rng), b2 = u(rng), xi = x(rng);
    ModelMap<double> mono{0.7, 1.6, 1.3, 0.8, Orientation::Monodromic, b1, -b2};
    ModelMap<double> non{0.7, 1.6, 1.3, 0.8, Orientation::NonMonodromic, b1, b2};
    CHECK(*non.to_M(xi) == doctest::Approx(-*mono.to_M(xi)));
    // Negating both thetas turns the monodromic map into the non-monodromic one.
    ModelMap<double> neg{0.7, 1.6, -1.3, -0.8, Orientation::Monodromic, b1, b2};
    auto p = non.eval(xi), q = neg.eval(xi);
    CHECK(p.has_value() == q.has_value());
    if (p && q) CHECK(*p == doctest::Approx(*q));
  }
}

TEST_CASE("P is increasing and its derivative matches finite differences") {
  for (Orientation o : {Orientation::Monodromic, Orientation::NonMonodromic}) {
    ModelMap<double> m{0.5, 3.0, 1, 1, o, 0.001, 0.3};
    double prev = -INFINITY;
    for (double xi = 1e-4; xi < 0.05; xi *= 1.3) {
      auto p = m.eval(xi);
      if (!p) continue;
      CHECK(*p > prev);
      prev = *p;
      double h = 1e-7 * xi;
      auto a = m.eval(xi + h), b = m.eval(xi - h);
      if (a && b) CHECK(*m.derivative(xi) == doctest::Approx((*a - *b) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("closed-form fixed points agree with the dense scan") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (auto [l, mu] : {std::pair{0.5, 0.5}, {0.5, 3.0}, {2.0, 0.7}, {3.0, 3.0}})
    for (Orientation o : {Orientation::Monodromic, Orientation::NonMonodromic})
      for (int i = 0; i < 40; ++i) {
        ModelMap<double> m{l, mu, 1, 1, o, u(rng), u(rng)};
        auto fps = fixed_points(m, 0.25);
        CHECK(static_cast<int>(fps.size()) == fixed_point_count_scan(m, 0.25, 1500));
        for (const auto& fp : fps) CHECK(std::abs(*m.eval(fp.xi) - fp.xi) <= 1e-10);
      }
}

TEST_CASE("grid kernels: parallel equals serial equals scan") {
  ModelMapFamily fam;
  fam.lambda = 0.5;
  fam.mu = 3;
  fam.box = {-3e-4, 1e-4, -0.01, 0.05};
  for (Orientation o : {Orientation::Monodromic, Orientation::NonMonodromic}) {
    fam.orientation = o;
    auto a = fixed_point_grid(fam, 24);
    CHECK(a == fixed_point_grid_serial(fam, 24));
    CHECK(a == fixed_point_grid_scan(fam, 24));
  }
}

TEST_CASE("degenerate indices are rejected") {
  ModelMapFamily fam;
  fam.lambda = 2;
  fam.mu = 0.5;
  try {
    fam.validate();
    FAIL("accepted lambda*mu = 1");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
}

TEST_CASE("flashing series: zeros close in on P_M") {
  ModelMapFamily fam;
  Vec2 a{-1e-4, 0.01}, b{2e-4, 0.01};
  MapFlashingSeries fs = flashing_series_map(fam, CurveTag::H_M, CurveTag::P_M, a, b, 5);
  REQUIRE(fs.zeros.size() >= 4);
  HighReal prev = 2;
  for (const auto& z : fs.zeros) {
    HighReal d = abs(fs.s_acc - z.s);
    CHECK(d < prev);
    prev = d;
    // Condition vanishes at the zero, evaluated in the same precision.
    HighReal s = z.s;
    ModelMap<HighReal> m = fam.at<HighReal>({0, 0});
    m.beta1 = HighReal(a.x) + s * (HighReal(b.x) - HighReal(a.x));
    m.beta2 = HighReal(a.y) + s * (HighReal(b.y) - HighReal(a.y));
    auto v = connection_condition(m, CurveTag::H_M, z.k);
    REQUIRE(v.has_value());
    CHECK(abs(*v) < HighReal("1e-60"));
  }
  // Ratios of consecutive zero gaps lie in (0, 1) and keep shrinking.
  std::vector<HighReal> gaps, ratios;
  for (std::size_t i = 1; i < fs.zeros.size(); ++i) gaps.push_back(abs(fs.zeros[i].s - fs.zeros[i - 1].s));
  for (std::size_t i = 1; i < gaps.size(); ++i) ratios.push_back(gaps[i] / gaps[i - 1]);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    CHECK(ratios[i] > 0);
    CHECK(ratios[i] < 1);
    if (i > 0) CHECK(ratios[i] < ratios[i - 1]);
  }
  // The P_M condition itself vanishes at the accumulation point.
  ModelMap<HighReal> m = fam.at<HighReal>({0, 0});
  m.beta1 = HighReal(a.x) + fs.s_acc * (HighReal(b.x) - HighReal(a.x));
  m.beta2 = HighReal(a.y);
  CHECK(abs(*homoclinic_condition(m, CurveTag::P_M)) < HighReal("1e-60"));
}

TEST_CASE("monodromic bifurcation set: closed-form curves satisfy their conditions") {
  ModelMapFamily fam;
  fam.orientation = Orientation::Monodromic;
  MapBifurcationSet set = bifurcation_set(fam, 0);
  REQUIRE_FALSE(set.curves.empty());
  for (const auto& c : set.curves) {
    for (double r : c.residuals) CHECK(std::abs(r) <= 1e-6);
    for (Vec2 p : c.points) {
      CHECK(p.x >= fam.box.xmin - 1e-12);
      CHECK(p.x <= fam.box.xmax + 1e-12);
    }
  }
}
