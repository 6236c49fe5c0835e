#include "hetbif/error.hpp"
#include "hetbif/synthesis.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace hetbif;

namespace {

// Numerical rank by Gaussian elimination with full pivoting.
int rank(std::vector<std::vector<double>> m, double tol = 1e-9) {
  int r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
    std::size_t best = r;
    for (std::size_t i = r; i < m.size(); ++i)
      if (std::abs(m[i][c]) > std::abs(m[best][c])) best = i;
    if (std::abs(m[best][c]) < tol) continue;
    std::swap(m[best], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == static_cast<std::size_t>(r)) continue;
      double f = m[i][c] / m[r][c];
      for (std::size_t k = 0; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

// Oracle: tangency sampled at points of G = 0 gives rows grad G . (x^j y^k e_i).
int sampled_dimension(const std::vector<Vec2>& pts, double (*gx)(Vec2), double (*gy)(Vec2), int degree) {
  std::vector<std::vector<double>> rows;
  for (Vec2 p : pts) {
    std::vector<double> row;
    for (int comp = 0; comp < 2; ++comp)
      for (int d = 0; d <= degree; ++d)
        for (int j = d; j >= 0; --j)
          row.push_back((comp == 0 ? gx(p) : gy(p)) * std::pow(p.x, j) * std::pow(p.y, d - j));
    rows.push_back(row);
  }
  return static_cast<int>(rows[0].size()) - rank(rows);
}

std::vector<Vec2> on_contour(int n) {
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) {
    double x = -1.3 + 2.9 * i / (n - 1);
    pts.push_back({x, 0});
    pts.push_back({x, x * (1 - x)});
  }
  return pts;
}
double cgx(Vec2 p) { return -p.y * (1 - 2 * p.x); }
double cgy(Vec2 p) { return 2 * p.y - p.x * (1 - p.x); }

}  // namespace

TEST_CASE("contour variety: dimension and free parameters") {
  Variety v = Variety::parse("y*(y - x*(1-x))");
  TangentFamily fam = solve_family(v, 2);
  CHECK(fam.free_parameters == std::vector<std::string>{"a10", "a01", "a11"});
  CHECK(is_tangent(v, fam.field));
  CHECK(family_dimension(tangency_system(v, 2)) == 3);
  for (int d = 2; d <= 4; ++d)
    CHECK(family_dimension(tangency_system(v, d)) == sampled_dimension(on_contour(40), cgx, cgy, d));
  try {
    solve_family(v, 1);
    FAIL("degree 1 family");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyFamily);
  }
  CHECK_THROWS_AS(tangency_system(v, 0), Error);
  CHECK_THROWS_AS(tangency_system(v, 7), Error);
}

TEST_CASE("members of the family are numerically tangent at random points") {
  Variety v = Variety::parse("y*(y - x*(1-x))");
  TangentFamily fam = solve_family(v, 3);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    ParamValues p;
    for (std::size_t i = 0; i < fam.free_parameters.size(); ++i) p.push_back(u(rng));
    BoundField f = fam.field.bind(p);
    for (Vec2 q : on_contour(15)) {
      Vec2 F = f(q);
      CHECK(std::abs(cgx(q) * F.x + cgy(q) * F.y) <= 1e-9 * (1 + norm(F)));
    }
  }
}

TEST_CASE("recovers the built-in systems") {
  Variety v = Variety::parse("y*(y - x*(1-x))");
  TangentFamily fam = solve_family(v, 2);
  ParametricSystem base = rename_parameters(fam.field, {{"a10", "a"}, {"a01", "b"}, {"a11", "c"}});
  ParametricSystem unperturbed("mono_unperturbed", {{"a", Rational(1)}, {"b", Rational(-3)}, {"c", Rational(3, 2)}},
                               base.x_dot(), base.y_dot());
  CHECK(unperturbed == builtin("mono_unperturbed"));
  ParametricSystem pert = perturb_connections(
      unperturbed, v,
      {{"alpha", 1, parse_polynomial("y - x*(1-x)"), parse_polynomial("y - x*(1-x)")},
       {"eps", 0, parse_polynomial("y"), parse_polynomial("y")}},
      "mono_perturbed");
  CHECK(pert == builtin("mono_perturbed"));
}

TEST_CASE("other varieties") {
  CHECK(family_dimension(tangency_system(Variety::parse("y"), 1)) == 4);
  TangentFamily circle = solve_family(Variety::parse("x^2 + y^2 - 1"), 1);
  CHECK(circle.free_parameters.size() == 1);
  // Empty real curve: tangency is still an algebraic condition.
  CHECK(family_dimension(tangency_system(Variety::parse("x^2 + y^2 + 1"), 2)) == 5);
  CHECK_THROWS_AS(Variety::parse("0"), Error);
}

TEST_CASE("bad perturbations") {
  Variety v = Variety::parse("y*(y - x*(1-x))");
  ParametricSystem base = builtin("mono_unperturbed");
  auto expect = [&](Perturbation p) {
    try {
      perturb_connections(base, v, {p});
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadPerturbation);
    }
  };
  expect({"q", 1, parse_polynomial("x"), parse_polynomial("y")});
  expect({"q", 1, parse_polynomial("y"), parse_polynomial("y - x")});
}
