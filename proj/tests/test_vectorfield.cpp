#include "hetbif/error.hpp"
#include "hetbif/synthesis.hpp"
#include "hetbif/vectorfield.hpp"

#include "doctest.h"

#include <filesystem>
#include <random>

using namespace hetbif;

namespace {
std::map<std::string, double> mono(double c) { return {{"a", 1}, {"b", -3}, {"c", c}}; }
}  // namespace

TEST_CASE("built-ins evaluate the published fields") {
  auto u = builtin("mono_unperturbed");
  Vec2 v = evaluate(u, {0, 0}, mono(1.5));
  CHECK(v.x == 0);
  CHECK(v.y == 0);
  v = evaluate(u, {1, 0}, mono(1.5));
  CHECK(v.x == 0);
  CHECK(v.y == 0);
  // On the parabola at its apex the flow is horizontal.
  v = evaluate(u, {0.5, 0.25}, mono(1.5));
  CHECK(v.y == doctest::Approx(0).epsilon(1e-15));
  CHECK(v.x != 0);

  auto r = builtin("revers_base");
  Vec2 f = evaluate(r, {1, 0}, {});
  CHECK(f.x == 0);
  CHECK(f.y == 0);
  for (double y : {-2.0, 0.3, 5.0}) CHECK(evaluate(r, {0, y}, {}).x == y);

  auto h = builtin("diss_heart");
  CHECK(norm(evaluate(h, {0, 0}, {{"alpha", 0}, {"eps", 0}, {"gamma", 2.7}})) == 0);
  CHECK(h.defaults()[h.parameter_index("gamma")] == doctest::Approx(2.7));
  CHECK_THROWS_AS(builtin("nope"), Error);
}

TEST_CASE("evaluate rejects missing parameters and non-finite points") {
  auto u = builtin("mono_unperturbed");
  try {
    evaluate(u, {0, 0}, {{"a", 1}});
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
  }
  try {
    evaluate(u, {NAN, 0}, mono(1.5));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainError);
  }
}

TEST_CASE("analytic Jacobian agrees with finite differences at random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3, 3);
  for (const auto& name : builtin_names()) {
    auto sys = builtin(name);
    auto p = sys.defaults();
    for (auto& x : p) x += 0.1 * U(rng);
    BoundField f = sys.bind(p);
    for (int i = 0; i < 100; ++i) {
      Vec2 z{U(rng), U(rng)};
      Mat2 j = f.jacobian(z);
      const double h = 1e-6;
      Vec2 dx = (1 / (2 * h)) * (f(z + Vec2{h, 0}) - f(z - Vec2{h, 0}));
      Vec2 dy = (1 / (2 * h)) * (f(z + Vec2{0, h}) - f(z - Vec2{0, h}));
      double scale = 1 + norm(dx) + norm(dy);
      CHECK(std::abs(j.a - dx.x) <= 1e-6 * scale);
      CHECK(std::abs(j.c - dx.y) <= 1e-6 * scale);
      CHECK(std::abs(j.b - dy.x) <= 1e-6 * scale);
      CHECK(std::abs(j.d - dy.y) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("revers_base is reversible under (x, y, t) -> (-x, y, -t)") {
  auto r = builtin("revers_base");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int i = 0; i < 100; ++i) {
    Vec2 z{U(rng), U(rng)};
    Vec2 a = evaluate(r, z, {}), b = evaluate(r, {-z.x, z.y}, {});
    CHECK(b.x == doctest::Approx(a.x));
    CHECK(b.y == doctest::Approx(-a.y));
  }
}

TEST_CASE("mono_unperturbed leaves both curves invariant exactly") {
  CHECK(is_tangent(Variety::parse("y*(y-x*(1-x))"), builtin("mono_unperturbed")));
  // The perturbed system keeps neither component for arbitrary alpha, eps.
  CHECK_FALSE(is_tangent(Variety::parse("y*(y-x*(1-x))"), builtin("mono_perturbed")));
}

TEST_CASE("JSON round trip and schema errors") {
  for (const auto& name : builtin_names()) {
    auto sys = builtin(name);
    CHECK(parse_system(serialize_system(sys)) == sys);
  }
  auto tmp = std::filesystem::temp_directory_path() / "hetbif_sys.json";
  save_system(builtin("mono_unperturbed"), tmp);
  CHECK(load_system(tmp) == builtin("mono_unperturbed"));
  std::filesystem::remove(tmp);

  auto expect_parse_error = [](const std::string& text) {
    try {
      parse_system(text);
      FAIL("accepted: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  };
  expect_parse_error(R"({"name":"s","parameters":[{"name":"a","default":"1"}],
    "x_dot":[{"coeff":"q","px":1,"py":0}],"y_dot":[]})");
  expect_parse_error(R"({"name":"s","parameters":[],"x_dot":[{"coeff":"1","px":1,"py":-1}],"y_dot":[]})");
  expect_parse_error(R"({"name":"s","parameters":[],"x_dot":[{"coeff":"1","px":7,"py":0}],"y_dot":[]})");
  expect_parse_error("{ not json");
}

TEST_CASE("time reversal and parameter derivative") {
  auto sys = builtin("mono_perturbed");
  auto p = sys.with({{"alpha", 0.3}, {"eps", -0.2}});
  Vec2 z{0.3, 0.7};
  Vec2 f = sys.rhs(z, p), g = time_reversed(sys).rhs(z, p);
  CHECK(g.x == -f.x);
  CHECK(g.y == -f.y);
  // d/d alpha of ydot is y - x(1-x); xdot does not depend on alpha.
  Vec2 d = parameter_derivative(sys, "alpha").rhs(z, p);
  CHECK(d.x == 0);
  CHECK(d.y == doctest::Approx(0.7 - 0.3 * 0.7));
  Vec2 e = parameter_derivative(sys, "eps").rhs(z, p);
  CHECK(e.x == doctest::Approx(0.7));
  CHECK(e.y == 0);
}
