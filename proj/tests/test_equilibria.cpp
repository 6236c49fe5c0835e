#include "hetbif/equilibria.hpp"
#include "hetbif/error.hpp"

#include "doctest.h"

#include <cmath>

using namespace hetbif;

TEST_CASE("revers_gamma: saddles at the origin and at (0,-gamma), foci at (+-1,0)") {
  auto sys = builtin("revers_gamma");
  for (double g : {2.0, 2.5315, 3.0}) {
    BoundField f = sys.bind({g});
    Saddle o = saddle_data(f, find_equilibrium(f, {0.05, 0.02}).point);
    CHECK(norm(o.location) <= 1e-12);
    CHECK(o.lambda_u == doctest::Approx(std::sqrt(g)));
    Equilibrium low = find_equilibrium(f, {0.1, -g + 0.1});
    CHECK(low.point.y == doctest::Approx(-g));
    CHECK(low.type == EquilibriumType::Saddle);
    CHECK(low.eig2.real() == doctest::Approx(std::sqrt(g * (g - 1))));
    // Reversible: the foci have opposite stability.
    Equilibrium r = find_equilibrium(f, {0.9, 0.1}), l = find_equilibrium(f, {-0.9, 0.1});
    CHECK(r.type == EquilibriumType::UnstableFocus);
    CHECK(l.type == EquilibriumType::StableFocus);
    CHECK(r.eig1.real() == doctest::Approx(0.5));
    CHECK(std::abs(r.eig1.imag()) == doctest::Approx(std::sqrt(2 * g - 0.25)));
  }
}

TEST_CASE("mono family: eigenvalues of L and M follow the closed forms") {
  auto sys = builtin("mono_unperturbed");
  int n = 0;
  for (double a : {0.5, 1.0, 1.5, 2.0, 3.0})
    for (double b : {-6.0, -5.0, -4.0, -3.5, -3.0})
      for (double c : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        // Saddle conditions: a > 0 > a + b at L, a + b + c < 0 at M.
        if (!(a + b < 0 && a + b + c < 0)) continue;
        BoundField f = sys.bind({a, b, c});
        Saddle L = saddle_data(f, {0, 0}), M = saddle_data(f, {1, 0});
        CHECK(L.lambda_u == doctest::Approx(a));
        CHECK(L.lambda_s == doctest::Approx(a + b));
        CHECK(M.lambda_s == doctest::Approx(-a));
        CHECK(M.lambda_u == doctest::Approx(-(a + b + c)));
        CHECK(L.index() == doctest::Approx(-(a + b) / a));
        CHECK(M.index() == doctest::Approx(a / -(a + b + c)));
        CHECK(std::abs(norm(L.v_s) - 1) < 1e-12);
        Mat2 j = f.jacobian(L.location);
        Vec2 r = j * L.v_u - L.lambda_u * L.v_u;
        CHECK(norm(r) < 1e-10);
        ++n;
      }
  CHECK(n > 50);
}

TEST_CASE("saddle index inverts under time reversal") {
  auto sys = builtin("mono_unperturbed");
  ParamValues p = sys.with({{"c", 0.5}});
  Saddle fwd = saddle_data(sys.bind(p), {0, 0});
  Saddle bwd = saddle_data(time_reversed(sys).bind(p), {0, 0});
  CHECK(fwd.index() * bwd.index() == doctest::Approx(1.0));
}

TEST_CASE("non-saddles and failed Newton") {
  BoundField f = builtin("revers_base").bind({});
  CHECK_THROWS_AS(saddle_data(f, {1, 0}), Error);
  try {
    saddle_data(f, {1, 0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotASaddle);
  }
  CHECK(classify(Mat2{0, 1, -1, 0}) == EquilibriumType::NonHyperbolic);
  CHECK(classify(Mat2{-1, 0, 0, -2}) == EquilibriumType::StableNode);
  CHECK(classify(Mat2{1, 0, 0, 2}) == EquilibriumType::UnstableNode);
  // x' = 1 has no equilibria.
  BoundField none = parse_system(R"({"name":"drift","parameters":[],"x_dot":[{"coeff":"1","px":0,"py":0}],
    "y_dot":[{"coeff":"1","px":0,"py":1}]})").bind({});
  try {
    find_equilibrium(none, {0.3, 0.3});
    FAIL("converged");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("six subcases and their reductions") {
  struct Row {
    double l, m;
    int id, canon;
    Reduction red;
  };
  for (Row r : {Row{0.5, 1.5, 1, 1, Reduction::None}, Row{0.5, 3.0, 2, 1, Reduction::TimeReversalAndSwap},
                Row{3.0, 0.5, 3, 1, Reduction::TimeReversal}, Row{1.5, 0.5, 4, 1, Reduction::Swap},
                Row{2.0, 2.0, 5, 6, Reduction::TimeReversal}, Row{0.5, 0.5, 6, 6, Reduction::None}}) {
    SubcaseTag t = subcase_from_indices(r.l, r.m);
    CHECK(t.case_id == r.id);
    CHECK(t.canonical_case == r.canon);
    CHECK(t.reduction == r.red);
    // Applying the reduction lands on the canonical case.
    SubcaseTag c = t;
    if (r.red == Reduction::TimeReversal || r.red == Reduction::TimeReversalAndSwap) c = reverse_time(c);
    if (r.red == Reduction::Swap || r.red == Reduction::TimeReversalAndSwap) c = swap_roles(c);
    CHECK(c.case_id == r.canon);
    // Matches inverting the indices directly.
    CHECK(reverse_time(t).case_id == subcase_from_indices(1 / r.l, 1 / r.m).case_id);
    CHECK(swap_roles(t).case_id == subcase_from_indices(r.m, r.l).case_id);
  }
  // mono with c = 1/2: case 3, which the role exchange turns into case 2.
  SubcaseTag m = subcase_from_indices(2.0, 2.0 / 3.0);
  CHECK(m.case_id == 3);
  CHECK(swap_roles(m).case_id == 2);
  CHECK(subcase_from_indices(0.5, 0.5).case_id == 6);
  CHECK_THROWS_AS(subcase_from_indices(1.0, 2.0), Error);
  CHECK_THROWS_AS(subcase_from_indices(2.0, 0.5), Error);
  CHECK_THROWS_AS(subcase_from_indices(-1.0, 2.0), Error);
}
