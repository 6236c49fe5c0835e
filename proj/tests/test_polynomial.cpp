#include "hetbif/error.hpp"
#include "hetbif/polynomial.hpp"

#include "doctest.h"

using namespace hetbif;

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("3/2") == Rational(3) / 2);
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK(parse_rational("2.7") == Rational(27) / 10);
  CHECK(parse_rational("1e-3") == Rational(1) / 1000);
  CHECK(to_string(Rational(-2) / 3) == "-2/3");
  CHECK(rational_from_double(0.5) == Rational(1) / 2);
  CHECK_THROWS_AS(parse_rational("x"), Error);
}

TEST_CASE("grevlex puts degree first, then x") {
  GrevlexLess lt;
  CHECK(lt({0, 1}, {1, 0}));
  CHECK(lt({1, 0}, {0, 2}));
  CHECK(lt({1, 1}, {2, 0}));
  CHECK_FALSE(lt({2, 1}, {2, 1}));
}

TEST_CASE("polynomial arithmetic and parsing") {
  RationalPolynomial g = parse_polynomial("y*(y-x*(1-x))");
  CHECK(g.coefficient({2, 1}) == 1);
  CHECK(g.coefficient({1, 1}) == -1);
  CHECK(g.coefficient({0, 2}) == 1);
  CHECK(g.leading().first == Monomial{2, 1});
  CHECK(format_polynomial(parse_polynomial("(x+y)^2")) == format_polynomial(parse_polynomial("x^2+2*x*y+y^2")));
  CHECK(parse_polynomial("x/2").coefficient({1, 0}) == Rational(1) / 2);
  CHECK_THROWS_AS(parse_polynomial("x/y"), Error);
  CHECK_THROWS_AS(parse_polynomial("x+"), Error);
  CHECK(g.derivative_x() == parse_polynomial("2*x*y - y"));
  CHECK(g.derivative_y() == parse_polynomial("2*y - x + x^2"));
}

TEST_CASE("remainder is zero exactly on multiples") {
  RationalPolynomial g = parse_polynomial("y*(y-x*(1-x))");
  RationalPolynomial h = parse_polynomial("3*x^2 - y + 7/5");
  CHECK(remainder(g * h, g).is_zero());
  RationalPolynomial r = remainder(g * h + parse_polynomial("x + y"), g);
  CHECK(r == parse_polynomial("x + y"));
  // Reduced monomials are not divisible by the leading monomial.
  RationalPolynomial red = remainder(parse_polynomial("x^5*y^2 + x^3*y"), g);
  CHECK_FALSE(red.is_zero());
  for (const auto& [m, c] : red.terms())
    CHECK_FALSE(g.leading().first.divides(m));
}

TEST_CASE("affine forms over named parameters") {
  std::vector<std::string> names{"a", "b", "c"};
  LinearForm f = parse_affine("-2*a - 2*b - c", names);
  CHECK(f.format(names) == "-2*a - 2*b - c");
  CHECK(f.evaluate({1.0, -3.0, 0.5}) == doctest::Approx(3.5));
  CHECK(parse_affine("1/2*c + 3", names).evaluate_exact({0, 0, Rational(1)}) == Rational(7) / 2);
  CHECK_THROWS_AS(parse_affine("a*b", names), Error);
  CHECK_THROWS_AS(parse_affine("d", names), Error);
  CHECK((f - f).is_zero());
}
