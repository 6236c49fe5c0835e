#pragma once

// Exact bivariate polynomials over rationals (or over affine forms in named
// parameters), with division by a single generator in grevlex order.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace hetbif {

// Expression templates off: products must be plain values for decltype and auto.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

Rational parse_rational(const std::string& text);  // "3/2", "-4", "2.7", "1e-3"
std::string to_string(const Rational& r);
double to_double(const Rational& r);
/// Exact binary value of a finite double.
Rational rational_from_double(double v);

/// c + sum_i k_i * p_i, with p_i indexed by position in a parameter list.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(Rational constant) : constant_(std::move(constant)) {}
  static LinearForm variable(int index, Rational coeff = 1);

  const Rational& constant() const { return constant_; }
  const std::map<int, Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(int index) const;
  bool is_zero() const { return constant_ == 0 && coeffs_.empty(); }
  bool is_constant() const { return coeffs_.empty(); }
  /// Largest parameter index referenced, or -1.
  int max_index() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  double evaluate(const std::vector<double>& params) const;
  Rational evaluate_exact(const std::vector<Rational>& params) const;

  LinearForm& operator+=(const LinearForm& o);
  LinearForm& operator-=(const LinearForm& o);
  LinearForm& operator*=(const Rational& s);
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator-(LinearForm a) { return a *= Rational(-1); }
  friend LinearForm operator*(LinearForm a, const Rational& s) { return a *= s; }
  friend LinearForm operator*(const Rational& s, LinearForm a) { return a *= s; }
  friend bool operator==(const LinearForm&, const LinearForm&) = default;

  /// Canonical text, e.g. "-2*a - 2*b - c" or "3/2".
  std::string format(const std::vector<std::string>& names) const;

 private:
  void prune();
  Rational constant_{0};
  std::map<int, Rational> coeffs_;
};

struct Monomial {
  int px = 0;
  int py = 0;
  int degree() const { return px + py; }
  bool divides(const Monomial& o) const { return px <= o.px && py <= o.py; }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded reverse lexicographic with x > y: true when a is strictly smaller.
/// With two variables this coincides with graded lex.
struct GrevlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.px < b.px;
  }
};

template <class Coeff>
class Polynomial {
 public:
  using Terms = std::map<Monomial, Coeff, GrevlexLess>;

  Polynomial() = default;
  static Polynomial constant(Coeff c) { Polynomial p; p.add_term({0, 0}, std::move(c)); return p; }
  static Polynomial monomial(Monomial m, Coeff c) { Polynomial p; p.add_term(m, std::move(c)); return p; }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const { return terms_.empty() ? -1 : max_degree(); }
  /// Leading term in grevlex order. Requires !is_zero().
  const std::pair<const Monomial, Coeff>& leading() const { return *terms_.rbegin(); }

  Coeff coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coeff{} : it->second;
  }

  void add_term(Monomial m, const Coeff& c) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) it->second += c;
    if (it->second == Coeff{}) terms_.erase(it);
  }

  Polynomial& operator+=(const Polynomial& o) { for (const auto& [m, c] : o.terms_) add_term(m, c); return *this; }
  Polynomial& operator-=(const Polynomial& o) { for (const auto& [m, c] : o.terms_) add_term(m, -c); return *this; }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { Polynomial r; return r -= a; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  template <class C2>
  auto operator*(const Polynomial<C2>& o) const {
    using R = decltype(std::declval<Coeff>() * std::declval<C2>());
    Polynomial<R> r;
    for (const auto& [m1, c1] : terms_)
      for (const auto& [m2, c2] : o.terms())
        r.add_term({m1.px + m2.px, m1.py + m2.py}, c1 * c2);
    return r;
  }

  Polynomial scaled(const Rational& s) const {
    Polynomial r;
    if (s == 0) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
    return r;
  }

  Polynomial shifted(Monomial by) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(Monomial{m.px + by.px, m.py + by.py}, c);
    return r;
  }

  Polynomial derivative_x() const {
    Polynomial r;
    for (const auto& [m, c] : terms_)
      if (m.px > 0) r.add_term({m.px - 1, m.py}, c * Rational(m.px));
    return r;
  }
  Polynomial derivative_y() const {
    Polynomial r;
    for (const auto& [m, c] : terms_)
      if (m.py > 0) r.add_term({m.px, m.py - 1}, c * Rational(m.py));
    return r;
  }

  template <class F>
  auto map_coefficients(F&& f) const {
    using R = std::invoke_result_t<F, const Coeff&>;
    Polynomial<R> r;
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

 private:
  int max_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }
  Terms terms_;
};

using RationalPolynomial = Polynomial<Rational>;
using ParametricPolynomial = Polynomial<LinearForm>;

inline ParametricPolynomial lift(const RationalPolynomial& p) {
  return p.map_coefficients([](const Rational& c) { return LinearForm(c); });
}

/// Remainder of p on division by the single polynomial g (grevlex). Exact.
template <class Coeff>
Polynomial<Coeff> remainder(Polynomial<Coeff> p, const RationalPolynomial& g) {
  const auto& [lm, lc] = g.leading();
  Polynomial<Coeff> r;
  while (!p.is_zero()) {
    auto [m, c] = p.leading();
    if (lm.divides(m)) {
      Coeff q = c * (Rational(1) / lc);
      Monomial shift{m.px - lm.px, m.py - lm.py};
      for (const auto& [gm, gc] : g.terms())
        p.add_term({gm.px + shift.px, gm.py + shift.py}, -(q * gc));
    } else {
      r.add_term(m, c);
      p.add_term(m, -c);
    }
  }
  return r;
}

RationalPolynomial pow(const RationalPolynomial& p, int n);

/// Parses a polynomial in x and y: integers, decimals, rationals, + - * / ^ and parentheses.
/// Division is only by constants. Throws Error(ParseError).
RationalPolynomial parse_polynomial(const std::string& text);

/// Parses an affine expression over the given parameter names, e.g. "-2*a - 2*b - c" or "1/2*c".
/// Products of two non-constant factors and unknown identifiers throw Error(ParseError).
LinearForm parse_affine(const std::string& text, const std::vector<std::string>& names);

std::string format_polynomial(const RationalPolynomial& p);

}  // namespace hetbif
