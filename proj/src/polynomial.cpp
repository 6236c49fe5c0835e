#include "hetbif/polynomial.hpp"

#include "hetbif/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

namespace hetbif {

namespace {

Rational pow10(int e) {
  boost::multiprecision::cpp_int p = 1;
  for (int i = 0; i < std::abs(e); ++i) p *= 10;
  return e >= 0 ? Rational(p) : Rational(1) / Rational(p);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty number");
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(i, slash - i));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
    return neg ? -num / den : num / den;
  }
  boost::multiprecision::cpp_int mant = 0;
  int scale = 0;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      mant = mant * 10 + (ch - '0');
      digits = true;
      if (dot) --scale;
    } else if (ch == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw Error(ErrorKind::ParseError, "not a number: '" + text + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw Error(ErrorKind::ParseError, "not a number: '" + text + "'");
    int e = 0;
    auto [ptr, ec] = std::from_chars(s.data() + i + 1 + (s[i + 1] == '+'), s.data() + s.size(), e);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(ErrorKind::ParseError, "bad exponent in '" + text + "'");
    scale += e;
  }
  Rational r = Rational(mant) * pow10(scale);
  return neg ? -r : r;
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::DomainError, "non-finite value");
  int e = 0;
  double m = std::frexp(v, &e);
  // m in [0.5,1): 53 significant bits are exact after scaling by 2^53.
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r(mant);
  boost::multiprecision::cpp_int p = 1;
  p <<= std::abs(e);
  return e >= 0 ? r * Rational(p) : r / Rational(p);
}

LinearForm LinearForm::variable(int index, Rational coeff) {
  LinearForm f;
  if (coeff != 0) f.coeffs_.emplace(index, std::move(coeff));
  return f;
}

Rational LinearForm::coefficient(int index) const {
  auto it = coeffs_.find(index);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

double LinearForm::evaluate(const std::vector<double>& params) const {
  double v = to_double(constant_);
  for (const auto& [i, k] : coeffs_) v += to_double(k) * params.at(i);
  return v;
}

Rational LinearForm::evaluate_exact(const std::vector<Rational>& params) const {
  Rational v = constant_;
  for (const auto& [i, k] : coeffs_) v += k * params.at(i);
  return v;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
  constant_ += o.constant_;
  for (const auto& [i, k] : o.coeffs_) coeffs_[i] += k;
  prune();
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
  constant_ -= o.constant_;
  for (const auto& [i, k] : o.coeffs_) coeffs_[i] -= k;
  prune();
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& s) {
  constant_ *= s;
  for (auto& [i, k] : coeffs_) k *= s;
  prune();
  return *this;
}

void LinearForm::prune() {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0; });
}

namespace {

// Appends "+ k*name" style pieces; first piece carries its own sign.
void append_term(std::string& out, const Rational& k, const std::string& name) {
  bool neg = k < 0;
  Rational a = neg ? Rational(-k) : k;
  if (out.empty()) {
    if (neg) out += "-";
  } else {
    out += neg ? " - " : " + ";
  }
  if (name.empty()) {
    out += to_string(a);
  } else {
    if (a != 1) out += to_string(a) + "*";
    out += name;
  }
}

}  // namespace

std::string LinearForm::format(const std::vector<std::string>& names) const {
  std::string out;
  for (const auto& [i, k] : coeffs_)
    append_term(out, k, i < static_cast<int>(names.size()) ? names[i] : "p" + std::to_string(i));
  if (constant_ != 0 || out.empty()) append_term(out, constant_, "");
  return out;
}

RationalPolynomial pow(const RationalPolynomial& p, int n) {
  RationalPolynomial r = RationalPolynomial::constant(1);
  for (int i = 0; i < n; ++i) r = r * p;
  return r;
}

namespace {

// Recursive-descent parser shared by the polynomial and affine grammars.
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*      (juxtaposition not allowed)
//   factor := atom ['^' integer]
//   atom   := number | identifier | '(' expr ')'
template <class Algebra>
class Parser {
 public:
  using Value = typename Algebra::Value;
  Parser(const std::string& text, Algebra& alg) : s_(text), alg_(alg) {}

  Value parse() {
    Value v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, what + " at column " + std::to_string(pos_ + 1) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  Value expr() {
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    Value v = term();
    if (neg) v = alg_.neg(v);
    for (;;) {
      if (eat('+')) v = alg_.add(v, term());
      else if (eat('-')) v = alg_.add(v, alg_.neg(term()));
      else return v;
    }
  }

  Value term() {
    Value v = factor();
    for (;;) {
      if (eat('*')) {
        v = alg_.mul(v, factor(), [this](const std::string& m) { fail(m); });
      } else if (eat('/')) {
        auto d = alg_.as_constant(factor());
        if (!d) fail("division by a non-constant");
        if (*d == 0) fail("division by zero");
        v = alg_.scale(v, Rational(1) / *d);
      } else {
        return v;
      }
    }
  }

  Value factor() {
    Value v = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      int n = std::stoi(s_.substr(start, pos_ - start));
      if (n > 12) fail("exponent too large");
      Value r = alg_.one();
      for (int i = 0; i < n; ++i) r = alg_.mul(r, v, [this](const std::string& m) { fail(m); });
      return r;
    }
    return v;
  }

  Value atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      Value v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
          (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-' || s_[pos_ + 1] == '+')) {
        pos_ += 2;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      return alg_.number(parse_rational(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto v = alg_.identifier(name);
      if (!v) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      return *v;
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
  Algebra& alg_;
};

struct PolyAlgebra {
  using Value = RationalPolynomial;
  Value one() const { return Value::constant(1); }
  Value number(const Rational& r) const { return Value::constant(r); }
  std::optional<Value> identifier(const std::string& n) const {
    if (n == "x") return Value::monomial({1, 0}, 1);
    if (n == "y") return Value::monomial({0, 1}, 1);
    return std::nullopt;
  }
  Value neg(const Value& v) const { return -v; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  template <class Fail>
  Value mul(const Value& a, const Value& b, Fail&&) const { return a * b; }
  Value scale(const Value& v, const Rational& s) const { return v.scaled(s); }
  std::optional<Rational> as_constant(const Value& v) const {
    if (v.is_zero()) return Rational(0);
    if (v.terms().size() == 1 && v.terms().begin()->first == Monomial{0, 0}) return v.terms().begin()->second;
    return std::nullopt;
  }
};

struct AffineAlgebra {
  using Value = LinearForm;
  const std::vector<std::string>& names;
  Value one() const { return LinearForm(Rational(1)); }
  Value number(const Rational& r) const { return LinearForm(r); }
  std::optional<Value> identifier(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return LinearForm::variable(static_cast<int>(i));
    return std::nullopt;
  }
  Value neg(const Value& v) const { return -v; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  template <class Fail>
  Value mul(const Value& a, const Value& b, Fail&& fail) const {
    if (a.is_constant()) return b * a.constant();
    if (b.is_constant()) return a * b.constant();
    fail("coefficient is not affine in the parameters");
    return a;
  }
  Value scale(const Value& v, const Rational& s) const { return v * s; }
  std::optional<Rational> as_constant(const Value& v) const {
    if (v.is_constant()) return v.constant();
    return std::nullopt;
  }
};

}  // namespace

RationalPolynomial parse_polynomial(const std::string& text) {
  PolyAlgebra alg;
  return Parser<PolyAlgebra>(text, alg).parse();
}

LinearForm parse_affine(const std::string& text, const std::vector<std::string>& names) {
  AffineAlgebra alg{names};
  return Parser<AffineAlgebra>(text, alg).parse();
}

std::string format_polynomial(const RationalPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    std::string mono;
    auto var = [&mono](const char* v, int e) {
      if (e == 0) return;
      if (!mono.empty()) mono += "*";
      mono += v;
      if (e > 1) mono += "^" + std::to_string(e);
    };
    var("x", m.px);
    var("y", m.py);
    append_term(out, c, mono);
  }
  return out;
}

}  // namespace hetbif
