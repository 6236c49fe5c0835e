#include "hetbif/synthesis.hpp"

#include "hetbif/error.hpp"

#include <algorithm>

namespace hetbif {

namespace {

// Column order for elimination: every b before every a, each block from the highest
// grevlex monomial down. Pivots land as early as possible, leaving low a_jk free.
std::vector<TangencyUnknown> ordered_unknowns(int degree) {
  std::vector<Monomial> ms;
  for (int d = 0; d <= degree; ++d)
    for (int j = d; j >= 0; --j) ms.push_back({j, d - j});
  std::sort(ms.begin(), ms.end(), [](const Monomial& a, const Monomial& b) { return GrevlexLess{}(b, a); });
  std::vector<TangencyUnknown> out;
  for (int comp : {1, 0})
    for (const auto& m : ms) out.push_back({comp, m});
  return out;
}

ParametricPolynomial tangency_polynomial(const RationalPolynomial& G, const ParametricPolynomial& f,
                                         const ParametricPolynomial& g) {
  return G.derivative_x() * f + G.derivative_y() * g;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<Rational>>& a, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int c = 0; c < cols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    Rational inv = Rational(1) / a[row][c];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (int k = 0; k < cols; ++k) a[r][k] -= f * a[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  a.resize(row);
  return pivots;
}

}  // namespace

Variety Variety::parse(const std::string& text) {
  Variety v{parse_polynomial(text)};
  if (v.G.is_zero()) throw Error(ErrorKind::DomainError, "G is identically zero");
  return v;
}

std::string TangencyUnknown::name() const {
  return std::string(component == 0 ? "a" : "b") + std::to_string(m.px) + std::to_string(m.py);
}

TangencySystem tangency_system(const Variety& v, int degree) {
  if (degree < 1 || degree > kMaxSynthesisDegree)
    throw Error(ErrorKind::ConfigError, "ansatz degree must be in [1, " + std::to_string(kMaxSynthesisDegree) + "]");
  if (v.G.is_zero()) throw Error(ErrorKind::DomainError, "G is identically zero");
  TangencySystem sys;
  sys.degree = degree;
  sys.unknowns = ordered_unknowns(degree);
  ParametricPolynomial f, g;
  for (std::size_t i = 0; i < sys.unknowns.size(); ++i) {
    const auto& u = sys.unknowns[i];
    (u.component == 0 ? f : g).add_term(u.m, LinearForm::variable(static_cast<int>(i)));
  }
  ParametricPolynomial rem = remainder(tangency_polynomial(v.G, f, g), v.G);
  for (const auto& [m, form] : rem.terms()) {
    std::vector<Rational> row(sys.unknowns.size());
    for (const auto& [i, c] : form.coefficients()) row[i] = c;
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

int family_dimension(const TangencySystem& sys) {
  auto a = sys.rows;
  return static_cast<int>(sys.unknowns.size() - rref(a, static_cast<int>(sys.unknowns.size())).size());
}

TangentFamily solve_family(const Variety& v, int degree, const std::string& name) {
  TangencySystem sys = tangency_system(v, degree);
  const int n = static_cast<int>(sys.unknowns.size());
  auto a = sys.rows;
  std::vector<int> pivots = rref(a, n);
  std::vector<int> free;
  for (int c = 0; c < n; ++c)
    if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free.push_back(c);
  if (free.empty()) throw Error(ErrorKind::EmptyFamily, "only the zero field is tangent at degree " + std::to_string(degree));

  // Free parameters listed by increasing degree, x before y.
  std::sort(free.begin(), free.end(), [&](int i, int j) {
    const Monomial &a1 = sys.unknowns[i].m, &a2 = sys.unknowns[j].m;
    if (sys.unknowns[i].component != sys.unknowns[j].component)
      return sys.unknowns[i].component < sys.unknowns[j].component;
    if (a1.degree() != a2.degree()) return a1.degree() < a2.degree();
    return a1.px > a2.px;
  });
  std::vector<std::string> names;
  std::vector<Parameter> params;
  std::vector<LinearForm> value(n);
  for (std::size_t k = 0; k < free.size(); ++k) {
    names.push_back(sys.unknowns[free[k]].name());
    params.push_back({names.back(), Rational(0)});
    value[free[k]] = LinearForm::variable(static_cast<int>(k));
  }
  // Pivot unknown = -(sum over free columns of row entry * free value).
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    LinearForm e;
    for (std::size_t k = 0; k < free.size(); ++k)
      if (a[r][free[k]] != 0) e -= LinearForm::variable(static_cast<int>(k), a[r][free[k]]);
    value[pivots[r]] = e;
  }
  std::vector<MonomialTerm> xd, yd;
  for (int i = 0; i < n; ++i) {
    if (value[i].is_zero()) continue;
    const auto& u = sys.unknowns[i];
    (u.component == 0 ? xd : yd).push_back({value[i], u.m.px, u.m.py});
  }
  return {degree, names, ParametricSystem(name, params, xd, yd)};
}

bool is_tangent(const Variety& v, const ParametricSystem& sys) {
  if (!sys.is_polynomial()) throw Error(ErrorKind::ConfigError, "tangency check needs a polynomial system");
  return remainder(tangency_polynomial(v.G, sys.x_polynomial(), sys.y_polynomial()), v.G).is_zero();
}

ParametricSystem perturb_connections(const ParametricSystem& instance, const Variety& v,
                                     const std::vector<Perturbation>& perturbations, const std::string& name) {
  if (!instance.is_polynomial()) throw Error(ErrorKind::ConfigError, "perturbation needs a polynomial system");
  auto params = instance.parameters();
  auto xd = instance.x_dot(), yd = instance.y_dot();
  for (const auto& p : perturbations) {
    if (p.preserves.is_zero() || !remainder(v.G, p.preserves).is_zero())
      throw Error(ErrorKind::BadPerturbation, format_polynomial(p.preserves) + " is not a factor of G");
    if (!remainder(p.term, p.preserves).is_zero())
      throw Error(ErrorKind::BadPerturbation,
                  format_polynomial(p.term) + " does not vanish on " + format_polynomial(p.preserves) + " = 0");
    int idx = static_cast<int>(params.size());
    params.push_back({p.parameter, Rational(0)});
    for (const auto& [m, c] : p.term.terms())
      (p.component == 0 ? xd : yd).push_back({LinearForm::variable(idx, c), m.px, m.py});
  }
  return ParametricSystem(name.empty() ? instance.name() : name, params, xd, yd);
}

}  // namespace hetbif
