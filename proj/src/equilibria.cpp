#include "hetbif/equilibria.hpp"

#include "hetbif/error.hpp"

#include <cmath>

namespace hetbif {

const char* to_string(EquilibriumType t) {
  switch (t) {
    case EquilibriumType::Saddle: return "Saddle";
    case EquilibriumType::StableFocus: return "StableFocus";
    case EquilibriumType::UnstableFocus: return "UnstableFocus";
    case EquilibriumType::StableNode: return "StableNode";
    case EquilibriumType::UnstableNode: return "UnstableNode";
    case EquilibriumType::NonHyperbolic: return "NonHyperbolic";
  }
  return "?";
}

const char* to_string(Reduction r) {
  switch (r) {
    case Reduction::None: return "none";
    case Reduction::TimeReversal: return "time reversal";
    case Reduction::Swap: return "L<->M swap";
    case Reduction::TimeReversalAndSwap: return "time reversal + L<->M swap";
  }
  return "?";
}

namespace {

// Real eigenvalues in ascending order, or a complex pair.
void eigenvalues(const Mat2& j, std::complex<double>& e1, std::complex<double>& e2) {
  double tr = j.trace(), det = j.det();
  double disc = 0.25 * tr * tr - det;
  if (disc >= 0) {
    double s = std::sqrt(disc);
    // Stable formula for the smaller-magnitude root.
    double big = 0.5 * tr + (tr >= 0 ? s : -s);
    double small = big != 0.0 ? det / big : 0.0;
    double lo = std::min(big, small), hi = std::max(big, small);
    e1 = lo;
    e2 = hi;
  } else {
    double s = std::sqrt(-disc);
    e1 = {0.5 * tr, -s};
    e2 = {0.5 * tr, s};
  }
}

}  // namespace

EquilibriumType classify(const Mat2& jac, std::complex<double>* o1, std::complex<double>* o2) {
  std::complex<double> e1, e2;
  eigenvalues(jac, e1, e2);
  if (o1) *o1 = e1;
  if (o2) *o2 = e2;
  if (std::abs(e1.real()) < kHyperbolicityCutoff || std::abs(e2.real()) < kHyperbolicityCutoff)
    return EquilibriumType::NonHyperbolic;
  if (e1.imag() != 0.0) return e1.real() < 0 ? EquilibriumType::StableFocus : EquilibriumType::UnstableFocus;
  if (e1.real() < 0 && e2.real() > 0) return EquilibriumType::Saddle;
  return e2.real() < 0 ? EquilibriumType::StableNode : EquilibriumType::UnstableNode;
}

Equilibrium find_equilibrium(const BoundField& field, Vec2 guess) {
  Vec2 z = guess;
  if (!is_finite(z)) throw Error(ErrorKind::DomainError, "non-finite guess");
  Vec2 f = field(z);
  double phi = dot(f, f);
  int polish = 0;
  for (int it = 0; it < 100; ++it) {
    if (std::sqrt(phi) <= 1e-12) {
      // A couple of extra full steps push the residual to roundoff.
      if (++polish > 2) break;
    }
    Mat2 j = field.jacobian(z);
    double det = j.det();
    if (det == 0.0 || !std::isfinite(det)) throw Error(ErrorKind::NoConvergence, "singular Jacobian in Newton iteration");
    Vec2 d{-(j.d * f.x - j.b * f.y) / det, -(-j.c * f.x + j.a * f.y) / det};
    double t = 1.0;
    Vec2 zn;
    Vec2 fn;
    double phin = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      zn = z + t * d;
      fn = field(zn);
      phin = dot(fn, fn);
      if (std::isfinite(phin) && phin <= (1.0 - 1e-4 * t) * phi) break;
      t *= 0.5;
    }
    if (!std::isfinite(phin)) throw Error(ErrorKind::NoConvergence, "Newton left the finite domain");
    if (phin > phi && std::sqrt(phi) <= 1e-12) break;  // roundoff floor reached
    z = zn;
    f = fn;
    phi = phin;
  }
  if (!(std::sqrt(phi) <= 1e-12)) throw Error(ErrorKind::NoConvergence, "Newton stagnated after 100 damped steps");
  Equilibrium e;
  e.point = z;
  e.type = classify(field.jacobian(z), &e.eig1, &e.eig2);
  return e;
}

Equilibrium find_equilibrium(const ParametricSystem& sys, const ParamValues& params, Vec2 guess) {
  return find_equilibrium(sys.bind(params), guess);
}

Vec2 eigenvector(const Mat2& j, double l) {
  // Rows of (J - l I) are orthogonal to the eigenvector; use the better-conditioned one.
  Vec2 c1{j.b, l - j.a};
  Vec2 c2{l - j.d, j.c};
  Vec2 v = norm(c1) >= norm(c2) ? c1 : c2;
  if (norm(v) == 0.0) v = {1.0, 0.0};  // J = l I
  v = normalized(v);
  constexpr double tiny = 1e-14;
  if (v.x < -tiny || (std::abs(v.x) <= tiny && v.y < 0)) v = -v;
  return v;
}

Saddle saddle_data(const BoundField& field, Vec2 point) {
  Mat2 j = field.jacobian(point);
  std::complex<double> e1, e2;
  if (classify(j, &e1, &e2) != EquilibriumType::Saddle) throw Error(ErrorKind::NotASaddle, "point is not a hyperbolic saddle");
  Saddle s;
  s.location = point;
  s.lambda_s = e1.real();
  s.lambda_u = e2.real();
  s.v_s = eigenvector(j, s.lambda_s);
  s.v_u = eigenvector(j, s.lambda_u);
  return s;
}

Saddle saddle_data(const ParametricSystem& sys, const ParamValues& params, Vec2 point) {
  return saddle_data(sys.bind(params), point);
}

namespace {

int case_of(bool l, bool m, bool p) {
  // Table order: (λ<1, μ<1) patterns, split by the product where it is not forced.
  if (l && !m) return p ? 1 : 2;
  if (!l && m) return p ? 4 : 3;
  if (!l && !m) return 5;
  return 6;
}

SubcaseTag from_flags(bool l, bool m, bool p) {
  SubcaseTag t;
  t.lambda_lt_1 = l;
  t.mu_lt_1 = m;
  t.product_lt_1 = p;
  t.case_id = case_of(l, m, p);
  switch (t.case_id) {
    case 1: t.canonical_case = 1; t.reduction = Reduction::None; break;
    case 6: t.canonical_case = 6; t.reduction = Reduction::None; break;
    case 3: t.canonical_case = 1; t.reduction = Reduction::TimeReversal; break;
    case 5: t.canonical_case = 6; t.reduction = Reduction::TimeReversal; break;
    case 4: t.canonical_case = 1; t.reduction = Reduction::Swap; break;
    case 2: t.canonical_case = 1; t.reduction = Reduction::TimeReversalAndSwap; break;
  }
  return t;
}

}  // namespace

SubcaseTag subcase_from_indices(double lambda, double mu) {
  constexpr double eps = 1e-10;
  if (!(lambda > 0 && mu > 0)) throw Error(ErrorKind::Degenerate, "saddle indices must be positive");
  if (std::abs(lambda - 1) < eps || std::abs(mu - 1) < eps || std::abs(lambda * mu - 1) < eps)
    throw Error(ErrorKind::Degenerate, "saddle index or index product equals 1");
  return from_flags(lambda < 1, mu < 1, lambda * mu < 1);
}

SubcaseTag classify_subcase(const Saddle& L, const Saddle& M) { return subcase_from_indices(L.index(), M.index()); }

SubcaseTag reverse_time(const SubcaseTag& t) { return from_flags(!t.lambda_lt_1, !t.mu_lt_1, !t.product_lt_1); }

SubcaseTag swap_roles(const SubcaseTag& t) { return from_flags(t.mu_lt_1, t.lambda_lt_1, t.product_lt_1); }

}  // namespace hetbif
