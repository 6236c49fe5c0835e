#pragma once

// Polynomial fields tangent to an algebraic curve G = 0. The tangency condition
// <grad G, (f, g)> = 0 on G = 0 becomes "remainder of <grad G, (f, g)> on division by G
// is zero", which is linear in the ansatz coefficients and is solved exactly.

#include "hetbif/polynomial.hpp"
#include "hetbif/vectorfield.hpp"

#include <string>
#include <vector>

namespace hetbif {

inline constexpr int kMaxSynthesisDegree = 6;

struct Variety {
  RationalPolynomial G;
  static Variety parse(const std::string& text);  // ParseError; DomainError for G = 0
};

/// Unknowns a_jk (coefficient of x^j y^k in xdot) and b_jk (in ydot), all 0 <= j+k <= degree.
struct TangencyUnknown {
  int component = 0;  // 0: xdot, 1: ydot
  Monomial m;
  std::string name() const;  // "a10", "b02"
};

struct TangencySystem {
  int degree = 0;
  std::vector<TangencyUnknown> unknowns;
  std::vector<std::vector<Rational>> rows;  // rows . unknowns = 0, one per remainder monomial
};

/// ConfigError when degree is outside [1, kMaxSynthesisDegree].
TangencySystem tangency_system(const Variety& v, int degree);

struct TangentFamily {
  int degree = 0;
  std::vector<std::string> free_parameters;  // unknown names chosen as free
  ParametricSystem field;                    // coefficients affine in the free parameters
};

/// Exact nullspace by reduced row echelon form. Pivots are taken on b_jk first, then on
/// a_jk from the highest monomial down, so the lowest a_jk stay free. EmptyFamily when only
/// the zero field is tangent.
TangentFamily solve_family(const Variety& v, int degree, const std::string& name = "tangent_family");

/// Nullspace dimension only (rank of the tangency system).
int family_dimension(const TangencySystem& sys);

/// Exact check: every member of the family (any parameter values) is tangent.
bool is_tangent(const Variety& v, const ParametricSystem& sys);

/// A term `parameter * term` added to xdot (component 0) or ydot (1). It must vanish on
/// the curve `preserves`, a factor of G, so the connection along that curve survives.
struct Perturbation {
  std::string parameter;
  int component = 0;
  RationalPolynomial term;
  RationalPolynomial preserves;
};

/// New parameters are appended with default 0. BadPerturbation when a term does not vanish
/// on its curve or the curve does not divide G.
ParametricSystem perturb_connections(const ParametricSystem& instance, const Variety& v,
                                     const std::vector<Perturbation>& perturbations,
                                     const std::string& name = "");

}  // namespace hetbif
