#pragma once

#include "hetbif/geometry.hpp"
#include "hetbif/vectorfield.hpp"

#include <complex>
#include <string>

namespace hetbif {

enum class EquilibriumType { Saddle, StableFocus, UnstableFocus, StableNode, UnstableNode, NonHyperbolic };
const char* to_string(EquilibriumType t);

struct Equilibrium {
  Vec2 point;
  EquilibriumType type = EquilibriumType::NonHyperbolic;
  std::complex<double> eig1, eig2;
};

/// Cutoff on |Re eigenvalue| below which a point is not classified.
inline constexpr double kHyperbolicityCutoff = 1e-8;

EquilibriumType classify(const Mat2& jac, std::complex<double>* e1 = nullptr, std::complex<double>* e2 = nullptr);

/// Damped Newton with Armijo backtracking; ||rhs|| <= 1e-12 on success, NoConvergence otherwise.
Equilibrium find_equilibrium(const BoundField& field, Vec2 guess);
Equilibrium find_equilibrium(const ParametricSystem& sys, const ParamValues& params, Vec2 guess);

struct Saddle {
  Vec2 location;
  double lambda_s = 0.0;
  double lambda_u = 0.0;
  Vec2 v_s, v_u;  // unit; first nonzero component positive
  double index() const { return -lambda_s / lambda_u; }
};

/// NotASaddle unless the Jacobian at point has real eigenvalues of opposite sign.
Saddle saddle_data(const BoundField& field, Vec2 point);
Saddle saddle_data(const ParametricSystem& sys, const ParamValues& params, Vec2 point);

/// Sign-normalized unit eigenvector of a 2x2 matrix for a real eigenvalue.
Vec2 eigenvector(const Mat2& j, double eigenvalue);

enum class Reduction { None, TimeReversal, Swap, TimeReversalAndSwap };
const char* to_string(Reduction r);

/// The six index sign patterns. Cases 1 and 6 are canonical; the rest map onto
/// them by time reversal (indices inverted) and/or exchanging the roles of L and M.
struct SubcaseTag {
  bool lambda_lt_1 = false;
  bool mu_lt_1 = false;
  bool product_lt_1 = false;
  int case_id = 0;
  int canonical_case = 0;
  Reduction reduction = Reduction::None;
};

SubcaseTag subcase_from_indices(double lambda, double mu);
/// Degenerate if an index or the product is 1 within 1e-10.
SubcaseTag classify_subcase(const Saddle& L, const Saddle& M);
SubcaseTag reverse_time(const SubcaseTag& t);
SubcaseTag swap_roles(const SubcaseTag& t);

}  // namespace hetbif
