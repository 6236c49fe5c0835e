#pragma once

#include "hetbif/geometry.hpp"
#include "hetbif/polynomial.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hetbif {

inline constexpr int kMaxSystemDegree = 6;

using ParamValues = std::vector<double>;
using RhsFn = std::function<Vec2(Vec2, const ParamValues&)>;
using JacobianFn = std::function<Mat2(Vec2, const ParamValues&)>;

struct Parameter {
  std::string name;
  Rational default_value{0};
  friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct MonomialTerm {
  LinearForm coeff;
  int px = 0;
  int py = 0;
  friend bool operator==(const MonomialTerm&, const MonomialTerm&) = default;
};

/// A field with parameter values fixed: what the integrators actually evaluate.
/// Polynomial fields carry flat double coefficients; closed-form ones carry closures.
class BoundField {
 public:
  Vec2 operator()(Vec2 z) const;
  Mat2 jacobian(Vec2 z) const;
  double divergence(Vec2 z) const { Mat2 j = jacobian(z); return j.trace(); }
  /// Same field with time reversed.
  BoundField reversed() const;

 private:
  friend class ParametricSystem;
  struct Term {
    double c;
    int px, py;
  };
  std::vector<Term> fx_, fy_;
  int degree_ = 0;
  RhsFn rhs_;
  JacobianFn jac_;
  ParamValues params_;
  double sign_ = 1.0;
};

class ParametricSystem {
 public:
  /// Polynomial system; terms are merged and put in canonical order.
  ParametricSystem(std::string name, std::vector<Parameter> parameters,
                   std::vector<MonomialTerm> x_dot, std::vector<MonomialTerm> y_dot);
  /// Closed-form system; forward-difference Jacobian when jac is empty.
  ParametricSystem(std::string name, std::vector<Parameter> parameters, RhsFn rhs, JacobianFn jac = {});

  const std::string& name() const { return name_; }
  const std::vector<Parameter>& parameters() const { return parameters_; }
  std::vector<std::string> parameter_names() const;
  /// Throws ConfigError for unknown names.
  int parameter_index(std::string_view name) const;

  bool is_polynomial() const { return polynomial_; }
  const std::vector<MonomialTerm>& x_dot() const { return x_dot_; }
  const std::vector<MonomialTerm>& y_dot() const { return y_dot_; }
  ParametricPolynomial x_polynomial() const;
  ParametricPolynomial y_polynomial() const;
  int degree() const;

  ParamValues defaults() const;
  /// Defaults with named overrides applied.
  ParamValues with(const std::map<std::string, double>& overrides) const;

  BoundField bind(const ParamValues& params) const;
  Vec2 rhs(Vec2 z, const ParamValues& params) const { return bind(params)(z); }
  Mat2 jacobian(Vec2 z, const ParamValues& params) const { return bind(params).jacobian(z); }

  friend bool operator==(const ParametricSystem& a, const ParametricSystem& b);

 private:
  std::string name_;
  std::vector<Parameter> parameters_;
  bool polynomial_ = true;
  std::vector<MonomialTerm> x_dot_, y_dot_;
  RhsFn rhs_;
  JacobianFn jac_;
};

/// Evaluates with a complete name->value map: missing names are a ConfigError,
/// non-finite inputs a DomainError.
Vec2 evaluate(const ParametricSystem& sys, Vec2 point, const std::map<std::string, double>& params);

ParametricSystem time_reversed(const ParametricSystem& sys);

/// The polynomial field d(rhs)/d(param) (constant in parameters, since coefficients are affine).
ParametricSystem parameter_derivative(const ParametricSystem& sys, std::string_view param);

ParametricSystem rename_parameters(const ParametricSystem& sys, const std::map<std::string, std::string>& renames);
ParametricSystem with_defaults(const ParametricSystem& sys, const std::map<std::string, Rational>& defaults);

/// mono_unperturbed, mono_perturbed, revers_base, revers_gamma, diss_heart.
ParametricSystem builtin(std::string_view name);
std::vector<std::string> builtin_names();

/// JSON system format (see docs/system_format.md).
ParametricSystem parse_system(const std::string& json_text);
ParametricSystem load_system(const std::filesystem::path& path);
std::string serialize_system(const ParametricSystem& sys);
void save_system(const ParametricSystem& sys, const std::filesystem::path& path);

}  // namespace hetbif
