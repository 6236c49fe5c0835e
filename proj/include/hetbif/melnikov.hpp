#pragma once

// First-order splitting of the two straight/parabolic connections of the monodromic
// example. Along a connection parametrized by x in (0, 1),
//
//   M_p = int phi psi dt,  phi = exp(-int div dt),  psi = f dg/dp - g df/dp,
//
// and dt = dx / f, with phi normalized to 1 at x = 1/2.

#include "hetbif/scenarios.hpp"
#include "hetbif/vectorfield.hpp"

#include <string>

namespace hetbif {

enum class MelnikovConnection { XAxis, Parabola };  // y = 0 and y = x(1 - x)
const char* to_string(MelnikovConnection c);
MelnikovConnection melnikov_connection_from_string(const std::string& s);

struct MelnikovProblem {
  ParametricSystem system;
  ParamValues params;  // critical values: the connection must be invariant here
  std::string parameter;
  MelnikovConnection connection = MelnikovConnection::Parabola;
  double tolerance = 1e-10;  // relative, per quadrature
};

struct MelnikovResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool sign_certified = false;  // |value| > error_estimate, or psi vanishes on the curve
  bool integrand_one_sign = true;
  int sign = 0;
  std::string orientation;      // direction of travel and normalization
  double exponent_at_0 = 0.0, exponent_at_1 = 0.0;  // local power of the x-integrand
};

/// DomainError when the curve is not invariant or the flow stalls on it; QuadratureError
/// when an endpoint is not integrable.
MelnikovResult melnikov_integral(const MelnikovProblem& problem);

/// (gap(+h) - gap(-h)) / 2h for the mono scenario connection matching `connection`
/// (x-axis: L -> M on the lower section; parabola: M -> L), other parameter at 0.
double splitting_derivative_check(const Scenario& s, const std::string& parameter, MelnikovConnection connection,
                                  double h = 1e-4);

}  // namespace hetbif
