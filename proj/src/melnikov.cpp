#include "hetbif/melnikov.hpp"

#include "hetbif/error.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace hetbif {

namespace {

using boost::math::quadrature::tanh_sinh;

// Below this distance from an endpoint the polynomial cancellations in f spoil the
// integrand; the remainder is a power-law tail fitted from two samples.
constexpr double kEdge = 1e-6;

struct Curve {
  MelnikovConnection kind;
  Vec2 at(double x) const { return {x, kind == MelnikovConnection::XAxis ? 0.0 : x * (1.0 - x)}; }
  Vec2 tangent(double x) const { return {1.0, kind == MelnikovConnection::XAxis ? 0.0 : 1.0 - 2.0 * x}; }
};

struct Integrand {
  BoundField field, dfield;
  Curve curve;

  double speed(double x) const { return field(curve.at(x)).x; }
  double div_over_speed(double x) const {
    Vec2 z = curve.at(x);
    return field.divergence(z) / field(z).x;
  }
  double psi_over_speed(double x) const {
    Vec2 z = curve.at(x);
    Vec2 v = field(z), dv = dfield(z);
    return (v.x * dv.y - v.y * dv.x) / v.x;
  }
};

}  // namespace

const char* to_string(MelnikovConnection c) { return c == MelnikovConnection::XAxis ? "x_axis" : "parabola"; }

MelnikovConnection melnikov_connection_from_string(const std::string& s) {
  if (s == "x_axis" || s == "xaxis") return MelnikovConnection::XAxis;
  if (s == "parabola") return MelnikovConnection::Parabola;
  throw Error(ErrorKind::ConfigError, "unknown connection '" + s + "' (x_axis, parabola)");
}

MelnikovResult melnikov_integral(const MelnikovProblem& pr) {
  Integrand in{pr.system.bind(pr.params), parameter_derivative(pr.system, pr.parameter).bind(pr.params),
               Curve{pr.connection}};

  // Invariance and a flow that does not stall inside (0,1).
  double dir = 0.0;
  for (int i = 1; i < 64; ++i) {
    double x = i / 64.0;
    Vec2 z = in.curve.at(x), v = in.field(z), t = in.curve.tangent(x);
    double normal = v.y * t.x - v.x * t.y;
    if (std::abs(normal) > 1e-12 * (1.0 + norm(v)))
      throw Error(ErrorKind::DomainError, std::string(to_string(pr.connection)) + " is not invariant at x = " +
                                              std::to_string(x));
    double s = v.x > 0 ? 1.0 : (v.x < 0 ? -1.0 : 0.0);
    if (s == 0.0 || (dir != 0.0 && s != dir))
      throw Error(ErrorKind::DomainError, "flow along the connection stalls at x = " + std::to_string(x));
    dir = s;
  }

  tanh_sinh<double> inner, outer;
  double inner_tol = std::max(pr.tolerance * 1e-2, 1e-14);
  // -log phi(x) = int_{1/2}^x div/f.
  auto log_weight = [&](double x) {
    if (x == 0.5) return 0.0;
    double a = std::min(x, 0.5), b = std::max(x, 0.5);
    double v = inner.integrate([&](double u) { return in.div_over_speed(u); }, a, b, inner_tol);
    return x < 0.5 ? -v : v;
  };
  auto g = [&](double x) {
    double q = in.psi_over_speed(x);
    if (q == 0.0) return 0.0;
    return q * std::exp(-log_weight(x));
  };

  // Local exponents of the integrand at both ends, from samples at kEdge and kEdge/10.
  auto exponent = [&](double x1, double x2) {
    double g1 = g(x1), g2 = g(x2);
    if (g1 == 0.0 || g2 == 0.0 || (g1 > 0) != (g2 > 0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log10(g1 / g2);
  };
  MelnikovResult r;
  // Rounding in the perturbation term leaves ~1e-17 where psi vanishes identically.
  std::vector<double> qs;
  double qmax = 0.0, vmax = 0.0;
  for (int i = 1; i < 1000; ++i) {
    double x = i / 1000.0;
    qs.push_back(in.psi_over_speed(x));
    qmax = std::max(qmax, std::abs(qs.back()));
    vmax = std::max(vmax, norm(in.field(in.curve.at(x))));
  }
  int s0 = 0;
  if (qmax > 1e-12 * (1.0 + vmax))
    for (double q : qs) {
      int s = q > 0 ? 1 : (q < 0 ? -1 : 0);
      if (s == 0) continue;
      if (s0 == 0) s0 = s;
      r.integrand_one_sign = r.integrand_one_sign && s == s0;
    }
  r.orientation = dir > 0 ? "x increases 0 -> 1 along the connection; phi = 1 at x = 1/2"
                          : "x decreases 1 -> 0 along the connection; phi = 1 at x = 1/2";
  if (s0 == 0) {
    // psi vanishes on the curve: the parameter does not move this connection.
    r.sign_certified = true;
    return r;
  }

  r.exponent_at_0 = exponent(kEdge, kEdge / 10);
  r.exponent_at_1 = exponent(1.0 - kEdge, 1.0 - kEdge / 10);
  for (double p : {r.exponent_at_0, r.exponent_at_1})
    if (!std::isfinite(p) || p <= -1.0)
      throw Error(ErrorKind::QuadratureError, "integrand is not integrable at an endpoint (local exponent " +
                                                  std::to_string(p) + ")");

  double err = 0.0, l1 = 0.0;
  double core = outer.integrate(g, kEdge, 1.0 - kEdge, pr.tolerance, &err, &l1);
  double tail0 = g(kEdge) * kEdge / (r.exponent_at_0 + 1.0);
  double tail1 = g(1.0 - kEdge) * kEdge / (r.exponent_at_1 + 1.0);
  double total = core + tail0 + tail1;
  if (!std::isfinite(total))
    throw Error(ErrorKind::QuadratureError, "non-finite Melnikov integral");

  // Time runs from x(-inf) to x(+inf): forward in x when f > 0 on the curve.
  r.value = dir * total;
  // The tail fit is exact to first order; its error is a fraction kEdge of the tail.
  r.error_estimate = err + 10.0 * inner_tol * l1 + (std::abs(tail0) + std::abs(tail1)) * 1e-3;
  r.sign = r.value > 0 ? 1 : (r.value < 0 ? -1 : 0);

  r.sign_certified = std::abs(r.value) > r.error_estimate;
  return r;
}

double splitting_derivative_check(const Scenario& s, const std::string& parameter, MelnikovConnection connection,
                                  double h) {
  int idx = s.system.parameter_index(parameter);
  Vec2 dp{idx == s.p1 ? h : 0.0, idx == s.p2 ? h : 0.0};
  if (dp.x == 0.0 && dp.y == 0.0)
    throw Error(ErrorKind::ConfigError, "'" + parameter + "' is not an active parameter of " + s.name);
  CurveTag tag = connection == MelnikovConnection::XAxis ? CurveTag::H_L : CurveTag::H_M;
  auto gap = [&](Vec2 p) {
    GapEvaluation e = s.gap(tag, 0, p);
    if (!e.ok()) throw Error(ErrorKind::NoIntersection, e.message);
    return e.result.gap;
  };
  return (gap(dp) - gap(-dp)) / (2.0 * h);
}

}  // namespace hetbif
