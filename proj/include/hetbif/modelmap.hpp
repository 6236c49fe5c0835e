#pragma once

// Truncated one-dimensional return maps of a two-saddle contour. A point xi on the
// section next to L passes the corner of L (xi -> xi^lambda), the regular flight to
// M (affine, offset beta2), the corner of M (^mu) and the flight back (offset beta1):
//
//   monodromic      P(xi) = beta1 + theta2 (beta2 + theta1 xi^lambda)^mu
//   non-monodromic  P(xi) = beta1 - theta2 (beta2 - theta1 xi^lambda)^mu
//
// Positive section coordinates lie inside the contour; a negative base means the orbit
// misses the section and the map is undefined there (nullopt, never clamped).

#include "hetbif/continuation.hpp"
#include "hetbif/geometry.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace hetbif {

enum class Orientation { Monodromic, NonMonodromic };
const char* to_string(Orientation o);
Orientation orientation_from_string(const std::string& s);

// Near a homoclinic curve the k-turn zeros close in doubly exponentially: for
// lambda = mu = 1/2 the k = 5 zero sits about 1e-180 from the accumulation point.
using HighReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<240>>;

template <class Real>
struct ModelMap {
  Real lambda = 1, mu = 1;
  Real theta1 = 1, theta2 = 1;
  Orientation orientation = Orientation::Monodromic;
  Real beta1 = 0, beta2 = 0;

  Real sign() const { return orientation == Orientation::Monodromic ? Real(1) : Real(-1); }

  /// Sigma_L -> Sigma_M: beta2 + s theta1 xi^lambda.
  std::optional<Real> to_M(const Real& xi) const {
    using std::pow;
    if (xi < 0) return std::nullopt;
    return beta2 + sign() * theta1 * pow(xi, lambda);
  }
  /// Sigma_M -> Sigma_L: beta1 + s theta2 eta^mu.
  std::optional<Real> to_L(const Real& eta) const {
    using std::pow;
    if (eta < 0) return std::nullopt;
    return beta1 + sign() * theta2 * pow(eta, mu);
  }
  std::optional<Real> eval(const Real& xi) const {
    auto eta = to_M(xi);
    if (!eta) return std::nullopt;
    return to_L(*eta);
  }
  /// P'(xi) on the open domain; the same positive expression in both orientations.
  std::optional<Real> derivative(const Real& xi) const {
    using std::pow;
    auto eta = to_M(xi);
    if (!eta || *eta <= 0 || xi <= 0) return std::nullopt;
    return theta1 * theta2 * lambda * mu * pow(xi, lambda - 1) * pow(*eta, mu - 1);
  }
};

/// (lambda, mu, thetas, orientation) with the window the diagram is drawn in. Fixed
/// points are counted on [0, xi_max]; the truncated map is only a model near the contour.
struct ModelMapFamily {
  double lambda = 0.5, mu = 0.5;
  double theta1 = 1.0, theta2 = 1.0;
  Orientation orientation = Orientation::NonMonodromic;
  double xi_max = 0.25;
  Box box{-0.05, 0.05, -0.05, 0.05};

  template <class Real = double>
  ModelMap<Real> at(Vec2 beta) const {
    return {Real(lambda), Real(mu), Real(theta1), Real(theta2), orientation, Real(beta.x), Real(beta.y)};
  }
  /// Degenerate when an index or the product is 1.
  void validate() const;
};

/// Value whose zero is the k-turn connection: the k-th return of the critical orbit lands
/// on the stable branch of the other saddle. H_L follows the unstable branch of L (value
/// beta2 on Sigma_M), H_M that of M (beta1 on Sigma_L). nullopt once the orbit leaves the domain.
template <class Real>
std::optional<Real> connection_condition(const ModelMap<Real>& m, CurveTag c, int k) {
  if (c == CurveTag::H_M) {
    Real x = m.beta1;
    for (int j = 0; j < k; ++j) {
      auto n = m.eval(x);
      if (!n) return std::nullopt;
      x = *n;
    }
    return x;
  }
  if (k == 0) return m.beta2;
  auto x = m.to_L(m.beta2);
  if (!x) return std::nullopt;
  for (int j = 1; j < k; ++j) {
    x = m.eval(*x);
    if (!x) return std::nullopt;
  }
  return m.to_M(*x);
}

/// Homoclinic conditions: P_L is to_L(beta2) = 0 with beta2 >= 0, P_M is to_M(beta1) = 0.
template <class Real>
std::optional<Real> homoclinic_condition(const ModelMap<Real>& m, CurveTag loop) {
  return loop == CurveTag::P_L ? m.to_L(m.beta2) : m.to_M(m.beta1);
}

struct MapFixedPoint {
  double xi = 0.0;
  double derivative = 0.0;
};

/// Domain of P within [0, xi_max]; empty when lo > hi.
struct MapDomain {
  double lo = 0.0, hi = -1.0;
  bool empty() const { return lo > hi; }
};
MapDomain domain(const ModelMap<double>& m, double xi_max);

/// Fixed points from the closed-form structure: ln P' has at most one critical point,
/// so P'=1 has at most two roots and P(xi)-xi splits into at most three monotone pieces.
std::vector<MapFixedPoint> fixed_points(const ModelMap<double>& m, double xi_max);
/// Oracle: sign changes of P(xi)-xi on a dense mixed log/uniform sample of the domain.
int fixed_point_count_scan(const ModelMap<double>& m, double xi_max, int samples = 4000);

/// Counts on an n x n cell-centred grid over the family box, row-major with beta1 fastest.
std::vector<int> fixed_point_grid(const ModelMapFamily& fam, int n);
std::vector<int> fixed_point_grid_serial(const ModelMapFamily& fam, int n);
std::vector<int> fixed_point_grid_scan(const ModelMapFamily& fam, int n, int samples = 4000);

struct MapBifurcationSet {
  std::vector<BifurcationCurve> curves;
  std::vector<std::string> notes;  // untraced or truncated curves
};

/// P_L, P_M and F in closed parametric form; H^(0) are the coordinate axes; H^(k>=1)
/// (non-monodromic only) traced by continuation from flashing-series seeds.
MapBifurcationSet bifurcation_set(const ModelMapFamily& fam, int k_max = 5);

/// P(xi)-xi at each interior root of P'=1, in increasing xi. One of them is zero on F.
std::vector<double> fold_values(const ModelMap<double>& m, double xi_max);

struct MapFlashingZero {
  int k = 0;
  HighReal s;  // segment parameter in [0, 1]
  Vec2 beta;
};
struct MapFlashingSeries {
  HighReal s_acc;
  std::vector<MapFlashingZero> zeros;
  std::string truncation;
};

/// Zeros of the k-turn condition along beta = a + s (b - a), k = 0..k_max, each strictly
/// closer to the accumulation point (where the segment meets P_L, P_M or F) than the
/// previous. A chord that misses the H^(0) axis starts at k = 1. Computed in HighReal;
/// offsets are sampled down to 1e-230.
MapFlashingSeries flashing_series_map(const ModelMapFamily& fam, CurveTag series, CurveTag accumulate_on,
                                      Vec2 a, Vec2 b, int k_max);

}  // namespace hetbif
