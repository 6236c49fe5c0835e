#include "hetbif/cycles.hpp"

#include "hetbif/error.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetbif {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool break_between(const std::vector<double>& breaks, double a, double b) {
  for (double x : breaks)
    if (x >= a && x <= b) return true;
  return false;
}

double multiplier_at(const BoundField& field, const CrossSection& section, double x, double lo, double hi,
                     const CycleOptions& opts) {
  double h = std::min({opts.fd_step, 0.05 * (x - lo), 0.05 * (hi - x)});
  h = std::max(h, 1e-15 * std::max(1.0, std::abs(x)));
  // Central differences at h and h/2, Richardson-combined: near a separatrix the
  // displacement curves on the scale of x - lo and the plain O(h^2) bias is visible.
  auto central = [&](double s) {
    return (displacement(field, section, x + s, opts) - displacement(field, section, x - s, opts)) / (2.0 * s);
  };
  return 1.0 + (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::SemiStable: return "SemiStable";
  }
  return "?";
}

Stability stability_of(double m) {
  if (m < 1.0 - kSemiStableBand) return Stability::Stable;
  if (m > 1.0 + kSemiStableBand) return Stability::Unstable;
  return Stability::SemiStable;
}

double displacement(const BoundField& field, const CrossSection& section, double coord, const CycleOptions& opts) {
  try {
    ReturnResult r = poincare_map(field, section, coord, opts.max_time, opts.tol);
    if (!section.in_extent(r.coordinate)) return kNaN;
    return r.coordinate - coord;
  } catch (const Error&) {
    return kNaN;
  }
}

std::vector<double> displacement_samples(const BoundField& field, const CrossSection& section,
                                         const std::vector<double>& coords, const CycleOptions& opts) {
  std::vector<double> out(coords.size());
  const long n = static_cast<long>(coords.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out[i] = displacement(field, section, coords[i], opts);
  return out;
}

std::vector<double> displacement_samples_serial(const BoundField& field, const CrossSection& section,
                                                const std::vector<double>& coords, const CycleOptions& opts) {
  std::vector<double> out;
  out.reserve(coords.size());
  for (double c : coords) out.push_back(displacement(field, section, c, opts));
  return out;
}

LimitCycle find_cycle(const BoundField& field, const CrossSection& section, double lo, double hi,
                      const CycleOptions& opts) {
  if (!(lo < hi)) throw Error(ErrorKind::ConfigError, "empty bracket");
  auto g = [&](double x) {
    double v = displacement(field, section, x, opts);
    if (std::isnan(v)) throw Error(ErrorKind::NoCycleInBracket, "return map undefined inside the bracket");
    return v;
  };
  double glo = displacement(field, section, lo, opts);
  double ghi = displacement(field, section, hi, opts);
  if (std::isnan(glo) || std::isnan(ghi) || (glo > 0) == (ghi > 0))
    throw Error(ErrorKind::NoCycleInBracket, "P(x) - x has no sign change on the bracket");

  double x;
  if (glo == 0.0) {
    x = lo;
  } else if (ghi == 0.0) {
    x = hi;
  } else {
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(50),
                                               iters);
    double gl = g(r.first), gh = g(r.second);
    x = std::abs(gl) <= std::abs(gh) ? r.first : r.second;
  }

  LimitCycle c;
  c.section = section;
  c.coordinate = x;
  c.period = poincare_map(field, section, x, opts.max_time, opts.tol).time;
  c.multiplier = multiplier_at(field, section, x, lo, hi, opts);
  c.stability = stability_of(c.multiplier);
  return c;
}

std::vector<double> cycle_grid(const CrossSection& section, const std::vector<double>& breaks, int per_decade,
                               double min_offset, int uniform) {
  if (!std::isfinite(section.coord_min) || !std::isfinite(section.coord_max))
    throw Error(ErrorKind::ConfigError, "cycle sections need a finite extent");
  std::vector<double> out;
  for (int i = 0; i < uniform; ++i)
    out.push_back(section.coord_min + (section.coord_max - section.coord_min) * (i + 0.5) / uniform);
  for (double b : breaks) {
    if (!section.in_extent(b)) continue;
    for (int k = 0;; ++k) {
      double x = b + min_offset * std::pow(10.0, static_cast<double>(k) / per_decade);
      if (x > section.coord_max) break;
      out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<LimitCycle> count_cycles(const BoundField& field, const CrossSection& section,
                                     const std::vector<double>& coords, const std::vector<double>& breaks,
                                     const CycleOptions& opts) {
  std::vector<double> g = displacement_samples(field, section, coords, opts);
  std::vector<LimitCycle> out;
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) {
    if (std::isnan(g[i]) || std::isnan(g[i + 1])) continue;
    if ((g[i] > 0) == (g[i + 1] > 0)) continue;
    if (break_between(breaks, coords[i], coords[i + 1])) continue;
    try {
      out.push_back(find_cycle(field, section, coords[i], coords[i + 1], opts));
    } catch (const Error&) {
      // a NaN pocket inside the bracket; the sign change is not a cycle
    }
  }
  return out;
}

FoldExtremum fold_extremum(const BoundField& field, const CrossSection& section, double lo, double hi, int s,
                           const CycleOptions& opts) {
  if (!(lo < hi)) throw Error(ErrorKind::ConfigError, "empty bracket");
  const double dmin = 1e-13 * std::max(1.0, std::abs(lo));
  const double umin = std::log(dmin), umax = std::log(hi - lo);
  const int n = 40;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + std::exp(umin + (umax - umin) * i / (n - 1));
  std::vector<double> gs = displacement_samples(field, section, xs, opts);

  FoldExtremum fe;
  int best = -1;
  double prev = kNaN;
  for (int i = 0; i < n; ++i) {
    if (std::isnan(gs[i])) continue;
    if (!std::isnan(prev) && (prev > 0) != (gs[i] > 0)) ++fe.roots;
    prev = gs[i];
    if (best < 0 || s * gs[i] > s * gs[best]) best = i;
  }
  if (best < 0) throw Error(ErrorKind::FoldBracketError, "return map undefined on the whole bracket");

  auto neg = [&](double u) {
    double v = displacement(field, section, lo + std::exp(u), opts);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -s * v;
  };
  double ua = umin + (umax - umin) * std::max(best - 1, 0) / (n - 1);
  double ub = umin + (umax - umin) * std::min(best + 1, n - 1) / (n - 1);
  std::uintmax_t iters = 60;
  auto r = boost::math::tools::brent_find_minima(neg, ua, ub, 30, iters);
  double x = lo + std::exp(r.first);
  double gx = -s * r.second;
  if (s * gs[best] > s * gx) {
    x = xs[best];
    gx = gs[best];
  }
  // The top is flat to ~1e-15 in g, where integration noise at the default tolerance
  // lives. Polish with Newton steps on dg/du at a tight tolerance, Richardson-combined
  // central differences in u = log(x - lo).
  CycleOptions tight = opts;
  tight.tol = {std::min(opts.tol.abs, 1e-13), std::min(opts.tol.rel, 1e-13)};
  auto gu = [&](double u) { return displacement(field, section, lo + std::exp(u), tight); };
  auto slope = [&](double u, double h) { return (gu(u + h) - gu(u - h)) / (2.0 * h); };
  const double h = 0.05;
  double u = std::log(x - lo);
  double d1 = (4.0 * slope(u, 0.5 * h) - slope(u, h)) / 3.0;
  for (int it = 0; it < 3 && std::isfinite(d1); ++it) {
    double d2 = (gu(u + h) - 2.0 * gu(u) + gu(u - h)) / (h * h);
    if (!std::isfinite(d2) || s * d2 >= 0.0) break;
    u += std::clamp(-d1 / d2, -h, h);
    d1 = (4.0 * slope(u, 0.5 * h) - slope(u, h)) / 3.0;
  }
  x = lo + std::exp(u);
  fe.coordinate = x;
  fe.g = gu(u);
  fe.dg = d1 / (x - lo);
  return fe;
}

std::pair<double, double> fold_condition(const BoundField& field, const CrossSection& section, double lo, double hi,
                                         int s, const CycleOptions& opts) {
  FoldExtremum fe = fold_extremum(field, section, lo, hi, s, opts);
  if (fe.roots > 2) throw Error(ErrorKind::FoldBracketError, "more than two fixed points in the bracket");
  if (fe.roots == 0 && std::abs(fe.g) > 1e-6)
    throw Error(ErrorKind::FoldBracketError, "no fixed point in the bracket");
  return {fe.g, fe.dg};
}

}  // namespace hetbif
