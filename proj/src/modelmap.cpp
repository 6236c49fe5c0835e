#include "hetbif/modelmap.hpp"

#include "hetbif/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetbif {

const char* to_string(Orientation o) { return o == Orientation::Monodromic ? "monodromic" : "non-monodromic"; }

Orientation orientation_from_string(const std::string& s) {
  if (s == "monodromic" || s == "+") return Orientation::Monodromic;
  if (s == "non-monodromic" || s == "nonmonodromic" || s == "-") return Orientation::NonMonodromic;
  throw Error(ErrorKind::ParseError, "unknown orientation '" + s + "'");
}

void ModelMapFamily::validate() const {
  if (!(lambda > 0) || !(mu > 0) || !(theta1 > 0) || !(theta2 > 0) || !(xi_max > 0))
    throw Error(ErrorKind::ConfigError, "model map needs positive indices, thetas and xi_max");
  for (double v : {lambda, mu, lambda * mu})
    if (std::abs(v - 1.0) < 1e-10) throw Error(ErrorKind::Degenerate, "an index or their product equals 1");
}

namespace {

template <class Real>
struct Domain {
  Real lo, hi;
  bool empty() const { return lo > hi; }
};

template <class Real>
Domain<Real> domain_t(const ModelMap<Real>& m, const Real& xi_max) {
  using std::pow;
  if (m.orientation == Orientation::Monodromic) {
    Real lo = m.beta2 >= 0 ? Real(0) : Real(pow(-m.beta2 / m.theta1, 1 / m.lambda));
    return {lo, xi_max};
  }
  if (m.beta2 < 0) return {Real(1), Real(0)};
  Real hi = pow(m.beta2 / m.theta1, 1 / m.lambda);
  return {Real(0), hi < xi_max ? hi : xi_max};
}

// P(xi) - xi. At a domain end where the inner base vanishes, rounding can push the base
// just below zero; the limit there is P = beta1.
template <class Real>
Real g_t(const ModelMap<Real>& m, const Real& xi) {
  auto p = m.eval(xi);
  return p ? Real(*p - xi) : Real(m.beta1 - xi);
}

// ln P'(xi); +-inf at ends where xi or the inner base vanishes.
template <class Real>
Real h_t(const ModelMap<Real>& m, const Real& xi) {
  using std::log;
  Real eta = m.to_M(xi).value_or(Real(0));
  if (eta < 0) eta = 0;
  const Real inf = std::numeric_limits<Real>::infinity();
  Real c = log(m.theta1 * m.theta2 * m.lambda * m.mu);
  Real a = xi > 0 ? Real((m.lambda - 1) * log(xi)) : Real(m.lambda < 1 ? inf : -inf);
  Real b = eta > 0 ? Real((m.mu - 1) * log(eta)) : Real(m.mu < 1 ? inf : -inf);
  return c + a + b;
}

template <class Real, class F>
Real bisect(F f, Real a, Real b, int iters) {
  bool fa = f(a) > 0;
  for (int i = 0; i < iters; ++i) {
    Real mid = (a + b) / 2;
    if (mid <= a || mid >= b) break;
    if ((f(mid) > 0) == fa) a = mid;
    else b = mid;
  }
  return (a + b) / 2;
}

// Bisection to double accuracy (robust to infinite end values), then secant steps to
// the full precision of Real.
template <class Real, class F>
Real bisect_polish(F f, Real a, Real b) {
  Real fa = f(a);
  bool pa = fa > 0;
  for (int i = 0; i < 64; ++i) {
    Real mid = (a + b) / 2;
    if (mid <= a || mid >= b) break;
    Real fm = f(mid);
    if ((fm > 0) == pa) a = mid;
    else b = mid;
  }
  if constexpr (std::numeric_limits<Real>::digits <= std::numeric_limits<double>::digits) {
    return (a + b) / 2;
  } else {
    Real x0 = a, x1 = b, f0 = f(a), f1 = f(b);
    for (int i = 0; i < 40; ++i) {
      if (f1 == f0) break;
      Real x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
      if (!(x2 > a - (b - a)) || !(x2 < b + (b - a))) break;
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = f(x1);
      if (abs(x1 - x0) <= abs(x1) * std::numeric_limits<Real>::epsilon() * 4) break;
    }
    return x1;
  }
}

// Interior roots of P'=1, increasing.
template <class Real>
std::vector<Real> unit_slope_points(const ModelMap<Real>& m, const Domain<Real>& d) {
  using std::pow;
  std::vector<Real> knots{d.lo};
  Real q = -(m.lambda - 1) * m.beta2 / (m.sign() * m.theta1 * (m.lambda * m.mu - 1));
  if (q > 0) {
    Real xc = pow(q, 1 / m.lambda);
    if (xc > d.lo && xc < d.hi) knots.push_back(xc);
  }
  knots.push_back(d.hi);
  std::vector<Real> roots;
  auto h = [&](const Real& x) { return h_t(m, x); };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    Real ha = h(knots[i]), hb = h(knots[i + 1]);
    if ((ha > 0) != (hb > 0)) roots.push_back(bisect_polish(h, knots[i], knots[i + 1]));
  }
  return roots;
}

template <class Real>
std::vector<Real> fold_values_t(const ModelMap<Real>& m, const Real& xi_max) {
  Domain<Real> d = domain_t(m, xi_max);
  std::vector<Real> out;
  if (d.empty() || !(d.lo < d.hi)) return out;
  for (const Real& r : unit_slope_points(m, d)) out.push_back(g_t(m, r));
  return out;
}

}  // namespace

MapDomain domain(const ModelMap<double>& m, double xi_max) {
  auto d = domain_t(m, xi_max);
  return {d.lo, d.hi};
}

std::vector<double> fold_values(const ModelMap<double>& m, double xi_max) { return fold_values_t(m, xi_max); }

std::vector<MapFixedPoint> fixed_points(const ModelMap<double>& m, double xi_max) {
  Domain<double> d = domain_t(m, xi_max);
  std::vector<MapFixedPoint> out;
  if (d.empty() || !(d.lo < d.hi)) return out;
  std::vector<double> knots{d.lo};
  for (double r : unit_slope_points(m, d)) knots.push_back(r);
  knots.push_back(d.hi);
  auto g = [&](double x) { return g_t(m, x); };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if ((g(knots[i]) > 0) == (g(knots[i + 1]) > 0)) continue;
    double x = bisect(g, knots[i], knots[i + 1], 200);
    out.push_back({x, m.derivative(x).value_or(std::numeric_limits<double>::quiet_NaN())});
  }
  return out;
}

int fixed_point_count_scan(const ModelMap<double>& m, double xi_max, int samples) {
  Domain<double> d = domain_t(m, xi_max);
  if (d.empty() || !(d.lo < d.hi)) return 0;
  const double w = d.hi - d.lo;
  std::vector<double> xs{d.lo, d.hi};
  for (int i = 1; i < samples; ++i) {
    double t = static_cast<double>(i) / samples;
    xs.push_back(d.lo + w * t);
    double off = w * std::pow(10.0, -16.0 * (1.0 - t));
    xs.push_back(d.lo + off);
    xs.push_back(d.hi - off);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  int count = 0;
  bool prev = g_t(m, xs.front()) > 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < d.lo || xs[i] > d.hi) continue;
    bool cur = g_t(m, xs[i]) > 0;
    if (cur != prev) ++count;
    prev = cur;
  }
  return count;
}

namespace {

Vec2 cell_centre(const ModelMapFamily& fam, int n, int idx) {
  int i = idx % n, j = idx / n;
  return {fam.box.xmin + (i + 0.5) * (fam.box.xmax - fam.box.xmin) / n,
          fam.box.ymin + (j + 0.5) * (fam.box.ymax - fam.box.ymin) / n};
}

}  // namespace

std::vector<int> fixed_point_grid(const ModelMapFamily& fam, int n) {
  fam.validate();
  std::vector<int> out(static_cast<std::size_t>(n) * n);
  const int total = n * n;
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < total; ++idx)
    out[idx] = static_cast<int>(fixed_points(fam.at(cell_centre(fam, n, idx)), fam.xi_max).size());
  return out;
}

std::vector<int> fixed_point_grid_serial(const ModelMapFamily& fam, int n) {
  fam.validate();
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int idx = 0; idx < n * n; ++idx)
    out.push_back(static_cast<int>(fixed_points(fam.at(cell_centre(fam, n, idx)), fam.xi_max).size()));
  return out;
}

std::vector<int> fixed_point_grid_scan(const ModelMapFamily& fam, int n, int samples) {
  fam.validate();
  std::vector<int> out(static_cast<std::size_t>(n) * n);
  const int total = n * n;
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < total; ++idx)
    out[idx] = fixed_point_count_scan(fam.at(cell_centre(fam, n, idx)), fam.xi_max, samples);
  return out;
}

namespace {

// Sample a parametric curve, keep its runs inside the box and cut each run exactly at
// the box edge.
std::vector<std::vector<Vec2>> box_runs(const std::function<Vec2(double)>& c, double t0, double t1, int n,
                                        const Box& box, bool log_spacing) {
  auto t_at = [&](int i) {
    double u = static_cast<double>(i) / n;
    return log_spacing ? t0 * std::pow(t1 / t0, u) : t0 + (t1 - t0) * u;
  };
  auto inside = [&](double t) { return box.contains(c(t)); };
  std::vector<std::vector<Vec2>> runs;
  std::vector<Vec2> cur;
  for (int i = 0; i <= n; ++i) {
    double t = t_at(i);
    bool in = inside(t);
    if (in && cur.empty() && i > 0) {
      double te = bisect([&](double x) { return inside(x) ? 1.0 : -1.0; }, t, t_at(i - 1), 200);
      Vec2 p = c(te);
      if (!box.contains(p)) p = c(t);
      cur.push_back(p);
    }
    if (in) cur.push_back(c(t));
    if (!in && !cur.empty()) {
      double te = bisect([&](double x) { return inside(x) ? 1.0 : -1.0; }, t_at(i - 1), t, 200);
      Vec2 p = c(te);
      if (box.contains(p)) cur.push_back(p);
      runs.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (cur.size() > 1) runs.push_back(std::move(cur));
  return runs;
}

BifurcationCurve make_curve(const std::string& tag, int k, std::vector<Vec2> pts, const ZeroFunction& residual) {
  BifurcationCurve c;
  c.tag = tag;
  c.k = k;
  c.points = std::move(pts);
  for (Vec2 p : c.points) c.residuals.push_back(residual(p).value_or(std::numeric_limits<double>::quiet_NaN()));
  c.ends = {EndReason::Bounds, EndReason::Bounds};
  return c;
}

}  // namespace

MapBifurcationSet bifurcation_set(const ModelMapFamily& fam, int k_max) {
  fam.validate();
  MapBifurcationSet set;
  const Box& box = fam.box;
  const double s = fam.orientation == Orientation::Monodromic ? 1.0 : -1.0;
  const double origin_tol = 1e-15;

  auto homoclinic = [&](CurveTag t) -> ZeroFunction {
    return [&fam, t](Vec2 b) { return homoclinic_condition(fam.at(b), t); };
  };
  auto connection = [&](CurveTag t, int k) -> ZeroFunction {
    return [&fam, t, k](Vec2 b) { return connection_condition(fam.at(b), t, k); };
  };

  // P_L: beta1 = -s theta2 beta2^mu; P_M: beta2 = -s theta1 beta1^lambda.
  if (box.ymax > 0) {
    auto c = [&](double t) { return Vec2{-s * fam.theta2 * std::pow(t, fam.mu), t}; };
    for (auto& run : box_runs(c, origin_tol, box.ymax, 600, box, true)) {
      run.insert(run.begin(), Vec2{0.0, 0.0});
      set.curves.push_back(make_curve("P_L", 0, std::move(run), homoclinic(CurveTag::P_L)));
    }
  }
  if (box.xmax > 0) {
    auto c = [&](double t) { return Vec2{t, -s * fam.theta1 * std::pow(t, fam.lambda)}; };
    for (auto& run : box_runs(c, origin_tol, box.xmax, 600, box, true)) {
      run.insert(run.begin(), Vec2{0.0, 0.0});
      set.curves.push_back(make_curve("P_M", 0, std::move(run), homoclinic(CurveTag::P_M)));
    }
  }
  set.curves.push_back(
      make_curve("H_L", 0, {{box.xmin, 0.0}, {box.xmax, 0.0}}, connection(CurveTag::H_L, 0)));
  set.curves.push_back(
      make_curve("H_M", 0, {{0.0, box.ymin}, {0.0, box.ymax}}, connection(CurveTag::H_M, 0)));
  for (auto& c : set.curves)
    if (c.tag[0] == 'P') c.ends[0] = EndReason::Codim2;

  // F: P(xi) = xi and P'(xi) = 1 solved for beta at each xi.
  {
    const double lam = fam.lambda, mu = fam.mu;
    auto c = [&](double xi) {
      double eta = std::pow(fam.theta1 * fam.theta2 * lam * mu * std::pow(xi, lam - 1), -1.0 / (mu - 1));
      return Vec2{xi - s * fam.theta2 * std::pow(eta, mu), eta - s * fam.theta1 * std::pow(xi, lam)};
    };
    auto residual = [&fam](Vec2 b) -> std::optional<double> {
      auto v = fold_values(fam.at(b), fam.xi_max);
      if (v.empty()) return std::nullopt;
      double best = v.front();
      for (double x : v)
        if (std::abs(x) < std::abs(best)) best = x;
      return best;
    };
    for (auto& run : box_runs(c, 1e-14, fam.xi_max, 2000, box, true))
      if (run.size() > 1) set.curves.push_back(make_curve("F", 0, std::move(run), residual));
  }

  if (fam.orientation == Orientation::Monodromic || k_max < 1) return set;

  ContinuationOptions o;
  o.bounds = box;
  o.scale = {0.5 * (box.xmax - box.xmin), 0.5 * (box.ymax - box.ymin)};
  o.h_max = 5e-3;
  o.max_points = 800;
  o.residual_tol = 1e-10;
  o.corrector_tol = 1e-16;
  o.snap_points = {{0.0, 0.0}};
  const double cover = 1e-3 * std::max(box.xmax - box.xmin, box.ymax - box.ymin);
  auto covered = [&](const std::string& tag, int k, Vec2 p) {
    for (const auto& c : set.curves) {
      if (c.tag != tag || c.k != k) continue;
      for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
        Vec2 d = c.points[i + 1] - c.points[i];
        double l2 = dot(d, d);
        double t = l2 > 0 ? std::clamp(dot(p - c.points[i], d) / l2, 0.0, 1.0) : 0.0;
        if (norm(p - (c.points[i] + t * d)) < cover) return true;
      }
    }
    return false;
  };

  // Seeds: flashing series along a chord across each accumulation curve, at the middle of
  // its in-box part. The chord runs from the H^(0) axis to as far beyond the curve.
  std::vector<std::pair<CurveTag, Vec2>> anchors;
  for (const auto& c : set.curves) {
    if (c.tag == "H_L" || c.tag == "H_M" || c.points.size() < 3) continue;
    auto scaled = [&](Vec2 d) { return Vec2{d.x / (box.xmax - box.xmin), d.y / (box.ymax - box.ymin)}; };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i) total += norm(scaled(c.points[i + 1] - c.points[i]));
    double run = 0.0;
    std::size_t mid = 0;
    while (mid + 1 < c.points.size() && run < 0.5 * total) run += norm(scaled(c.points[mid + 1] - c.points[mid])), ++mid;
    anchors.push_back({curve_tag_from_string(c.tag), c.points[mid]});
  }
  for (auto [acc, p] : anchors) {
    const bool horizontal = std::abs(p.x) / (box.xmax - box.xmin) < std::abs(p.y) / (box.ymax - box.ymin);
    Vec2 a = horizontal ? Vec2{-0.5 * p.x, p.y} : Vec2{p.x, -0.5 * p.y};
    Vec2 b = horizontal ? Vec2{1.5 * p.x, p.y} : Vec2{p.x, 1.5 * p.y};
    for (CurveTag tag : {CurveTag::H_L, CurveTag::H_M}) {
      MapFlashingSeries fs = flashing_series_map(fam, tag, acc, a, b, k_max);
      const std::string name = to_string(tag);
      for (const auto& z : fs.zeros) {
        if (z.k < 1 || covered(name, z.k, z.beta)) continue;
        ZeroFunction f = connection(tag, z.k);
        auto fz = f(z.beta);
        if (!fz || std::abs(*fz) > o.residual_tol) {
          set.notes.push_back(name + "^(" + std::to_string(z.k) + ") near " + to_string(acc) +
                              ": zero lies below double resolution, not traced");
          continue;
        }
        try {
          BifurcationCurve c = continue_curve(f, z.beta, o);
          c.tag = name;
          c.k = z.k;
          set.curves.push_back(std::move(c));
        } catch (const Error& e) {
          set.notes.push_back(name + "^(" + std::to_string(z.k) + "): " + e.what());
        }
      }
    }
  }
  return set;
}

namespace {

using boost::math::tools::eps_tolerance;

std::optional<HighReal> accumulation_condition(const ModelMap<HighReal>& m, CurveTag on, const HighReal& xi_max,
                                               int fold_index) {
  if (on == CurveTag::P_L || on == CurveTag::P_M) return homoclinic_condition(m, on);
  auto v = fold_values_t(m, xi_max);
  if (fold_index < 0 || fold_index >= static_cast<int>(v.size())) return std::nullopt;
  return v[fold_index];
}

HighReal refine(const std::function<std::optional<HighReal>(const HighReal&)>& f, HighReal a, HighReal b) {
  auto g = [&](const HighReal& x) {
    auto v = f(x);
    if (!v) throw Error(ErrorKind::BracketError, "condition undefined inside the bracket");
    return *v;
  };
  std::uintmax_t iters = 400;
  auto r = boost::math::tools::toms748_solve(g, a, b, eps_tolerance<HighReal>(std::numeric_limits<HighReal>::digits - 8),
                                             iters);
  return (r.first + r.second) / 2;
}

}  // namespace

MapFlashingSeries flashing_series_map(const ModelMapFamily& fam, CurveTag series, CurveTag accumulate_on, Vec2 a,
                                      Vec2 b, int k_max) {
  fam.validate();
  if (fam.orientation != Orientation::NonMonodromic)
    throw Error(ErrorKind::ConfigError, "flashing series need the non-monodromic map");
  if (series != CurveTag::H_L && series != CurveTag::H_M)
    throw Error(ErrorKind::ConfigError, "flashing series are H_L or H_M");
  const HighReal ax = a.x, ay = a.y, dx = HighReal(b.x) - ax, dy = HighReal(b.y) - ay;
  const HighReal xi_max = fam.xi_max;
  auto map_at = [&](const HighReal& s) {
    ModelMap<HighReal> m = fam.at<HighReal>({0.0, 0.0});
    m.beta1 = ax + s * dx;
    m.beta2 = ay + s * dy;
    return m;
  };

  MapFlashingSeries out;
  // For F, follow the fold value that changes sign along the segment.
  int fold_index = -1;
  if (accumulate_on == CurveTag::F) {
    auto va = fold_values_t(map_at(HighReal(0)), xi_max), vb = fold_values_t(map_at(HighReal(1)), xi_max);
    for (std::size_t i = 0; i < std::min(va.size(), vb.size()); ++i)
      if ((va[i] > 0) != (vb[i] > 0)) fold_index = static_cast<int>(i);
  }
  auto acc = [&](const HighReal& s) { return accumulation_condition(map_at(s), accumulate_on, xi_max, fold_index); };
  // The homoclinic conditions are undefined on part of the plane; bracket between defined samples.
  const int coarse = 256;
  std::optional<std::pair<HighReal, HighReal>> bracket;
  std::optional<HighReal> prev_v;
  HighReal prev_s = 0;
  for (int i = 0; i <= coarse && !bracket; ++i) {
    HighReal s = HighReal(i) / coarse;
    auto v = acc(s);
    if (v && prev_v && (*v > 0) != (*prev_v > 0)) bracket = std::pair{prev_s, s};
    prev_v = v;
    prev_s = s;
  }
  if (!bracket) {
    out.truncation = std::string("segment does not cross ") + to_string(accumulate_on);
    return out;
  }
  try {
    out.s_acc = refine(acc, bracket->first, bracket->second);
  } catch (const Error& e) {
    out.truncation = e.what();
    return out;
  }

  // Offsets from s_acc down to 1e-230 on both sides.
  std::vector<HighReal> ss{HighReal(0), HighReal(1)};
  const HighReal far = out.s_acc > HighReal(0.5) ? out.s_acc : HighReal(1) - out.s_acc;
  // Homoclinic accumulation is doubly exponential; accumulation on F is algebraic and
  // needs dense sampling over few decades.
  const bool on_fold = accumulate_on == CurveTag::F;
  const int per_decade = on_fold ? 40 : 2, decades = on_fold ? 20 : 230;
  for (int i = 0; i <= per_decade * decades; ++i) {
    HighReal d = far * pow(HighReal(10), -HighReal(i) / per_decade);
    if (out.s_acc - d > 0) ss.push_back(out.s_acc - d);
    if (out.s_acc + d < 1) ss.push_back(out.s_acc + d);
  }
  for (int i = 1; i < 64; ++i) ss.push_back(HighReal(i) / 64);
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());

  std::optional<HighReal> prev;
  for (int k = 0; k <= k_max; ++k) {
    auto f = [&](const HighReal& s) { return connection_condition(map_at(s), series, k); };
    // Only the stretch between the previous zero and the accumulation point matters.
    std::vector<std::optional<HighReal>> v;
    v.reserve(ss.size());
    for (const auto& s : ss) {
      bool inside = !prev || (s - out.s_acc) * (*prev - out.s_acc) >= 0;
      v.push_back(inside ? f(s) : std::nullopt);
    }
    std::optional<HighReal> best;
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
      if (!v[i] || !v[i + 1] || (*v[i] > 0) == (*v[i + 1] > 0)) continue;
      HighReal r;
      try {
        r = refine(f, ss[i], ss[i + 1]);
      } catch (const Error&) {
        continue;
      }
      auto fr = f(r);
      HighReal scale = abs(*v[i]) > abs(*v[i + 1]) ? abs(*v[i]) : abs(*v[i + 1]);
      if (!fr || abs(*fr) > scale * HighReal(1e-6)) continue;  // a jump, not a zero
      HighReal dist = abs(r - out.s_acc);
      if (prev && dist >= abs(*prev - out.s_acc)) continue;
      if (!best || dist < abs(*best - out.s_acc)) best = r;
    }
    if (!best && k == 0) continue;  // a chord need not cross the H^(0) axis
    if (!best) {
      out.truncation = "no zero for k=" + std::to_string(k) + " between the previous zero and the accumulation point";
      break;
    }
    out.zeros.push_back({k, *best, {static_cast<double>(ax + *best * dx), static_cast<double>(ay + *best * dy)}});
    prev = best;
  }
  return out;
}

}  // namespace hetbif
