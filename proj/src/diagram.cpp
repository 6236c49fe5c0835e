#include "hetbif/diagram.hpp"

#include "hetbif/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace hetbif {

ZeroFunction zero_function(const Scenario& s, CurveTag tag, int k) {
  if (tag == CurveTag::F) {
    return [&s](Vec2 p) -> std::optional<double> {
      try {
        return s.fold(p).g;
      } catch (const Error&) {
        return std::nullopt;
      }
    };
  }
  return [&s, tag, k](Vec2 p) -> std::optional<double> {
    GapEvaluation ev = s.gap(tag, k, p);
    if (!ev.ok()) return std::nullopt;
    return ev.result.gap;
  };
}

ResidualPair contour_residuals(const Scenario& s) {
  return [&s](Vec2 p) -> std::optional<std::array<double, 2>> {
    GapEvaluation a = s.gap(CurveTag::H_L, 0, p);
    if (!a.ok()) return std::nullopt;
    GapEvaluation b = s.gap(CurveTag::H_M, 0, p);
    if (!b.ok()) return std::nullopt;
    return std::array<double, 2>{a.result.gap, b.result.gap};
  };
}

namespace {

Vec2 half_widths(const Box& b) { return {0.5 * (b.xmax - b.xmin), 0.5 * (b.ymax - b.ymin)}; }

}  // namespace

Codim2Point find_codim2(const Scenario& s, Vec2 guess) {
  ResidualPair r = contour_residuals(s);
  Codim2Point c;
  c.location = newton_codim2(r, guess, half_widths(s.bounds));
  c.residuals = *r(c.location);
  BoundField f = s.field(c.location);
  SaddlePair sp = s.saddles(f);
  c.L = sp.L;
  c.M = sp.M;
  c.subcase = classify_subcase(sp.L, sp.M);
  return c;
}

double find_reversible_contour(const Scenario& s, double lo, double hi) {
  if (s.p2 >= 0) throw Error(ErrorKind::ConfigError, "reversible contour search needs a one-parameter scenario");
  auto f = [&s](double g) -> std::optional<double> {
    GapEvaluation ev = s.gap(CurveTag::H_L, 0, {g, 0.0});
    if (!ev.ok()) return std::nullopt;
    return ev.result.gap;
  };
  auto flo = f(lo), fhi = f(hi);
  if (!flo || !fhi || (*flo > 0) == (*fhi > 0))
    throw Error(ErrorKind::BracketError, "splitting does not change sign on [" + std::to_string(lo) + ", " +
                                             std::to_string(hi) + "]");
  return bracketed_root(f, lo, hi, 1e-13);
}

FlashingSeries scenario_flashing_series(const Scenario& s, CurveTag tag, CurveTag accumulate_on, Vec2 a, Vec2 b,
                                        int k_max) {
  ZeroFunction acc = zero_function(s, accumulate_on, 0);
  double s_acc;
  try {
    s_acc = bracketed_root([&](double t) { return acc(a + t * (b - a)); }, 0.0, 1.0, 1e-15);
  } catch (const Error&) {
    FlashingSeries fs;
    fs.truncation = std::string("segment does not cross ") + to_string(accumulate_on);
    return fs;
  }
  return flashing_series([&s, tag](int k) { return zero_function(s, tag, k); }, a, b, s_acc, k_max);
}

ContinuationOptions continuation_options(const Scenario& s, const std::vector<Vec2>& snap) {
  ContinuationOptions o;
  o.bounds = s.bounds;
  o.scale = half_widths(s.bounds);
  o.h_max = s.max_step / std::max(o.scale.x, o.scale.y);
  o.h_init = std::min(o.h_init, o.h_max);
  o.snap_points = snap;
  return o;
}

double polyline_distance(Vec2 p, const std::vector<Vec2>& poly) {
  double best = std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return norm(p - poly[0]);
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    Vec2 a = poly[i], d = poly[i + 1] - poly[i];
    double l2 = dot(d, d);
    double t = l2 > 0 ? std::clamp(dot(p - a, d) / l2, 0.0, 1.0) : 0.0;
    best = std::min(best, norm(p - (a + t * d)));
  }
  return best;
}

double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double h = 0.0;
  for (Vec2 p : a) h = std::max(h, polyline_distance(p, b));
  return h;
}

namespace {

bool covered(const Diagram& d, const std::string& tag, int k, Vec2 p, double tol) {
  for (const auto& c : d.curves)
    if (c.tag == tag && c.k == k && polyline_distance(p, c.points) < tol) return true;
  return false;
}

void trace_from(Diagram& d, const Scenario& s, CurveTag tag, int k, Vec2 seed, const std::vector<Vec2>& snap) {
  const std::string name = to_string(tag);
  double tol = 1e-3 * std::max(s.bounds.xmax - s.bounds.xmin, s.bounds.ymax - s.bounds.ymin);
  if (covered(d, name, k, seed, tol)) return;
  try {
    BifurcationCurve c = continue_curve(zero_function(s, tag, k), seed, continuation_options(s, snap));
    c.tag = name;
    c.k = k;
    d.curves.push_back(std::move(c));
  } catch (const Error& e) {
    d.failures.push_back({name, k, e.what()});
  }
}

}  // namespace

Diagram build_diagram(const Scenario& s, int k_max) {
  if (s.p2 < 0) throw Error(ErrorKind::ConfigError, "diagram needs a two-parameter scenario");
  Diagram d;
  d.scenario = s.name;
  d.p1_name = s.p1_name;
  d.p2_name = s.p2_name;
  d.bounds = s.bounds;

  for (Vec2 g : s.codim2_guesses) {
    try {
      d.codim2.push_back(find_codim2(s, g));
    } catch (const Error& e) {
      d.failures.push_back({"codim2", 0, e.what()});
    }
  }
  std::vector<Vec2> snap;
  for (const auto& c : d.codim2) snap.push_back(c.location);

  const Vec2 hw = half_widths(s.bounds);
  const double r = 0.02;
  for (const auto& c : d.codim2) {
    // H^(0) curves pass through the contour point; P curves end there.
    for (CurveTag tag : {CurveTag::H_L, CurveTag::H_M})
      for (Vec2 seed : seeds_on_circle(zero_function(s, tag, 0), c.location, {r * hw.x, r * hw.y}))
        trace_from(d, s, tag, 0, seed, {});
    for (CurveTag tag : {CurveTag::P_L, CurveTag::P_M})
      for (Vec2 seed : seeds_on_circle(zero_function(s, tag, 0), c.location, {r * hw.x, r * hw.y}))
        trace_from(d, s, tag, 0, seed, snap);
  }

  if (s.contour == ContourKind::NonMonodromic && k_max >= 1) {
    // Flashing curves accumulate on P_L (from M) and P_M (from L). Seed each k from a
    // chord across the accumulation curve next to every codim-2 point.
    std::map<CurveTag, std::string> truncations;
    for (const auto& c : d.codim2) {
      for (auto [acc, tag] : {std::pair{CurveTag::P_M, CurveTag::H_L}, std::pair{CurveTag::P_L, CurveTag::H_M}}) {
        auto crossing = seeds_on_circle(zero_function(s, acc, 0), c.location, {r * hw.x, r * hw.y});
        if (crossing.empty()) continue;
        Vec2 rel = crossing.front() - c.location;
        double th = std::atan2(rel.y / hw.y, rel.x / hw.x);
        const double span = 12.0 * std::numbers::pi / 180.0;
        auto at = [&](double t) { return c.location + Vec2{r * hw.x * std::cos(t), r * hw.y * std::sin(t)}; };
        FlashingSeries fs = scenario_flashing_series(s, tag, acc, at(th - span), at(th + span), k_max);
        if (fs.zeros.size() < static_cast<std::size_t>(k_max) + 1) truncations[tag] = fs.truncation;
        for (const auto& z : fs.zeros)
          if (z.k >= 1) trace_from(d, s, tag, z.k, z.point, snap);
      }
    }
    for (auto [tag, why] : truncations)
      for (int k = 1; k <= k_max; ++k) {
        bool have = std::any_of(d.curves.begin(), d.curves.end(),
                                [&](const BifurcationCurve& c) { return c.tag == to_string(tag) && c.k == k; });
        if (!have) d.failures.push_back({to_string(tag), k, why});
      }
  }

  for (const SeedSegment& seg : s.seeds) {
    try {
      Vec2 p = solve_on_segment(zero_function(s, seg.tag, seg.k), seg.a, seg.b);
      trace_from(d, s, seg.tag, seg.k, p, snap);
    } catch (const Error& e) {
      d.failures.push_back({to_string(seg.tag), seg.k, e.what()});
    }
  }
  return d;
}

}  // namespace hetbif
