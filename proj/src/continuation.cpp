#include "hetbif/continuation.hpp"

#include "hetbif/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hetbif {

const char* to_string(EndReason r) {
  switch (r) {
    case EndReason::Bounds: return "Bounds";
    case EndReason::Codim2: return "Codim2";
    case EndReason::Stall: return "Stall";
    case EndReason::Closed: return "Closed";
    case EndReason::MaxPoints: return "MaxPoints";
    case EndReason::Start: return "Start";
  }
  return "?";
}

const char* to_string(CurveTag t) {
  switch (t) {
    case CurveTag::P_L: return "P_L";
    case CurveTag::P_M: return "P_M";
    case CurveTag::F: return "F";
    case CurveTag::H_L: return "H_L";
    case CurveTag::H_M: return "H_M";
  }
  return "?";
}

CurveTag curve_tag_from_string(const std::string& s) {
  for (CurveTag t : {CurveTag::P_L, CurveTag::P_M, CurveTag::F, CurveTag::H_L, CurveTag::H_M})
    if (s == to_string(t)) return t;
  throw Error(ErrorKind::ParseError, "unknown curve tag '" + s + "'");
}

double bracketed_root(const std::function<std::optional<double>(double)>& f, double a, double b, double tol) {
  auto fa = f(a), fb = f(b);
  if (!fa || !fb) throw Error(ErrorKind::BracketError, "function undefined at a bracket end");
  if (*fa == 0.0) return a;
  if (*fb == 0.0) return b;
  if ((*fa > 0) == (*fb > 0)) throw Error(ErrorKind::BracketError, "no sign change on the bracket");
  auto g = [&](double x) {
    auto v = f(x);
    if (!v) throw Error(ErrorKind::BracketError, "function undefined inside the bracket");
    return *v;
  };
  std::uintmax_t iters = 200;
  auto stop = [&](double x0, double x1) { return std::abs(x1 - x0) <= tol * std::max(1.0, std::abs(x0)); };
  auto r = boost::math::tools::toms748_solve(g, a, b, *fa, *fb, stop, iters);
  double gl = g(r.first), gr = g(r.second);
  return std::abs(gl) <= std::abs(gr) ? r.first : r.second;
}

Vec2 solve_on_segment(const ZeroFunction& f, Vec2 a, Vec2 b, double tol) {
  double s = bracketed_root([&](double t) { return f(a + t * (b - a)); }, 0.0, 1.0, tol);
  return a + s * (b - a);
}

std::vector<std::optional<double>> sample_points(const ZeroFunction& f, const std::vector<Vec2>& pts) {
  std::vector<std::optional<double>> out(pts.size());
  const long n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out[i] = f(pts[i]);
  return out;
}

std::vector<std::optional<double>> sample_points_serial(const ZeroFunction& f, const std::vector<Vec2>& pts) {
  std::vector<std::optional<double>> out;
  out.reserve(pts.size());
  for (Vec2 p : pts) out.push_back(f(p));
  return out;
}

namespace {

// Everything below works in scaled coordinates z = p / scale.
struct Scaled {
  const ZeroFunction& f;
  Vec2 scale;
  Vec2 to_p(Vec2 z) const { return {z.x * scale.x, z.y * scale.y}; }
  Vec2 to_z(Vec2 p) const { return {p.x / scale.x, p.y / scale.y}; }
  std::optional<double> operator()(Vec2 z) const { return f(to_p(z)); }
};

std::optional<Vec2> gradient(const Scaled& F, Vec2 z, double f0) {
  const double h = 1e-7;
  Vec2 g;
  for (int i = 0; i < 2; ++i) {
    Vec2 e = i == 0 ? Vec2{h, 0.0} : Vec2{0.0, h};
    auto fp = F(z + e), fm = F(z - e);
    double d;
    if (fp && fm) d = (*fp - *fm) / (2 * h);
    else if (fp) d = (*fp - f0) / h;
    else if (fm) d = (f0 - *fm) / h;
    else return std::nullopt;
    (i == 0 ? g.x : g.y) = d;
  }
  if (!is_finite(g) || norm(g) == 0.0) return std::nullopt;
  return g;
}

struct Corrected {
  Vec2 z;
  double residual;
};

// Secant along the line z0 + s*n, staying within reach of z0.
std::optional<Corrected> correct(const Scaled& F, Vec2 z0, Vec2 n, double slope, double reach, double ftol,
                                 double accept) {
  auto f0 = F(z0);
  if (!f0) return std::nullopt;
  double s0 = 0.0, v0 = *f0;
  if (std::abs(v0) <= ftol) return Corrected{z0, v0};
  double s1 = -v0 / slope;
  for (int it = 0; it < 40; ++it) {
    if (!std::isfinite(s1) || std::abs(s1) > reach) return std::nullopt;
    auto f1 = F(z0 + s1 * n);
    if (!f1) return std::nullopt;
    double v1 = *f1;
    if (std::abs(v1) <= ftol || std::abs(s1 - s0) <= 1e-15 * (1.0 + std::abs(s1))) {
      if (std::abs(v1) > accept) return std::nullopt;
      return Corrected{z0 + s1 * n, v1};
    }
    double denom = v1 - v0;
    if (denom == 0.0) return std::nullopt;
    double s2 = s1 - v1 * (s1 - s0) / denom;
    s0 = s1;
    v0 = v1;
    s1 = s2;
  }
  return std::nullopt;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 d = b - a;
  double l2 = dot(d, d);
  double t = l2 > 0 ? std::clamp(dot(p - a, d) / l2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * d));
}

// Clip the step zi -> zo at the box boundary and slide onto the curve along the edge.
std::optional<Corrected> clip(const Scaled& F, const Box& zbox, Vec2 zi, Vec2 zo, double ftol, double accept,
                              double reach) {
  double tbest = 1.0;
  int face = -1;
  const double lo[2] = {zbox.xmin, zbox.ymin}, hi[2] = {zbox.xmax, zbox.ymax};
  const double a[2] = {zi.x, zi.y}, b[2] = {zo.x, zo.y};
  for (int i = 0; i < 2; ++i) {
    for (double wall : {lo[i], hi[i]}) {
      if ((b[i] - wall) * (a[i] - wall) >= 0 || b[i] == a[i]) continue;
      double t = (wall - a[i]) / (b[i] - a[i]);
      if (t < tbest) {
        tbest = t;
        face = i;
      }
    }
  }
  if (face < 0) return std::nullopt;
  Vec2 e = zi + tbest * (zo - zi);
  Vec2 along = face == 0 ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
  auto fe = F(e);
  if (!fe) return std::nullopt;
  auto g = gradient(F, e, *fe);
  if (!g) return std::nullopt;
  double slope = dot(*g, along);
  if (std::abs(slope) < 1e-14) return std::nullopt;
  auto c = correct(F, e, along, slope, reach, ftol, accept);
  if (!c) return std::nullopt;
  return c;
}

struct Branch {
  std::vector<Vec2> z;
  std::vector<double> r;
  EndReason end = EndReason::MaxPoints;
};

Branch trace(const Scaled& F, Vec2 z0, Vec2 t0, const ContinuationOptions& o, const Box& zbox,
             const std::vector<Vec2>& zsnap) {
  Branch br;
  Vec2 z = z0, t = t0;
  Vec2 g;
  {
    auto f0 = F(z0);
    auto gg = gradient(F, z0, f0.value_or(0.0));
    g = *gg;
  }
  double h = o.h_init;
  int budget = o.max_points;
  while (budget-- > 0) {
    Vec2 n = normalized(g);
    Vec2 zp = z + h * t;
    auto c = correct(F, zp, n, norm(g), 0.5 * h + 1e-9, o.corrector_tol, o.residual_tol);
    std::optional<Vec2> gnew;
    if (c) {
      Vec2 step = c->z - z;
      if (norm(step) > 2.0 * h || dot(normalized(step), t) < 0.7) c.reset();
    }
    if (c) {
      gnew = gradient(F, c->z, c->residual);
      if (gnew && std::abs(dot(normalized(*gnew), n)) < 0.7) gnew.reset();  // tangent swung too far
    }
    if (!c || !gnew) {
      h *= 0.5;
      if (h < o.h_min) {
        br.end = EndReason::Stall;
        for (Vec2 s : zsnap)
          if (norm(z - s) < 3.0 * o.snap_radius) {
            br.z.push_back(s);
            br.r.push_back(0.0);
            br.end = EndReason::Codim2;
            break;
          }
        return br;
      }
      continue;
    }
    Vec2 zn = c->z;
    for (Vec2 s : zsnap)
      if (segment_distance(s, z, zn) < o.snap_radius) {
        br.z.push_back(s);
        br.r.push_back(0.0);
        br.end = EndReason::Codim2;
        return br;
      }
    if (!zbox.contains(zn)) {
      auto cl = clip(F, zbox, z, zn, o.corrector_tol, o.residual_tol, 2.0 * h);
      if (cl && zbox.contains({std::clamp(cl->z.x, zbox.xmin, zbox.xmax), std::clamp(cl->z.y, zbox.ymin, zbox.ymax)})) {
        Vec2 q = cl->z;
        // snap the edge coordinate exactly onto the wall
        if (std::abs(q.x - zbox.xmin) < 1e-9) q.x = zbox.xmin;
        if (std::abs(q.x - zbox.xmax) < 1e-9) q.x = zbox.xmax;
        if (std::abs(q.y - zbox.ymin) < 1e-9) q.y = zbox.ymin;
        if (std::abs(q.y - zbox.ymax) < 1e-9) q.y = zbox.ymax;
        br.z.push_back(q);
        br.r.push_back(cl->residual);
      }
      br.end = EndReason::Bounds;
      return br;
    }
    if (br.z.size() >= 10 && norm(zn - z0) < h) {
      br.end = EndReason::Closed;
      return br;
    }
    Vec2 tn = perp(normalized(*gnew));
    if (dot(tn, t) < 0) tn = -1.0 * tn;
    br.z.push_back(zn);
    br.r.push_back(c->residual);
    z = zn;
    t = tn;
    g = *gnew;
    h = std::min(1.3 * h, o.h_max);
  }
  br.end = EndReason::MaxPoints;
  return br;
}

}  // namespace

BifurcationCurve continue_curve(const ZeroFunction& f, Vec2 start, const ContinuationOptions& o) {
  Scaled F{f, o.scale};
  Box zbox{o.bounds.xmin / o.scale.x, o.bounds.xmax / o.scale.x, o.bounds.ymin / o.scale.y, o.bounds.ymax / o.scale.y};
  std::vector<Vec2> zsnap;
  for (Vec2 s : o.snap_points) zsnap.push_back(F.to_z(s));

  Vec2 z0 = F.to_z(start);
  auto f0 = F(z0);
  if (!f0) throw Error(ErrorKind::CurveStall, "zero function undefined at the start point");
  auto g0 = gradient(F, z0, *f0);
  if (!g0) throw Error(ErrorKind::CurveStall, "no usable gradient at the start point");
  auto c0 = correct(F, z0, normalized(*g0), norm(*g0), 10.0 * o.h_init, o.corrector_tol, o.residual_tol);
  if (!c0) throw Error(ErrorKind::CurveStall, "start point does not correct onto the zero set");
  z0 = c0->z;
  auto g = gradient(F, z0, c0->residual);
  if (!g) throw Error(ErrorKind::CurveStall, "no usable gradient at the corrected start");
  Vec2 t = perp(normalized(*g));

  Branch fwd = trace(F, z0, t, o, zbox, zsnap);
  Branch bwd;
  if (o.both_directions) bwd = trace(F, z0, -1.0 * t, o, zbox, zsnap);

  BifurcationCurve c;
  for (std::size_t i = bwd.z.size(); i-- > 0;) {
    c.points.push_back(F.to_p(bwd.z[i]));
    c.residuals.push_back(bwd.r[i]);
  }
  c.points.push_back(F.to_p(z0));
  c.residuals.push_back(c0->residual);
  for (std::size_t i = 0; i < fwd.z.size(); ++i) {
    c.points.push_back(F.to_p(fwd.z[i]));
    c.residuals.push_back(fwd.r[i]);
  }
  c.ends = {o.both_directions ? bwd.end : EndReason::Start, fwd.end};
  return c;
}

std::vector<Vec2> seeds_on_circle(const ZeroFunction& f, Vec2 center, Vec2 radius, int samples) {
  auto at = [&](double th) { return center + Vec2{radius.x * std::cos(th), radius.y * std::sin(th)}; };
  std::vector<Vec2> pts;
  for (int i = 0; i < samples; ++i) pts.push_back(at(2 * std::numbers::pi * i / samples));
  auto v = sample_points(f, pts);
  std::vector<Vec2> out;
  for (int i = 0; i < samples; ++i) {
    int j = (i + 1) % samples;
    if (!v[i] || !v[j] || (*v[i] > 0) == (*v[j] > 0)) continue;
    double a = 2 * std::numbers::pi * i / samples, b = a + 2 * std::numbers::pi / samples;
    try {
      double th = bracketed_root([&](double x) { return f(at(x)); }, a, b, 1e-13);
      auto fr = f(at(th));
      // A jump across a discontinuity also changes sign; a zero is small against its ends.
      if (fr && std::abs(*fr) <= 1e-3 * std::max(std::abs(*v[i]), std::abs(*v[j]))) out.push_back(at(th));
    } catch (const Error&) {
    }
  }
  return out;
}

Vec2 newton_codim2(const ResidualPair& r, Vec2 guess, Vec2 scale, double tol) {
  auto R = [&](Vec2 z) { return r({z.x * scale.x, z.y * scale.y}); };
  Vec2 z{guess.x / scale.x, guess.y / scale.y};
  auto rz = R(z);
  if (!rz) throw Error(ErrorKind::NoConvergence, "residuals undefined at the guess");
  auto nrm = [](const std::array<double, 2>& a) { return std::hypot(a[0], a[1]); };
  for (int it = 0; it < 60; ++it) {
    if (nrm(*rz) <= tol) break;
    const double h = 1e-7;
    auto rx = R(z + Vec2{h, 0.0}), ry = R(z + Vec2{0.0, h});
    if (!rx || !ry) throw Error(ErrorKind::NoConvergence, "residuals undefined next to the iterate");
    Mat2 J{((*rx)[0] - (*rz)[0]) / h, ((*ry)[0] - (*rz)[0]) / h, ((*rx)[1] - (*rz)[1]) / h,
           ((*ry)[1] - (*rz)[1]) / h};
    double scaleJ = std::max({std::abs(J.a), std::abs(J.b), std::abs(J.c), std::abs(J.d)});
    if (std::abs(J.det()) <= 1e-12 * scaleJ * scaleJ) throw Error(ErrorKind::Degenerate, "singular residual Jacobian");
    Vec2 dz{-(J.d * (*rz)[0] - J.b * (*rz)[1]) / J.det(), -(-J.c * (*rz)[0] + J.a * (*rz)[1]) / J.det()};
    double lam = 1.0;
    bool moved = false;
    for (int k = 0; k < 20; ++k, lam *= 0.5) {
      auto rn = R(z + lam * dz);
      if (rn && nrm(*rn) < nrm(*rz)) {
        z = z + lam * dz;
        rz = rn;
        moved = true;
        break;
      }
    }
    if (!moved) {
      if (norm(dz) <= 1e-10) break;
      throw Error(ErrorKind::NoConvergence, "codim-2 Newton stagnated");
    }
    if (norm(lam * dz) <= 1e-14) break;
  }
  if (nrm(*rz) > 1e-7) throw Error(ErrorKind::NoConvergence, "codim-2 residuals did not converge");
  return {z.x * scale.x, z.y * scale.y};
}

FlashingSeries flashing_series(const std::function<ZeroFunction(int)>& gap_k, Vec2 a, Vec2 b, double s_acc, int k_max,
                               int samples) {
  // Log-spaced offsets from the accumulation point, both sides.
  std::vector<double> ss;
  const double far = std::max(s_acc, 1.0 - s_acc);
  const int half = samples / 2;
  for (int i = 0; i < half; ++i) {
    double d = far * std::pow(1e-9, 1.0 - static_cast<double>(i) / (half - 1));
    if (s_acc - d >= 0.0) ss.push_back(s_acc - d);
    if (s_acc + d <= 1.0) ss.push_back(s_acc + d);
  }
  ss.push_back(0.0);
  ss.push_back(1.0);
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
  std::vector<Vec2> pts;
  for (double s : ss) pts.push_back(a + s * (b - a));

  FlashingSeries out;
  std::optional<double> prev_s;
  for (int k = 0; k <= k_max; ++k) {
    ZeroFunction f = gap_k(k);
    auto v = sample_points(f, pts);
    // Zero closest to the accumulation point, on the far side of the previous one.
    std::optional<double> best;
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
      if (!v[i] || !v[i + 1] || (*v[i] > 0) == (*v[i + 1] > 0)) continue;
      double s;
      try {
        s = bracketed_root([&](double x) { return f(a + x * (b - a)); }, ss[i], ss[i + 1], 1e-15);
      } catch (const Error&) {
        continue;
      }
      auto fr = f(a + s * (b - a));
      if (!fr || std::abs(*fr) > 1e-3 * std::max(std::abs(*v[i]), std::abs(*v[i + 1])) + 1e-14) continue;
      if (prev_s && std::abs(s - s_acc) >= std::abs(*prev_s - s_acc)) continue;
      if (!best || std::abs(s - s_acc) < std::abs(*best - s_acc)) best = s;
    }
    if (!best) {
      out.truncation = "no zero for k=" + std::to_string(k) + " between the previous zero and the accumulation point";
      break;
    }
    out.zeros.push_back({k, *best, a + *best * (b - a)});
    prev_s = best;
  }
  return out;
}

}  // namespace hetbif
