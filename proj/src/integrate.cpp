#include "hetbif/integrate.hpp"

#include "hetbif/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hetbif {

CrossSection CrossSection::make(Vec2 base, Vec2 normal, Vec2 tangent, double coord_min, double coord_max) {
  if (std::abs(norm(normal) - 1.0) > 1e-12 || std::abs(norm(tangent) - 1.0) > 1e-12)
    throw Error(ErrorKind::ConfigError, "section normal and tangent must be unit vectors");
  if (std::abs(dot(normal, tangent)) > 1e-12) throw Error(ErrorKind::ConfigError, "section normal must be orthogonal to tangent");
  if (!(coord_min < coord_max)) throw Error(ErrorKind::ConfigError, "empty section extent");
  return {base, normal, tangent, coord_min, coord_max};
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::TimeLimit: return "TimeLimit";
    case Termination::Event: return "Event";
    case Termination::Blowup: return "Blowup";
    case Termination::EquilibriumApproach: return "EquilibriumApproach";
    case Termination::ArclengthLimit: return "ArclengthLimit";
  }
  return "?";
}

Vec2 Trajectory::at(double t) const {
  if (dense_.empty()) return samples_.front().z;
  bool fwd = dense_.front().h > 0;
  // Segments are ordered along the integration direction.
  auto it = std::lower_bound(dense_.begin(), dense_.end(), t, [fwd](const Dense& d, double tv) {
    return fwd ? d.t0 + d.h < tv : d.t0 + d.h > tv;
  });
  if (it == dense_.end()) --it;
  double th = std::clamp((t - it->t0) / it->h, 0.0, 1.0);
  double th1 = 1.0 - th;
  const Vec2* r = it->r;
  return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
}

namespace {

// Dormand-Prince 5(4) tableau with Hairer's dense-output coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2 * std::numbers::pi;
  return a;
}

double error_norm(Vec2 err, Vec2 y0, Vec2 y1, const Tolerance& tol) {
  double sx = tol.abs + tol.rel * std::max(std::abs(y0.x), std::abs(y1.x));
  double sy = tol.abs + tol.rel * std::max(std::abs(y0.y), std::abs(y1.y));
  double ex = err.x / sx, ey = err.y / sy;
  return std::sqrt(0.5 * (ex * ex + ey * ey));
}

double initial_step(const BoundField& f, Vec2 y0, Vec2 f0, const Tolerance& tol, double h_max) {
  double sx = tol.abs + tol.rel * std::abs(y0.x), sy = tol.abs + tol.rel * std::abs(y0.y);
  auto nrm = [&](Vec2 v) { return std::sqrt(0.5 * ((v.x / sx) * (v.x / sx) + (v.y / sy) * (v.y / sy))); };
  double dn0 = nrm(y0), dn1 = nrm(f0);
  double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
  h0 = std::min(h0, h_max);
  Vec2 f1 = f(y0 + h0 * f0);
  double dn2 = nrm(f1 - f0) / h0;
  double mx = std::max(dn1, dn2);
  double h1 = mx <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / mx, 0.2);
  return std::min({100 * h0, h1, h_max});
}

struct Interp {
  Vec2 r[5];
  Vec2 operator()(double th) const {
    double th1 = 1.0 - th;
    return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
  }
};

}  // namespace

Trajectory integrate(const BoundField& field, Vec2 x0, double t_span, const IntegrateOptions& opts) {
  if (!(opts.tol.abs > 0 && opts.tol.rel > 0)) throw Error(ErrorKind::ConfigError, "tolerances must be positive");
  if (!std::isfinite(t_span)) throw Error(ErrorKind::ConfigError, "time span must be finite");
  if (!is_finite(x0)) throw Error(ErrorKind::DomainError, "non-finite initial state");

  Trajectory tr;
  tr.samples_.push_back({0.0, x0});
  if (t_span == 0.0) return tr;
  const double dir = t_span > 0 ? 1.0 : -1.0;

  const std::size_t ne = opts.events.size();
  std::vector<double> s_prev(ne);
  std::vector<int> counts(ne, 0);
  for (std::size_t i = 0; i < ne; ++i) s_prev[i] = opts.events[i].section.signed_distance(x0);

  double angle = 0.0;
  const bool winding = opts.winding_center.has_value();

  Vec2 y = x0;
  double t = 0.0;
  Vec2 k1 = field(y);
  if (!is_finite(k1)) throw Error(ErrorKind::DomainError, "non-finite field at initial state");
  double h = initial_step(field, y, k1, opts.tol, opts.h_max);
  if (h == 0.0) h = 1e-6;
  long steps = 0;
  int rejects_in_row = 0;

  while (true) {
    if (++steps > opts.max_steps) throw Error(ErrorKind::StiffnessError, "step budget exhausted");
    double remaining = std::abs(t_span - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw Error(ErrorKind::StiffnessError, "step size underflow");
    const double hs = dir * h;

    Vec2 k2 = field(y + hs * (a21 * k1));
    Vec2 k3 = field(y + hs * (a31 * k1 + a32 * k2));
    Vec2 k4 = field(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    Vec2 k5 = field(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Vec2 k6 = field(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec2 y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    Vec2 k7 = field(y1);
    Vec2 err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = error_norm(err, y, y1, opts.tol);

    if (!std::isfinite(en) || !is_finite(y1)) {
      if (norm(y) > 0.5 * opts.blowup_radius || ++rejects_in_row > 60) {
        tr.termination_ = Termination::Blowup;
        return tr;
      }
      h *= 0.1;
      continue;
    }
    if (en > 1.0) {
      ++rejects_in_row;
      h *= std::max(0.1, 0.9 * std::pow(en, -0.2));
      continue;
    }
    rejects_in_row = 0;

    Interp ip;
    ip.r[0] = y;
    Vec2 ydiff = y1 - y;
    Vec2 bspl = hs * k1 - ydiff;
    ip.r[1] = ydiff;
    ip.r[2] = bspl;
    ip.r[3] = ydiff - hs * k7 - bspl;
    ip.r[4] = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    // Sub-samples guard against a double crossing inside one step.
    constexpr int kSub = 4;
    Vec2 sub[kSub + 1];
    sub[0] = y;
    for (int j = 1; j < kSub; ++j) sub[j] = ip(static_cast<double>(j) / kSub);
    sub[kSub] = y1;

    double angle_at_start = angle;
    auto polar = [&](Vec2 z) { return std::atan2(z.y - opts.winding_center->y, z.x - opts.winding_center->x); };
    // Angle accumulated from sub[0] to z, where z lies in sub-interval j.
    auto angle_to = [&](int j, Vec2 z) {
      double a = angle_at_start;
      Vec2 prev = sub[0];
      for (int m = 1; m < j; ++m) {
        Vec2 cur = sub[m];
        a += wrap_angle(polar(cur) - polar(prev));
        prev = cur;
      }
      return a + wrap_angle(polar(z) - polar(prev));
    };

    // Collect event crossings in this step.
    struct Pending {
      double th;
      std::size_t ev;
      int sub;
    };
    std::vector<Pending> pending;
    for (std::size_t i = 0; i < ne; ++i) {
      const auto& es = opts.events[i];
      double sa = s_prev[i];
      for (int j = 1; j <= kSub; ++j) {
        double sb = es.section.signed_distance(sub[j]);
        double ta = static_cast<double>(j - 1) / kSub, tb = static_cast<double>(j) / kSub;
        bool crossed = (sa < 0 && sb > 0) || (sa > 0 && sb < 0);
        if (crossed && std::abs(sa) > 1e-12) {
          // Forward-time direction of the crossing.
          double fwd_sign = (sb > sa ? 1.0 : -1.0) * dir;
          bool ok = es.direction == Crossing::Any || (es.direction == Crossing::Positive && fwd_sign > 0) ||
                    (es.direction == Crossing::Negative && fwd_sign < 0);
          if (ok) {
            // Illinois-modified regula falsi on the dense output.
            double lo = ta, hi = tb, flo = sa, fhi = sb, th = ta;
            int side = 0;
            for (int it = 0; it < 60; ++it) {
              th = (lo * fhi - hi * flo) / (fhi - flo);
              if (!(th > lo && th < hi)) th = 0.5 * (lo + hi);
              double fm = es.section.signed_distance(ip(th));
              if (std::abs(fm) <= 1e-14 || hi - lo < 1e-16) break;
              if ((fm > 0) == (fhi > 0)) {
                hi = th;
                fhi = fm;
                if (side == -1) flo *= 0.5;
                side = -1;
              } else {
                lo = th;
                flo = fm;
                if (side == 1) fhi *= 0.5;
                side = 1;
              }
            }
            double coord = es.section.coordinate(ip(th));
            if (es.section.in_extent(coord)) pending.push_back({th, i, j});
          }
        }
        sa = sb;
      }
      s_prev[i] = sa;
    }
    std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) { return a.th < b.th; });

    bool stop = false;
    double stop_th = 1.0;
    for (const auto& p : pending) {
      const auto& es = opts.events[p.ev];
      EventHit hit;
      hit.event = static_cast<int>(p.ev);
      hit.occurrence = counts[p.ev]++;
      hit.t = t + p.th * hs;
      hit.point = ip(p.th);
      hit.coordinate = es.section.coordinate(hit.point);
      hit.normal_velocity = dot(es.section.normal, field(hit.point));
      if (winding) hit.winding_angle = angle_to(p.sub, hit.point);
      tr.hits_.push_back(hit);
      if (es.stop_after > 0 && counts[p.ev] >= es.stop_after) {
        stop = true;
        stop_th = p.th;
        tr.terminal_event_ = static_cast<int>(p.ev);
        break;
      }
    }

    Vec2 y_end = stop ? ip(stop_th) : y1;
    double t_end = t + (stop ? stop_th : 1.0) * hs;
    // Arclength and winding over the accepted portion.
    {
      Vec2 prev = y;
      for (int j = 1; j <= kSub; ++j) {
        double tj = static_cast<double>(j) / kSub;
        Vec2 cur = (stop && tj > stop_th) ? y_end : sub[j];
        tr.arclength_ += norm(cur - prev);
        if (winding) angle += wrap_angle(polar(cur) - polar(prev));
        prev = cur;
        if (stop && tj > stop_th) break;
      }
    }
    if (opts.keep_dense) {
      Trajectory::Dense d;
      d.t0 = t;
      d.h = hs;
      for (int m = 0; m < 5; ++m) d.r[m] = ip.r[m];
      tr.dense_.push_back(d);
    }
    t = t_end;
    y = y_end;
    tr.samples_.push_back({t, y});

    if (stop) {
      tr.termination_ = Termination::Event;
      break;
    }
    if (norm(y) > opts.blowup_radius) {
      tr.termination_ = Termination::Blowup;
      break;
    }
    bool near_eq = false;
    for (const Vec2& e : opts.equilibria)
      if (norm(y - e) < opts.equilibrium_radius) near_eq = true;
    if (near_eq) {
      tr.termination_ = Termination::EquilibriumApproach;
      break;
    }
    if (tr.arclength_ >= opts.arclength_cap) {
      tr.termination_ = Termination::ArclengthLimit;
      break;
    }
    if (last) {
      tr.termination_ = Termination::TimeLimit;
      break;
    }
    k1 = k7;
    double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h = std::min(h * fac, opts.h_max);
  }
  tr.winding_angle_ = angle;
  return tr;
}

Trajectory integrate(const ParametricSystem& sys, const ParamValues& params, Vec2 x0, double t_span,
                     const IntegrateOptions& opts) {
  return integrate(sys.bind(params), x0, t_span, opts);
}

ReturnResult poincare_map(const BoundField& field, const CrossSection& section, double coord0, double max_time,
                          Tolerance tol) {
  Vec2 x0 = section.point(coord0);
  Vec2 f0 = field(x0);
  double vn = dot(section.normal, f0);
  if (std::abs(vn) <= 1e-8 * std::max(1.0, norm(f0)) || std::abs(vn) <= 1e-12)
    throw Error(ErrorKind::TangencyError, "flow tangent to section at the start point");
  IntegrateOptions opts;
  opts.tol = tol;
  opts.events.push_back({section, vn > 0 ? Crossing::Positive : Crossing::Negative, 1});
  opts.keep_dense = false;
  Trajectory tr = integrate(field, x0, max_time, opts);
  if (tr.termination() != Termination::Event) throw Error(ErrorKind::NoReturn, std::string("no return: ") + to_string(tr.termination()));
  const EventHit& hit = tr.hits().back();
  if (std::abs(hit.normal_velocity) <= 1e-8) throw Error(ErrorKind::TangencyError, "tangential return to section");
  return {hit.coordinate, hit.t, hit.point};
}

std::vector<Trajectory::Sample> rk4_fixed(const BoundField& f, Vec2 x0, double t_span, double dt) {
  long n = static_cast<long>(std::ceil(std::abs(t_span) / dt - 1e-9));
  double h = t_span / static_cast<double>(n);
  std::vector<Trajectory::Sample> out;
  out.reserve(n + 1);
  Vec2 y = x0;
  out.push_back({0.0, y});
  for (long i = 0; i < n; ++i) {
    Vec2 q1 = f(y), q2 = f(y + 0.5 * h * q1), q3 = f(y + 0.5 * h * q2), q4 = f(y + h * q3);
    y = y + (h / 6.0) * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
    out.push_back({(i + 1) * h, y});
    if (!is_finite(y) || norm(y) > 1e6) break;
  }
  return out;
}

}  // namespace hetbif
