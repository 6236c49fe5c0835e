// hetbif: command-line front end. Exit status 0 on success, 2 when some curves
// failed but the run completed, 1 on a hard error.

#include "hetbif/diagram.hpp"
#include "hetbif/error.hpp"
#include "hetbif/io.hpp"
#include "hetbif/melnikov.hpp"
#include "hetbif/modelmap.hpp"
#include "hetbif/synthesis.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using namespace hetbif;
using nlohmann::ordered_json;

namespace {

struct Common {
  std::vector<std::string> params;
  std::optional<double> tol_abs, tol_rel;
  int kmax = 3;
  std::string out = "out";
  std::string format = "all";

  bool wants(const std::string& f) const { return format == "all" || format == f; }
  std::map<std::string, double> overrides() const {
    std::map<std::string, double> m;
    for (const auto& kv : params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "expected name=value, got '" + kv + "'");
      m[kv.substr(0, eq)] = to_double(parse_rational(kv.substr(eq + 1)));
    }
    return m;
  }
  Tolerance tolerance(Tolerance t = {}) const {
    if (tol_abs) t.abs = *tol_abs;
    if (tol_rel) t.rel = *tol_rel;
    return t;
  }
  ordered_json describe(const std::string& command) const {
    ordered_json j;
    j["command"] = command;
    j["params"] = params;
    j["kmax"] = kmax;
    j["format"] = format;
    if (tol_abs) j["tol_abs"] = format_number(*tol_abs);
    if (tol_rel) j["tol_rel"] = format_number(*tol_rel);
    return j;
  }
};

void add_common(CLI::App* app, Common& c, bool with_kmax) {
  app->add_option("--params", c.params, "parameter overrides name=value (rationals allowed)")->delimiter(',');
  app->add_option("--tol-abs", c.tol_abs, "absolute integration tolerance");
  app->add_option("--tol-rel", c.tol_rel, "relative integration tolerance");
  if (with_kmax) app->add_option("--kmax", c.kmax, "largest winding count")->check(CLI::Range(0, 12));
  app->add_option("--out", c.out, "output directory");
  app->add_option("--format", c.format, "csv, json, svg or all")->check(CLI::IsMember({"csv", "json", "svg", "all"}));
}

Box parse_box(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(to_double(parse_rational(item)));
  if (v.size() != 4) throw Error(ErrorKind::ConfigError, "box needs xmin,xmax,ymin,ymax");
  return {v[0], v[1], v[2], v[3]};
}

ParametricSystem load_any(const std::string& name) {
  for (const auto& b : builtin_names())
    if (b == name) return builtin(name);
  return load_system(name);
}

std::string curve_label(const BifurcationCurve& c) {
  return c.tag == "H_L" || c.tag == "H_M" ? c.tag + "^(" + std::to_string(c.k) + ")" : c.tag;
}

void draw_curves(Svg& svg, const std::vector<BifurcationCurve>& curves) {
  for (const auto& c : curves) {
    svg.polyline(c.points, curve_colour(c.tag), c.tag == "F" ? 2.0 : 1.5);
    if (!c.points.empty()) svg.text(c.points[c.points.size() / 2], curve_label(c), curve_colour(c.tag));
  }
}

// ---------------------------------------------------------------- portrait

struct PortraitArgs {
  std::string system;
  std::string region = "-1,2,-1,1";
  std::vector<std::string> seeds;
  double t_max = 40.0;
};

int cmd_portrait(const PortraitArgs& a, const Common& c) {
  ParametricSystem sys = load_any(a.system);
  ParamValues p = sys.with(c.overrides());
  BoundField f = sys.bind(p);
  Box region = parse_box(a.region);
  Svg svg(region);
  svg.axes("x", "y");
  double diag = std::hypot(region.xmax - region.xmin, region.ymax - region.ymin);

  std::vector<Equilibrium> eqs;
  const int n = 12;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      Vec2 g{region.xmin + (region.xmax - region.xmin) * i / n, region.ymin + (region.ymax - region.ymin) * j / n};
      try {
        Equilibrium e = find_equilibrium(f, g);
        if (!region.contains(e.point)) continue;
        bool seen = false;
        for (const auto& q : eqs) seen = seen || norm(q.point - e.point) < 1e-6;
        if (!seen) eqs.push_back(e);
      } catch (const Error&) {
      }
    }
  std::sort(eqs.begin(), eqs.end(), [](const Equilibrium& x, const Equilibrium& y) {
    return x.point.x != y.point.x ? x.point.x < y.point.x : x.point.y < y.point.y;
  });

  std::ostringstream csv, eq_csv;
  csv << "curve,kind,x,y\n";
  eq_csv << "x,y,type\n";
  int curve_id = 0;
  auto emit = [&](const std::vector<Vec2>& pts, const std::string& kind, const char* colour) {
    svg.polyline(pts, colour, kind == "trajectory" ? 1.0 : 1.8);
    for (Vec2 q : pts) csv << curve_id << ',' << kind << ',' << format_number(q.x) << ',' << format_number(q.y) << '\n';
    ++curve_id;
  };
  std::vector<Vec2> targets;
  for (const auto& e : eqs) targets.push_back(e.point);
  for (const auto& e : eqs) {
    eq_csv << format_number(e.point.x) << ',' << format_number(e.point.y) << ',' << to_string(e.type) << '\n';
    if (e.type != EquilibriumType::Saddle) continue;
    Saddle s = saddle_data(f, e.point);
    for (BranchKind k : {BranchKind::Unstable, BranchKind::Stable})
      for (Side side : {Side::Plus, Side::Minus}) {
        BranchOptions o;
        o.tol = c.tolerance(o.tol);
        o.arclength_cap = 3.0 * diag;
        o.max_time = 60.0;
        for (Vec2 t : targets)
          if (norm(t - e.point) > 1e-9) o.equilibria.push_back(t);
        try {
          ManifoldBranch b = grow_branch(f, s, k, side, o);
          std::vector<Vec2> pts;
          for (const auto& smp : b.curve.samples()) pts.push_back(smp.z);
          emit(pts, k == BranchKind::Unstable ? "unstable" : "stable", k == BranchKind::Unstable ? "#d7191c" : "#2166ac");
        } catch (const Error& err) {
          std::cerr << "warning: branch skipped: " << err.what() << '\n';
        }
      }
  }
  for (const auto& text : a.seeds) {
    Box b = parse_box(text + ",0,0");  // reuse the number parser for "x,y"
    Vec2 z0{b.xmin, b.xmax};
    IntegrateOptions o;
    o.tol = c.tolerance(o.tol);
    o.arclength_cap = 3.0 * diag;
    o.equilibria = targets;
    for (double dir : {1.0, -1.0}) {
      Trajectory tr = integrate(f, z0, dir * a.t_max, o);
      std::vector<Vec2> pts;
      for (const auto& smp : tr.samples()) pts.push_back(smp.z);
      emit(pts, "trajectory", "#444444");
    }
  }
  for (const auto& e : eqs) {
    bool saddle = e.type == EquilibriumType::Saddle;
    svg.marker(e.point, saddle ? "#000" : "#7b3294", 4.0);
    svg.text(e.point, to_string(e.type));
  }
  if (!svg.has_content()) std::cerr << "warning: EmptyPlot: nothing inside the region\n";

  Manifest m(c.out);
  if (c.wants("csv")) {
    m.write("portrait.csv", "csv", csv.str());
    m.write("equilibria.csv", "csv", eq_csv.str());
  }
  if (c.wants("svg")) m.write("portrait.svg", "svg", svg.str());
  auto d = c.describe("portrait");
  d["system"] = sys.name();
  d["region"] = a.region;
  m.note("run", d);
  m.finish();
  std::cout << eqs.size() << " equilibria, " << curve_id << " polylines -> " << c.out << '\n';
  return 0;
}

// ---------------------------------------------------------------- diagram

int cmd_diagram(const std::string& name, const std::string& bounds, const Common& c) {
  Scenario s = scenario(name);
  for (const auto& [k, v] : c.overrides()) s.base[s.system.parameter_index(k)] = v;
  s.gap_options.tol = c.tolerance(s.gap_options.tol);
  if (!bounds.empty()) s.bounds = parse_box(bounds);
  if (s.p2 < 0) throw Error(ErrorKind::ConfigError, name + " has a single parameter; no diagram");
  Diagram d = build_diagram(s, c.kmax);

  Manifest m(c.out);
  if (c.wants("csv")) {
    std::ostringstream os;
    write_curves_csv(os, d.curves);
    m.write("diagram.csv", "csv", os.str());
  }
  if (c.wants("json")) m.write("diagram.json", "json", to_json(d).dump(1) + "\n");
  if (c.wants("svg")) {
    Svg svg(d.bounds);
    svg.axes(d.p1_name, d.p2_name);
    draw_curves(svg, d.curves);
    for (const auto& p : d.codim2) {
      svg.marker(p.location, "#000", 4.0);
      svg.text(p.location, "C");
    }
    m.write("diagram.svg", "svg", svg.str());
  }
  auto desc = c.describe("diagram");
  desc["scenario"] = name;
  m.note("run", desc);
  ordered_json fails = ordered_json::array();
  for (const auto& f : d.failures) fails.push_back({{"tag", f.tag}, {"k", f.k}, {"message", f.message}});
  m.note("failures", fails);
  m.finish();

  for (const auto& p : d.codim2)
    std::cout << "codim-2 point (" << format_number(p.location.x) << ", " << format_number(p.location.y)
              << ")  lambda=" << format_number(p.L.index()) << " mu=" << format_number(p.M.index()) << '\n';
  for (const auto& cv : d.curves)
    std::cout << curve_label(cv) << ": " << cv.points.size() << " points, ends " << to_string(cv.ends[0]) << "/"
              << to_string(cv.ends[1]) << '\n';
  for (const auto& f : d.failures) std::cerr << "failed: " << f.tag << " k=" << f.k << ": " << f.message << '\n';
  return d.failures.empty() ? 0 : 2;
}

// ---------------------------------------------------------------- melnikov

int cmd_melnikov(const std::string& which, const std::string& c_text, std::string param, double tol, const Common& c) {
  ParametricSystem sys = builtin("mono_perturbed");
  auto ov = c.overrides();
  ov["c"] = to_double(parse_rational(c_text));
  ov["alpha"] = 0.0;
  ov["eps"] = 0.0;
  MelnikovConnection conn = melnikov_connection_from_string(which);
  if (param.empty()) param = conn == MelnikovConnection::Parabola ? "eps" : "alpha";
  MelnikovResult r = melnikov_integral({sys, sys.with(ov), param, conn, tol});

  std::cout << "M_" << param << "(0) = " << format_number(r.value) << "  +- " << format_number(r.error_estimate) << '\n'
            << "sign " << (r.sign < 0 ? "negative" : r.sign > 0 ? "positive" : "zero")
            << (r.sign_certified ? " (certified)" : " (not certified)") << '\n'
            << "orientation: " << r.orientation << '\n';
  ordered_json j;
  j["connection"] = to_string(conn);
  j["c"] = c_text;
  j["parameter"] = param;
  j["value"] = format_number(r.value);
  j["error_estimate"] = format_number(r.error_estimate);
  j["sign"] = r.sign;
  j["sign_certified"] = r.sign_certified;
  j["integrand_one_sign"] = r.integrand_one_sign;
  j["orientation"] = r.orientation;
  Manifest m(c.out);
  if (c.wants("json")) m.write("melnikov.json", "json", j.dump(1) + "\n");
  m.note("run", c.describe("melnikov"));
  m.finish();
  return 0;
}

// ---------------------------------------------------------------- synthesize

int cmd_synthesize(const std::string& variety, int degree, const Common& c) {
  Variety v = Variety::parse(variety);
  TangentFamily fam = solve_family(v, degree);
  std::string text = serialize_system(fam.field);
  std::cout << text << '\n';
  std::cerr << "family dimension " << fam.free_parameters.size() << ", tangency remainder "
            << (is_tangent(v, fam.field) ? "zero" : "NONZERO") << '\n';
  Manifest m(c.out);
  if (c.wants("json")) m.write("family.json", "json", text + "\n");
  auto d = c.describe("synthesize");
  d["variety"] = format_polynomial(v.G);
  d["degree"] = degree;
  m.note("run", d);
  m.finish();
  return 0;
}

// ---------------------------------------------------------------- modelmap

struct MapArgs {
  std::string orientation = "non-monodromic";
  double lambda = 0.5, mu = 0.5, theta1 = 1.0, theta2 = 1.0;
  std::string box;
  int grid = 100;
};

int cmd_modelmap(const MapArgs& a, const Common& c) {
  ModelMapFamily fam;
  fam.orientation = orientation_from_string(a.orientation);
  fam.lambda = a.lambda;
  fam.mu = a.mu;
  fam.theta1 = a.theta1;
  fam.theta2 = a.theta2;
  if (!a.box.empty()) fam.box = parse_box(a.box);
  fam.validate();
  MapBifurcationSet set = bifurcation_set(fam, c.kmax);

  Manifest m(c.out);
  if (c.wants("csv")) {
    std::ostringstream os;
    write_curves_csv(os, set.curves);
    m.write("modelmap.csv", "csv", os.str());
    std::vector<int> counts = fixed_point_grid(fam, a.grid);
    std::ostringstream g;
    g << "beta1,beta2,fixed_points\n";
    for (int j = 0; j < a.grid; ++j)
      for (int i = 0; i < a.grid; ++i) {
        double b1 = fam.box.xmin + (i + 0.5) * (fam.box.xmax - fam.box.xmin) / a.grid;
        double b2 = fam.box.ymin + (j + 0.5) * (fam.box.ymax - fam.box.ymin) / a.grid;
        g << format_number(b1) << ',' << format_number(b2) << ',' << counts[j * a.grid + i] << '\n';
      }
    m.write("fixed_points.csv", "csv", g.str());
  }
  // H^(k) below double resolution survive as high-precision zeros along a chord through
  // each loop curve, a fifth of the way up the box.
  std::vector<std::pair<std::string, MapFlashingSeries>> series;
  if (fam.orientation == Orientation::NonMonodromic) {
    double b2 = 0.2 * fam.box.ymax, b1 = std::pow(b2 / fam.theta1, 1.0 / fam.lambda);
    series.emplace_back("H_M/P_M", flashing_series_map(fam, CurveTag::H_M, CurveTag::P_M, {-b1, b2}, {2 * b1, b2}, c.kmax));
    double a1 = 0.2 * fam.box.xmax, a2 = std::pow(a1 / fam.theta2, 1.0 / fam.mu);
    series.emplace_back("H_L/P_L", flashing_series_map(fam, CurveTag::H_L, CurveTag::P_L, {a1, -a2}, {a1, 2 * a2}, c.kmax));
  }
  if (c.wants("csv") && !series.empty()) {
    std::ostringstream os;
    os << "series,k,s,offset,beta1,beta2\n";
    for (const auto& [name, fs] : series)
      for (const auto& z : fs.zeros)
        os << name << ',' << z.k << ',' << z.s.str(40, std::ios::scientific) << ','
           << HighReal(abs(z.s - fs.s_acc)).str(6, std::ios::scientific) << ',' << format_number(z.beta.x) << ','
           << format_number(z.beta.y) << '\n';
    m.write("flashing.csv", "csv", os.str());
  }
  if (c.wants("json")) {
    ordered_json j;
    j["curves"] = ordered_json::array();
    for (const auto& cv : set.curves) j["curves"].push_back(to_json(cv));
    for (const auto& [name, fs] : series) {
      ordered_json f;
      f["series"] = name;
      f["s_acc"] = fs.s_acc.str(40, std::ios::scientific);
      f["truncation"] = fs.truncation;
      for (const auto& z : fs.zeros) f["zeros"].push_back({{"k", z.k}, {"s", z.s.str(40, std::ios::scientific)}});
      j["flashing"].push_back(f);
    }
    j["notes"] = set.notes;
    m.write("modelmap.json", "json", j.dump(1) + "\n");
  }
  if (c.wants("svg")) {
    Svg svg(fam.box);
    svg.axes("beta1", "beta2");
    draw_curves(svg, set.curves);
    m.write("modelmap.svg", "svg", svg.str());
  }
  auto d = c.describe("modelmap");
  d["orientation"] = to_string(fam.orientation);
  d["lambda"] = format_number(a.lambda);
  d["mu"] = format_number(a.mu);
  m.note("run", d);
  m.note("notes", set.notes);
  m.finish();
  for (const auto& cv : set.curves) std::cout << curve_label(cv) << ": " << cv.points.size() << " points\n";
  for (const auto& n : set.notes) std::cout << "note: " << n << '\n';
  for (const auto& [name, fs] : series) {
    std::cout << name << " flashing zeros:";
    for (const auto& z : fs.zeros) std::cout << " k=" << z.k;
    std::cout << (fs.truncation.empty() ? "" : "  (" + fs.truncation + ")") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcations of planar heteroclinic contours"};
  app.require_subcommand(1);

  Common portrait_c, diagram_c, mel_c, syn_c, map_c;
  PortraitArgs pa;
  auto* portrait = app.add_subcommand("portrait", "phase portrait with equilibria, manifolds and trajectories");
  portrait->add_option("--system", pa.system, "built-in name or JSON system file")->required();
  portrait->add_option("--region", pa.region, "xmin,xmax,ymin,ymax");
  portrait->add_option("--seed", pa.seeds, "trajectory seed x,y (repeatable)");
  portrait->add_option("--tmax", pa.t_max, "integration time each way");
  add_common(portrait, portrait_c, false);

  std::string scen, bounds;
  auto* diagram = app.add_subcommand("diagram", "two-parameter bifurcation diagram of a scenario");
  diagram->add_option("--scenario", scen, "mono_c32, mono_c12 or diss_heart")->required();
  diagram->add_option("--bounds", bounds, "parameter box p1min,p1max,p2min,p2max");
  add_common(diagram, diagram_c, true);

  std::string mcase = "parabola", mc = "1/2", mparam;
  double mtol = 1e-10;
  auto* mel = app.add_subcommand("melnikov", "Melnikov integral along a connection of the monodromic example");
  mel->add_option("--case", mcase, "parabola or x_axis");
  mel->add_option("--c", mc, "value of c");
  mel->add_option("--param", mparam, "perturbation parameter (default eps on the parabola, alpha on the axis)");
  mel->add_option("--tol", mtol, "relative quadrature tolerance");
  add_common(mel, mel_c, false);

  std::string variety;
  int degree = 2;
  auto* syn = app.add_subcommand("synthesize", "polynomial fields tangent to G = 0");
  syn->add_option("--variety", variety, "G(x, y)")->required();
  syn->add_option("--degree", degree, "ansatz degree")->check(CLI::Range(1, kMaxSynthesisDegree));
  add_common(syn, syn_c, false);

  MapArgs ma;
  auto* mm = app.add_subcommand("modelmap", "bifurcation set of the truncated model map");
  mm->add_option("--orientation", ma.orientation, "monodromic or non-monodromic");
  mm->add_option("--lambda", ma.lambda);
  mm->add_option("--mu", ma.mu);
  mm->add_option("--theta1", ma.theta1);
  mm->add_option("--theta2", ma.theta2);
  mm->add_option("--box", ma.box, "beta1min,beta1max,beta2min,beta2max");
  mm->add_option("--grid", ma.grid, "fixed-point count grid size")->check(CLI::Range(1, 2000));
  add_common(mm, map_c, true);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*portrait) return cmd_portrait(pa, portrait_c);
    if (*diagram) return cmd_diagram(scen, bounds, diagram_c);
    if (*mel) return cmd_melnikov(mcase, mc, mparam, mtol, mel_c);
    if (*syn) return cmd_synthesize(variety, degree, syn_c);
    if (*mm) return cmd_modelmap(ma, map_c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
