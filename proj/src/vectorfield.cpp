#include "hetbif/vectorfield.hpp"

#include "hetbif/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hetbif {

namespace {

// Canonical order: ascending degree, then descending x-power (x, y, x^2, xy, y^2, ...).
bool canonical_less(const MonomialTerm& a, const MonomialTerm& b) {
  int da = a.px + a.py, db = b.px + b.py;
  if (da != db) return da < db;
  return a.px > b.px;
}

std::vector<MonomialTerm> canonicalize(std::vector<MonomialTerm> terms) {
  std::vector<MonomialTerm> out;
  std::sort(terms.begin(), terms.end(), canonical_less);
  for (auto& t : terms) {
    if (t.px < 0 || t.py < 0) throw Error(ErrorKind::ConfigError, "negative exponent");
    if (!out.empty() && out.back().px == t.px && out.back().py == t.py) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const MonomialTerm& t) { return t.coeff.is_zero(); });
  return out;
}

ParametricPolynomial to_polynomial(const std::vector<MonomialTerm>& terms) {
  ParametricPolynomial p;
  for (const auto& t : terms) p.add_term({t.px, t.py}, t.coeff);
  return p;
}

void check_params(const ParametricSystem& sys, const ParamValues& params) {
  if (params.size() != sys.parameters().size())
    throw Error(ErrorKind::ConfigError, sys.name() + ": expected " + std::to_string(sys.parameters().size()) +
                                            " parameter values, got " + std::to_string(params.size()));
  for (double v : params)
    if (!std::isfinite(v)) throw Error(ErrorKind::DomainError, sys.name() + ": non-finite parameter value");
}

}  // namespace

Vec2 BoundField::operator()(Vec2 z) const {
  if (rhs_) return sign_ * rhs_(z, params_);
  std::array<double, kMaxSystemDegree + 1> xp{}, yp{};
  xp[0] = yp[0] = 1.0;
  for (int i = 1; i <= degree_; ++i) {
    xp[i] = xp[i - 1] * z.x;
    yp[i] = yp[i - 1] * z.y;
  }
  Vec2 v;
  for (const auto& t : fx_) v.x += t.c * xp[t.px] * yp[t.py];
  for (const auto& t : fy_) v.y += t.c * xp[t.px] * yp[t.py];
  return v;
}

Mat2 BoundField::jacobian(Vec2 z) const {
  if (rhs_) {
    if (jac_) {
      Mat2 j = jac_(z, params_);
      return sign_ < 0 ? -j : j;
    }
    Vec2 f0 = (*this)(z);
    double hx = 1e-7 * (1.0 + std::abs(z.x)), hy = 1e-7 * (1.0 + std::abs(z.y));
    Vec2 fx = (*this)({z.x + hx, z.y}), fy = (*this)({z.x, z.y + hy});
    return {(fx.x - f0.x) / hx, (fy.x - f0.x) / hy, (fx.y - f0.y) / hx, (fy.y - f0.y) / hy};
  }
  std::array<double, kMaxSystemDegree + 1> xp{}, yp{};
  xp[0] = yp[0] = 1.0;
  for (int i = 1; i <= degree_; ++i) {
    xp[i] = xp[i - 1] * z.x;
    yp[i] = yp[i - 1] * z.y;
  }
  Mat2 j;
  for (const auto& t : fx_) {
    if (t.px > 0) j.a += t.c * t.px * xp[t.px - 1] * yp[t.py];
    if (t.py > 0) j.b += t.c * t.py * xp[t.px] * yp[t.py - 1];
  }
  for (const auto& t : fy_) {
    if (t.px > 0) j.c += t.c * t.px * xp[t.px - 1] * yp[t.py];
    if (t.py > 0) j.d += t.c * t.py * xp[t.px] * yp[t.py - 1];
  }
  return j;
}

BoundField BoundField::reversed() const {
  BoundField r = *this;
  if (r.rhs_) {
    r.sign_ = -r.sign_;
  } else {
    for (auto& t : r.fx_) t.c = -t.c;
    for (auto& t : r.fy_) t.c = -t.c;
  }
  return r;
}

ParametricSystem::ParametricSystem(std::string name, std::vector<Parameter> parameters,
                                   std::vector<MonomialTerm> x_dot, std::vector<MonomialTerm> y_dot)
    : name_(std::move(name)),
      parameters_(std::move(parameters)),
      polynomial_(true),
      x_dot_(canonicalize(std::move(x_dot))),
      y_dot_(canonicalize(std::move(y_dot))) {
  for (const auto* comp : {&x_dot_, &y_dot_})
    for (const auto& t : *comp) {
      if (t.px + t.py > kMaxSystemDegree)
        throw Error(ErrorKind::ConfigError, name_ + ": degree exceeds " + std::to_string(kMaxSystemDegree));
      if (t.coeff.max_index() >= static_cast<int>(parameters_.size()))
        throw Error(ErrorKind::ConfigError, name_ + ": coefficient references an undeclared parameter");
    }
}

ParametricSystem::ParametricSystem(std::string name, std::vector<Parameter> parameters, RhsFn rhs, JacobianFn jac)
    : name_(std::move(name)), parameters_(std::move(parameters)), polynomial_(false), rhs_(std::move(rhs)),
      jac_(std::move(jac)) {}

std::vector<std::string> ParametricSystem::parameter_names() const {
  std::vector<std::string> out;
  for (const auto& p : parameters_) out.push_back(p.name);
  return out;
}

int ParametricSystem::parameter_index(std::string_view name) const {
  for (std::size_t i = 0; i < parameters_.size(); ++i)
    if (parameters_[i].name == name) return static_cast<int>(i);
  throw Error(ErrorKind::ConfigError, name_ + ": no parameter named '" + std::string(name) + "'");
}

ParametricPolynomial ParametricSystem::x_polynomial() const { return to_polynomial(x_dot_); }
ParametricPolynomial ParametricSystem::y_polynomial() const { return to_polynomial(y_dot_); }

int ParametricSystem::degree() const {
  int d = 0;
  for (const auto* comp : {&x_dot_, &y_dot_})
    for (const auto& t : *comp) d = std::max(d, t.px + t.py);
  return d;
}

ParamValues ParametricSystem::defaults() const {
  ParamValues v;
  for (const auto& p : parameters_) v.push_back(to_double(p.default_value));
  return v;
}

ParamValues ParametricSystem::with(const std::map<std::string, double>& overrides) const {
  ParamValues v = defaults();
  for (const auto& [k, val] : overrides) v[parameter_index(k)] = val;
  return v;
}

BoundField ParametricSystem::bind(const ParamValues& params) const {
  check_params(*this, params);
  BoundField f;
  f.params_ = params;
  if (!polynomial_) {
    f.rhs_ = rhs_;
    f.jac_ = jac_;
    return f;
  }
  f.degree_ = degree();
  for (const auto& t : x_dot_) f.fx_.push_back({t.coeff.evaluate(params), t.px, t.py});
  for (const auto& t : y_dot_) f.fy_.push_back({t.coeff.evaluate(params), t.px, t.py});
  return f;
}

bool operator==(const ParametricSystem& a, const ParametricSystem& b) {
  return a.polynomial_ && b.polynomial_ && a.name_ == b.name_ && a.parameters_ == b.parameters_ &&
         a.x_dot_ == b.x_dot_ && a.y_dot_ == b.y_dot_;
}

Vec2 evaluate(const ParametricSystem& sys, Vec2 point, const std::map<std::string, double>& params) {
  if (!is_finite(point)) throw Error(ErrorKind::DomainError, "non-finite state");
  ParamValues v;
  for (const auto& p : sys.parameters()) {
    auto it = params.find(p.name);
    if (it == params.end()) throw Error(ErrorKind::ConfigError, "missing parameter '" + p.name + "'");
    v.push_back(it->second);
  }
  return sys.rhs(point, v);
}

ParametricSystem time_reversed(const ParametricSystem& sys) {
  std::string name = sys.name() + "_reversed";
  if (!sys.is_polynomial()) {
    auto copy = std::make_shared<ParametricSystem>(sys);
    return ParametricSystem(
        name, sys.parameters(), [copy](Vec2 z, const ParamValues& p) { return -copy->rhs(z, p); },
        [copy](Vec2 z, const ParamValues& p) { return -copy->jacobian(z, p); });
  }
  auto neg = [](std::vector<MonomialTerm> terms) {
    for (auto& t : terms) t.coeff = -t.coeff;
    return terms;
  };
  return ParametricSystem(name, sys.parameters(), neg(sys.x_dot()), neg(sys.y_dot()));
}

ParametricSystem parameter_derivative(const ParametricSystem& sys, std::string_view param) {
  if (!sys.is_polynomial()) throw Error(ErrorKind::ConfigError, "parameter derivative needs a polynomial system");
  int idx = sys.parameter_index(param);
  auto diff = [idx](const std::vector<MonomialTerm>& terms) {
    std::vector<MonomialTerm> out;
    for (const auto& t : terms) out.push_back({LinearForm(t.coeff.coefficient(idx)), t.px, t.py});
    return out;
  };
  return ParametricSystem(sys.name() + "_d" + std::string(param), sys.parameters(), diff(sys.x_dot()),
                          diff(sys.y_dot()));
}

ParametricSystem rename_parameters(const ParametricSystem& sys, const std::map<std::string, std::string>& renames) {
  auto params = sys.parameters();
  for (auto& p : params)
    if (auto it = renames.find(p.name); it != renames.end()) p.name = it->second;
  if (!sys.is_polynomial()) throw Error(ErrorKind::ConfigError, "rename needs a polynomial system");
  return ParametricSystem(sys.name(), params, sys.x_dot(), sys.y_dot());
}

ParametricSystem with_defaults(const ParametricSystem& sys, const std::map<std::string, Rational>& defaults) {
  auto params = sys.parameters();
  for (const auto& [k, v] : defaults) params[sys.parameter_index(k)].default_value = v;
  if (!sys.is_polynomial()) throw Error(ErrorKind::ConfigError, "with_defaults needs a polynomial system");
  return ParametricSystem(sys.name(), params, sys.x_dot(), sys.y_dot());
}

// ---------------------------------------------------------------- built-ins

namespace {

struct TermText {
  const char* coeff;
  int px, py;
};

ParametricSystem make(std::string name, std::vector<std::pair<const char*, const char*>> params,
                      std::vector<TermText> xs, std::vector<TermText> ys) {
  std::vector<Parameter> ps;
  std::vector<std::string> names;
  for (auto [n, d] : params) {
    ps.push_back({n, parse_rational(d)});
    names.emplace_back(n);
  }
  auto conv = [&names](const std::vector<TermText>& ts) {
    std::vector<MonomialTerm> out;
    for (const auto& t : ts) out.push_back({parse_affine(t.coeff, names), t.px, t.py});
    return out;
  };
  return ParametricSystem(std::move(name), std::move(ps), conv(xs), conv(ys));
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"mono_unperturbed", "mono_perturbed", "revers_base", "revers_gamma", "diss_heart"};
}

ParametricSystem builtin(std::string_view name) {
  if (name == "mono_unperturbed")
    return make("mono_unperturbed", {{"a", "1"}, {"b", "-3"}, {"c", "3/2"}},
                {{"a", 1, 0}, {"b", 0, 1}, {"c", 1, 1}, {"-a", 2, 0}},
                {{"a + b", 0, 1}, {"-2*a - 2*b - c", 1, 1}, {"2*c", 0, 2}});
  if (name == "mono_perturbed")
    return make("mono_perturbed", {{"a", "1"}, {"b", "-3"}, {"c", "3/2"}, {"alpha", "0"}, {"eps", "0"}},
                {{"a", 1, 0}, {"b + eps", 0, 1}, {"c", 1, 1}, {"-a", 2, 0}},
                {{"-alpha", 1, 0}, {"a + b + alpha", 0, 1}, {"alpha", 2, 0}, {"-2*a - 2*b - c", 1, 1},
                 {"2*c", 0, 2}});
  if (name == "revers_base")
    return make("revers_base", {}, {{"1", 0, 1}}, {{"1", 1, 0}, {"1", 1, 1}, {"-1", 3, 0}});
  if (name == "revers_gamma")
    return make("revers_gamma", {{"gamma", "2.5315"}}, {{"gamma", 0, 1}, {"1", 0, 2}},
                {{"1", 1, 0}, {"1", 1, 1}, {"-1", 3, 0}});
  if (name == "diss_heart")
    return make("diss_heart", {{"alpha", "0"}, {"eps", "0"}, {"gamma", "2.7"}},
                {{"eps", 1, 0}, {"gamma", 0, 1}, {"1", 0, 2}},
                {{"1", 1, 0}, {"alpha", 0, 1}, {"1", 1, 1}, {"-1", 3, 0}});
  throw Error(ErrorKind::NotFound, "no built-in system named '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- JSON

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, "at " + path + ": " + what);
}

Rational json_rational(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) {
      // Shortest round-trip decimal, so 2.7 reads as 27/10.
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>());
      return parse_rational(std::string(buf, ptr));
    }
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  schema_error(path, "expected a number or rational string");
}

std::vector<MonomialTerm> json_terms(const json& arr, const std::string& path, const std::vector<std::string>& names) {
  if (!arr.is_array()) schema_error(path, "expected an array of terms");
  std::vector<MonomialTerm> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string tp = path + "/" + std::to_string(i);
    const json& t = arr[i];
    if (!t.is_object()) schema_error(tp, "expected an object");
    for (const char* key : {"coeff", "px", "py"})
      if (!t.contains(key)) schema_error(tp, std::string("missing field '") + key + "'");
    MonomialTerm term;
    if (t["coeff"].is_string()) {
      try {
        term.coeff = parse_affine(t["coeff"].get<std::string>(), names);
      } catch (const Error& e) {
        schema_error(tp + "/coeff", e.what());
      }
    } else {
      term.coeff = LinearForm(json_rational(t["coeff"], tp + "/coeff"));
    }
    for (const char* key : {"px", "py"}) {
      if (!t[key].is_number_integer()) schema_error(tp + "/" + key, "expected an integer");
      long long e = t[key].get<long long>();
      if (e < 0) schema_error(tp + "/" + key, "exponent must be non-negative");
      if (e > kMaxSystemDegree) schema_error(tp + "/" + key, "exponent exceeds the degree cap");
      (key[1] == 'x' ? term.px : term.py) = static_cast<int>(e);
    }
    if (term.px + term.py > kMaxSystemDegree) schema_error(tp, "term degree exceeds the degree cap");
    out.push_back(std::move(term));
  }
  return out;
}

int line_of(const std::string& text, std::size_t byte) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

}  // namespace

ParametricSystem parse_system(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_of(json_text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) schema_error("/", "expected an object");
  for (const char* key : {"name", "parameters", "x_dot", "y_dot"})
    if (!doc.contains(key)) schema_error("/", std::string("missing field '") + key + "'");
  if (!doc["name"].is_string()) schema_error("/name", "expected a string");
  if (!doc["parameters"].is_array()) schema_error("/parameters", "expected an array");
  std::vector<Parameter> params;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < doc["parameters"].size(); ++i) {
    std::string pp = "/parameters/" + std::to_string(i);
    const json& p = doc["parameters"][i];
    if (!p.is_object() || !p.contains("name") || !p["name"].is_string()) schema_error(pp, "expected {\"name\", \"default\"}");
    std::string n = p["name"].get<std::string>();
    if (n.empty() || n == "x" || n == "y" || std::find(names.begin(), names.end(), n) != names.end())
      schema_error(pp + "/name", "invalid or duplicate parameter name '" + n + "'");
    Rational d = p.contains("default") ? json_rational(p["default"], pp + "/default") : Rational(0);
    params.push_back({n, d});
    names.push_back(n);
  }
  auto xs = json_terms(doc["x_dot"], "/x_dot", names);
  auto ys = json_terms(doc["y_dot"], "/y_dot", names);
  return ParametricSystem(doc["name"].get<std::string>(), std::move(params), std::move(xs), std::move(ys));
}

ParametricSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::NotFound, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

std::string serialize_system(const ParametricSystem& sys) {
  if (!sys.is_polynomial()) throw Error(ErrorKind::ConfigError, "only polynomial systems can be serialized");
  json doc;
  doc["name"] = sys.name();
  doc["parameters"] = json::array();
  for (const auto& p : sys.parameters()) doc["parameters"].push_back({{"name", p.name}, {"default", to_string(p.default_value)}});
  auto names = sys.parameter_names();
  auto terms = [&names](const std::vector<MonomialTerm>& ts) {
    json arr = json::array();
    for (const auto& t : ts) arr.push_back({{"coeff", t.coeff.format(names)}, {"px", t.px}, {"py", t.py}});
    return arr;
  };
  doc["x_dot"] = terms(sys.x_dot());
  doc["y_dot"] = terms(sys.y_dot());
  return doc.dump(2) + "\n";
}

void save_system(const ParametricSystem& sys, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  out << serialize_system(sys);
}

}  // namespace hetbif
