#include "hetbif/io.hpp"

#include "hetbif/error.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>

namespace hetbif {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_curves_csv(std::ostream& os, const std::vector<BifurcationCurve>& curves) {
  os << "tag,k,param1,param2,residual\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.points.size(); ++i)
      os << c.tag << ',' << c.k << ',' << format_number(c.points[i].x) << ',' << format_number(c.points[i].y) << ','
         << format_number(i < c.residuals.size() ? c.residuals[i] : NAN) << '\n';
}

namespace {

// Doubles go through format_number so the JSON text does not depend on the library's printer.
ordered_json num(double v) { return ordered_json::parse(std::isfinite(v) ? format_number(v) : "null"); }
ordered_json vec(Vec2 p) { return ordered_json::array({num(p.x), num(p.y)}); }

}  // namespace

ordered_json to_json(const Saddle& s) {
  ordered_json j;
  j["location"] = vec(s.location);
  j["lambda_s"] = num(s.lambda_s);
  j["lambda_u"] = num(s.lambda_u);
  j["v_s"] = vec(s.v_s);
  j["v_u"] = vec(s.v_u);
  j["index"] = num(s.index());
  return j;
}

ordered_json to_json(const Codim2Point& c) {
  ordered_json j;
  j["location"] = vec(c.location);
  j["residuals"] = ordered_json::array({num(c.residuals[0]), num(c.residuals[1])});
  j["L"] = to_json(c.L);
  j["M"] = to_json(c.M);
  j["subcase"] = {{"case", c.subcase.case_id},
                  {"canonical_case", c.subcase.canonical_case},
                  {"reduction", to_string(c.subcase.reduction)}};
  return j;
}

ordered_json to_json(const BifurcationCurve& c) {
  ordered_json j;
  j["tag"] = c.tag;
  j["k"] = c.k;
  j["ends"] = {to_string(c.ends[0]), to_string(c.ends[1])};
  if (!c.note.empty()) j["note"] = c.note;
  j["points"] = ordered_json::array();
  for (Vec2 p : c.points) j["points"].push_back(vec(p));
  j["residuals"] = ordered_json::array();
  for (double r : c.residuals) j["residuals"].push_back(num(r));
  return j;
}

ordered_json to_json(const Diagram& d) {
  ordered_json j;
  j["scenario"] = d.scenario;
  j["parameters"] = {d.p1_name, d.p2_name};
  j["bounds"] = ordered_json::array({num(d.bounds.xmin), num(d.bounds.xmax), num(d.bounds.ymin), num(d.bounds.ymax)});
  j["codim2"] = ordered_json::array();
  for (const auto& c : d.codim2) j["codim2"].push_back(to_json(c));
  j["curves"] = ordered_json::array();
  for (const auto& c : d.curves) j["curves"].push_back(to_json(c));
  j["failures"] = ordered_json::array();
  for (const auto& f : d.failures) j["failures"].push_back({{"tag", f.tag}, {"k", f.k}, {"message", f.message}});
  return j;
}

const char* curve_colour(const std::string& tag) {
  if (tag == "H_L" || tag == "H_M") return "#1a9641";
  if (tag == "P_L" || tag == "P_M") return "#2166ac";
  if (tag == "F") return "#d7191c";
  return "#555555";
}

Svg::Svg(Box world, int width, int height) : world_(world), w_(width), h_(height) {
  if (!(world.xmax > world.xmin && world.ymax > world.ymin))
    throw Error(ErrorKind::DomainError, "empty plot region");
}

Vec2 Svg::to_screen(Vec2 p) const {
  const double m = 40.0;
  return {m + (p.x - world_.xmin) / (world_.xmax - world_.xmin) * (w_ - 2 * m),
          h_ - m - (p.y - world_.ymin) / (world_.ymax - world_.ymin) * (h_ - 2 * m)};
}

namespace {
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
bool inside(const Box& b, Vec2 p) { return b.contains(p); }
}  // namespace

void Svg::polyline(const std::vector<Vec2>& pts, std::string_view colour, double width) {
  // Split at points outside the box so long excursions do not smear across the plot.
  std::string run;
  int count = 0;
  auto flush = [&] {
    if (count >= 2)
      body_ += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"" + px(width) +
               "\" points=\"" + run + "\"/>\n";
    run.clear();
    count = 0;
  };
  for (Vec2 p : pts) {
    if (!is_finite(p) || !inside(world_, p)) {
      flush();
      continue;
    }
    Vec2 s = to_screen(p);
    if (count) run += ' ';
    run += px(s.x) + ',' + px(s.y);
    ++count;
    drawn_ = true;
  }
  flush();
}

void Svg::marker(Vec2 p, std::string_view colour, double radius) {
  if (!inside(world_, p)) return;
  Vec2 s = to_screen(p);
  body_ += "<circle cx=\"" + px(s.x) + "\" cy=\"" + px(s.y) + "\" r=\"" + px(radius) + "\" fill=\"" +
           std::string(colour) + "\"/>\n";
  drawn_ = true;
}

void Svg::text(Vec2 p, std::string_view s, std::string_view colour) {
  Vec2 q = to_screen(p);
  body_ += "<text x=\"" + px(q.x + 5) + "\" y=\"" + px(q.y - 5) + "\" font-size=\"12\" fill=\"" +
           std::string(colour) + "\">" + std::string(s) + "</text>\n";
}

void Svg::axes(std::string_view x_label, std::string_view y_label) {
  Vec2 a = to_screen({world_.xmin, world_.ymin}), b = to_screen({world_.xmax, world_.ymax});
  body_ += "<rect x=\"" + px(a.x) + "\" y=\"" + px(b.y) + "\" width=\"" + px(b.x - a.x) + "\" height=\"" +
           px(a.y - b.y) + "\" fill=\"none\" stroke=\"#999\"/>\n";
  if (world_.xmin < 0 && world_.xmax > 0) {
    Vec2 p = to_screen({0, world_.ymin}), q = to_screen({0, world_.ymax});
    body_ += "<line x1=\"" + px(p.x) + "\" y1=\"" + px(p.y) + "\" x2=\"" + px(q.x) + "\" y2=\"" + px(q.y) +
             "\" stroke=\"#ddd\"/>\n";
  }
  if (world_.ymin < 0 && world_.ymax > 0) {
    Vec2 p = to_screen({world_.xmin, 0}), q = to_screen({world_.xmax, 0});
    body_ += "<line x1=\"" + px(p.x) + "\" y1=\"" + px(p.y) + "\" x2=\"" + px(q.x) + "\" y2=\"" + px(q.y) +
             "\" stroke=\"#ddd\"/>\n";
  }
  body_ += "<text x=\"" + px(b.x - 40) + "\" y=\"" + px(a.y + 25) + "\" font-size=\"13\">" + std::string(x_label) +
           "</text>\n";
  body_ += "<text x=\"" + px(a.x - 30) + "\" y=\"" + px(b.y - 10) + "\" font-size=\"13\">" + std::string(y_label) +
           "</text>\n";
  body_ += "<text x=\"" + px(a.x) + "\" y=\"" + px(a.y + 25) + "\" font-size=\"10\" fill=\"#666\">[" +
           format_number(world_.xmin) + ", " + format_number(world_.xmax) + "] x [" + format_number(world_.ymin) +
           ", " + format_number(world_.ymax) + "]</text>\n";
}

std::string Svg::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) + "\" height=\"" +
         std::to_string(h_) + "\" viewBox=\"0 0 " + std::to_string(w_) + " " + std::to_string(h_) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw Error(ErrorKind::DomainError, "sha-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Manifest::Manifest(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

void Manifest::write(const std::string& name, const std::string& type, const std::string& content) {
  std::ofstream f(dir_ / name, std::ios::binary);
  if (!(f << content)) throw Error(ErrorKind::ConfigError, "cannot write " + (dir_ / name).string());
  artifacts_.push_back({name, type, sha256_hex(content)});
}

void Manifest::finish() const {
  ordered_json j;
  j["artifacts"] = ordered_json::array();
  for (const auto& a : artifacts_) j["artifacts"].push_back({{"path", a.path}, {"type", a.type}, {"sha256", a.sha256}});
  for (const auto& [k, v] : extra_.items()) j[k] = v;
  std::ofstream f(dir_ / "manifest.json", std::ios::binary);
  f << j.dump(2) << '\n';
}

}  // namespace hetbif
