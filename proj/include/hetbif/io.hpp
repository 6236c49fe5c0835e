#pragma once

// Output artifacts: curve CSV, diagram JSON, hand-written SVG and a hashed manifest.
// Everything is formatted with fixed precision so identical inputs give identical bytes.

#include "hetbif/diagram.hpp"

#include "json.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hetbif {

std::string format_number(double v);  // shortest round-trip form, "nan" when undefined

/// Header tag,k,param1,param2,residual; one row per curve point.
void write_curves_csv(std::ostream& os, const std::vector<BifurcationCurve>& curves);

nlohmann::ordered_json to_json(const Saddle& s);
nlohmann::ordered_json to_json(const Codim2Point& c);
nlohmann::ordered_json to_json(const BifurcationCurve& c);
nlohmann::ordered_json to_json(const Diagram& d);

/// Paper colours: heteroclinic green, homoclinic blue, fold red.
const char* curve_colour(const std::string& tag);

class Svg {
 public:
  Svg(Box world, int width = 640, int height = 640);
  void polyline(const std::vector<Vec2>& pts, std::string_view colour, double width = 1.5);
  void marker(Vec2 p, std::string_view colour, double radius = 4.0);
  void text(Vec2 p, std::string_view s, std::string_view colour = "#000");
  void axes(std::string_view x_label, std::string_view y_label);
  /// False when nothing was drawn inside the world box.
  bool has_content() const { return drawn_; }
  std::string str() const;

 private:
  Vec2 to_screen(Vec2 p) const;
  Box world_;
  int w_, h_;
  std::string body_;
  bool drawn_ = false;
};

std::string sha256_hex(std::string_view data);

struct Artifact {
  std::string path;  // relative to the output directory
  std::string type;  // csv, json, svg
  std::string sha256;
};

/// Writes files under a directory and records their hashes.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path dir);
  void write(const std::string& name, const std::string& type, const std::string& content);
  void note(const std::string& key, const nlohmann::ordered_json& value) { extra_[key] = value; }
  const std::vector<Artifact>& artifacts() const { return artifacts_; }
  /// manifest.json: artifacts plus notes.
  void finish() const;

 private:
  std::filesystem::path dir_;
  std::vector<Artifact> artifacts_;
  nlohmann::ordered_json extra_ = nlohmann::ordered_json::object();
};

}  // namespace hetbif
