#include "hetbif/error.hpp"
#include "hetbif/io.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hetbif;

namespace {
std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}
}  // namespace

TEST_CASE("sha-256 test vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("numbers round-trip in shortest form") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.5e-300) == "-2.5e-300");
  CHECK(format_number(NAN) == "nan");
  double x = 0.1 + 0.2;
  CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("curve CSV layout") {
  BifurcationCurve c;
  c.tag = "H_L";
  c.k = 2;
  c.points = {{0.5, -0.25}, {1, 2}};
  c.residuals = {1e-9, 0};
  std::ostringstream os;
  write_curves_csv(os, {c});
  CHECK(os.str() == "tag,k,param1,param2,residual\nH_L,2,0.5,-0.25,1e-09\nH_L,2,1,2,0\n");
  auto j = to_json(c);
  CHECK(j["tag"] == "H_L");
  CHECK(j["points"].size() == 2);
  CHECK(curve_colour("F") == std::string("#d7191c"));
  CHECK(curve_colour("P_M") == std::string("#2166ac"));
  CHECK(curve_colour("H_M") == std::string("#1a9641"));
}

TEST_CASE("svg splits polylines at the box and is byte-stable") {
  auto draw = [] {
    Svg s({0, 1, 0, 1});
    s.axes("a", "b");
    s.polyline({{0.1, 0.1}, {0.2, 0.2}, {5, 5}, {0.3, 0.3}, {0.4, 0.4}}, "#000");
    return s;
  };
  Svg s = draw();
  CHECK(s.has_content());
  std::string text = s.str();
  std::size_t n = 0;
  for (std::size_t p = text.find("<polyline"); p != std::string::npos; p = text.find("<polyline", p + 1)) ++n;
  CHECK(n == 2);
  CHECK(text == draw().str());
  Svg empty({0, 1, 0, 1});
  empty.polyline({{3, 3}, {4, 4}}, "#000");
  CHECK_FALSE(empty.has_content());
  CHECK_THROWS_AS(Svg({1, 0, 0, 1}), Error);
}

TEST_CASE("manifest hashes what it wrote") {
  auto dir = std::filesystem::temp_directory_path() / "hetbif_manifest_test";
  std::filesystem::remove_all(dir);
  {
    Manifest m(dir);
    m.write("a.csv", "csv", "x,y\n1,2\n");
    m.note("run", {{"k", 1}});
    m.finish();
  }
  CHECK(slurp(dir / "a.csv") == "x,y\n1,2\n");
  auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["artifacts"][0]["sha256"] == sha256_hex("x,y\n1,2\n"));
  CHECK(j["run"]["k"] == 1);
  std::filesystem::remove_all(dir);
}
