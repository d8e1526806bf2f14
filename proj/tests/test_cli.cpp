#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = TAUTPATH_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tautpath-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int run(const std::string& args) {
  int rc = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("genmesh writes the advertised counts") {
  TempDir dir;
  std::string obj = dir.file("mesh.obj");
  REQUIRE(run("genmesh --kind flat --ncols 11 --nrows 11 --cellsize 1 --mesh quad -o " + obj) ==
          0);
  std::string text = slurp(obj);
  size_t verts = 0, faces = 0, pos = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++verts;
    if (line.rfind("f ", 0) == 0) ++faces;
  }
  CHECK(verts == 121);
  CHECK(faces == 100);
  CHECK(fs::exists(obj + ".manifest.json"));
  (void)pos;
}

TEST_CASE("genmesh tri doubles the face count") {
  TempDir dir;
  std::string obj = dir.file("mesh.obj");
  REQUIRE(run("genmesh --kind flat --ncols 11 --nrows 11 --mesh tri --diagonal toward_ne -o " +
              obj) == 0);
  std::string text = slurp(obj);
  size_t faces = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("f ", 0) == 0) ++faces;
  }
  CHECK(faces == 200);
}

TEST_CASE("genmesh is byte-deterministic") {
  TempDir dir;
  std::string a = dir.file("a.obj");
  std::string b = dir.file("b.obj");
  std::string args = "genmesh --kind fbm --amplitude 4 --seed 11 --ncols 15 --nrows 15 "
                     "--mesh unstructured --spacing 1.5 -o ";
  REQUIRE(run(args + a) == 0);
  REQUIRE(run(args + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("full pipeline with oracle verification") {
  TempDir dir;
  std::string obj = dir.file("mesh.obj");
  std::string net = dir.file("net.json");
  std::string result = dir.file("result.json");
  std::string path = dir.file("path.geojson");
  std::string oracle = dir.file("oracle.json");
  std::string svg = dir.file("fig.svg");

  REQUIRE(run("genmesh --kind gaussian_hill --amplitude 4 --sigma 3 --ncols 13 --nrows 13 "
              "--mesh unstructured --spacing 1.6 --seed 5 -o " +
              obj) == 0);
  REQUIRE(run("convert " + obj + " --split --anchor-a 0,0,0 --anchor-b 12,12,0 -o " + net) == 0);
  REQUIRE(run("solve " + net + " -o " + result) == 0);
  REQUIRE(run("extract " + result + " " + net + " " + obj + " --mode chain -o " + path) == 0);
  REQUIRE(run("oracle " + net + " -o " + oracle) == 0);
  CHECK(run("compare " + path + " " + oracle) == 0);
  CHECK(run("render " + obj + " --net " + net + " --result " + result + " --path " + path +
            " -o " + svg) == 0);
  std::string fig = slurp(svg);
  CHECK(fig.find("<svg") != std::string::npos);
  CHECK(fig.find("</svg>") != std::string::npos);

  // Solving again is byte-identical.
  std::string result2 = dir.file("result2.json");
  REQUIRE(run("solve " + net + " -o " + result2) == 0);
  CHECK(slurp(result) == slurp(result2));

  // Replay from the manifest verifies the checksums.
  CHECK(run("replay " + result + ".manifest.json") == 0);
}

TEST_CASE("tampered path fails verification with exit code 6") {
  TempDir dir;
  std::string obj = dir.file("mesh.obj");
  std::string net = dir.file("net.json");
  std::string result = dir.file("result.json");
  std::string path = dir.file("path.geojson");
  std::string oracle = dir.file("oracle.json");
  REQUIRE(run("genmesh --kind flat --ncols 8 --nrows 8 --mesh tri -o " + obj) == 0);
  REQUIRE(run("convert " + obj + " --split --anchor-a 0,0,0 --anchor-b 7,7,0 -o " + net) == 0);
  REQUIRE(run("solve " + net + " -o " + result) == 0);
  REQUIRE(run("extract " + result + " " + net + " " + obj + " -o " + path) == 0);
  REQUIRE(run("oracle " + net + " -o " + oracle) == 0);

  nlohmann::json j = nlohmann::json::parse(slurp(path));
  auto& coord = j["geometry"]["coordinates"][1][0];
  coord = coord.get<double>() + 0.01 * 7.0;
  spit(path, j.dump());
  CHECK(run("compare " + path + " " + oracle) == 6);
}

TEST_CASE("disconnected anchors exit with code 3") {
  TempDir dir;
  std::string net = dir.file("net.json");
  nlohmann::json j;
  j["nodes"] = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {5.0, 0.0, 0.0}, {6.0, 0.0, 0.0}};
  j["elements"] = {{0, 1, 1.0, 0}, {2, 3, 1.0, 1}};
  j["split"] = false;
  j["anchors"] = {0, 3};
  j["source_vertices"] = 4;
  spit(net, j.dump());
  CHECK(run("solve " + net + " -o " + dir.file("result.json")) == 3);
}

TEST_CASE("bad inputs exit with code 2") {
  TempDir dir;
  std::string obj = dir.file("mesh.obj");
  CHECK(run("genmesh --kind flat --ncols 1 --nrows 5 --mesh quad -o " + obj) == 2);
  CHECK(run("convert missing.obj --anchor-a 0,0,0 --anchor-b 1,1,0 -o " + dir.file("n.json")) ==
        2);
  REQUIRE(run("genmesh --kind flat --ncols 5 --nrows 5 --mesh quad -o " + obj) == 0);
  CHECK(run("convert " + obj + " --anchor-a 900,900,0 --anchor-b 1,1,0 -o " +
            dir.file("n.json")) == 2);
  CHECK(run("nosuchcommand") == 2);
}

TEST_CASE("threshold too high exits with code 5") {
  TempDir dir;
  std::string obj = dir.file("mesh.obj");
  std::string net = dir.file("net.json");
  std::string result = dir.file("result.json");
  REQUIRE(run("genmesh --kind flat --ncols 6 --nrows 6 --mesh tri -o " + obj) == 0);
  REQUIRE(run("convert " + obj + " --split --anchor-a 0,0,0 --anchor-b 5,5,0 -o " + net) == 0);
  REQUIRE(run("solve " + net + " -o " + result) == 0);
  CHECK(run("extract " + result + " " + net + " " + obj + " --threshold 1.5 -o " +
            dir.file("p.geojson")) == 5);
}

TEST_CASE("flooded valley still solves around the water") {
  TempDir dir;
  std::string obj = dir.file("mesh.obj");
  std::string net = dir.file("net.json");
  std::string result = dir.file("result.json");
  std::string path = dir.file("path.geojson");
  std::string oracle = dir.file("oracle.json");
  REQUIRE(run("genmesh --kind valley --depth 6 --width 2 --axis x --ncols 17 --nrows 13 "
              "--mesh tri --flood-level 3 -o " +
              obj) == 0);
  REQUIRE(run("convert " + obj + " --split --anchor-a 0,0,0 --anchor-b 16,12,9 -o " + net) == 0);
  REQUIRE(run("solve " + net + " -o " + result) == 0);
  REQUIRE(run("extract " + result + " " + net + " " + obj + " --threshold 0.02 -o " + path) ==
          0);
  REQUIRE(run("oracle " + net + " -o " + oracle) == 0);
  CHECK(run("compare " + path + " " + oracle) == 0);
}

TEST_CASE("region mode emits a face set") {
  TempDir dir;
  std::string obj = dir.file("mesh.obj");
  std::string net = dir.file("net.json");
  std::string result = dir.file("result.json");
  std::string region = dir.file("region.json");
  REQUIRE(run("genmesh --kind gaussian_hill --amplitude 3 --sigma 2 --ncols 9 --nrows 9 "
              "--mesh tri -o " +
              obj) == 0);
  REQUIRE(run("convert " + obj + " --no-split --anchor-a 0,0,0 --anchor-b 8,8,0 -o " + net) == 0);
  REQUIRE(run("solve " + net + " -o " + result) == 0);
  REQUIRE(run("extract " + result + " " + net + " " + obj + " --mode region -o " + region) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(region));
  CHECK(j.at("faces").size() > 0);
  CHECK(j.at("quantile").get<double>() == 0.9);
}
