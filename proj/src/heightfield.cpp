#include "tautpath/heightfield.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"
#include "tautpath/errors.hpp"

namespace tautpath {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Locale-independent float parse (dot decimal separator only).
double parse_double(const std::string& token, const char* what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw MalformedHeader(std::string("cannot parse number '") + token + "' in " + what);
  }
  return value;
}

}  // namespace

double HeightField::interpolate(double x, double y) const {
  double fc = (x - origin_x) / cellsize;
  double fr = (nrows - 1) - (y - origin_y) / cellsize;
  fc = std::clamp(fc, 0.0, static_cast<double>(ncols - 1));
  fr = std::clamp(fr, 0.0, static_cast<double>(nrows - 1));
  int c0 = std::min(static_cast<int>(fc), ncols - 2);
  int r0 = std::min(static_cast<int>(fr), nrows - 2);
  double tc = fc - c0;
  double tr = fr - r0;
  double z00 = at(r0, c0);
  double z01 = at(r0, c0 + 1);
  double z10 = at(r0 + 1, c0);
  double z11 = at(r0 + 1, c0 + 1);
  return z00 * (1 - tr) * (1 - tc) + z01 * (1 - tr) * tc + z10 * tr * (1 - tc) +
         z11 * tr * tc;
}

void HeightField::validate() const {
  if (ncols < 2 || nrows < 2) throw InvalidSpec("heightfield needs ncols >= 2 and nrows >= 2");
  if (!(cellsize > 0.0)) throw InvalidSpec("cellsize must be > 0");
  if (samples.size() != static_cast<size_t>(ncols) * nrows) {
    throw DimensionMismatch("sample count != nrows * ncols");
  }
  for (double s : samples) {
    if (s != nodata && !std::isfinite(s)) throw NonFiniteSample("non-finite sample");
  }
}

HeightField load_heightfield(const std::string& text) {
  std::istringstream in(text);
  std::map<std::string, double> header;
  std::string key;
  for (int i = 0; i < 6; ++i) {
    std::string value;
    if (!(in >> key >> value)) throw MalformedHeader("incomplete header");
    key = to_lower(key);
    if (header.count(key)) throw MalformedHeader("duplicate header key " + key);
    header[key] = parse_double(value, key.c_str());
  }
  for (const char* required : {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize",
                               "nodata_value"}) {
    if (!header.count(required)) throw MalformedHeader(std::string("missing key ") + required);
  }

  HeightField hf;
  hf.ncols = static_cast<int>(header["ncols"]);
  hf.nrows = static_cast<int>(header["nrows"]);
  hf.origin_x = header["xllcorner"];
  hf.origin_y = header["yllcorner"];
  hf.cellsize = header["cellsize"];
  hf.nodata = header["nodata_value"];

  std::string token;
  while (in >> token) {
    hf.samples.push_back(parse_double(token, "data"));
  }
  if (hf.samples.size() != static_cast<size_t>(hf.ncols) * hf.nrows) {
    throw DimensionMismatch("expected " + std::to_string(hf.ncols * hf.nrows) +
                            " samples, got " + std::to_string(hf.samples.size()));
  }
  hf.validate();
  return hf;
}

std::string save_heightfield(const HeightField& hf) {
  std::ostringstream out;
  out.precision(17);
  out << "ncols " << hf.ncols << "\n";
  out << "nrows " << hf.nrows << "\n";
  out << "xllcorner " << hf.origin_x << "\n";
  out << "yllcorner " << hf.origin_y << "\n";
  out << "cellsize " << hf.cellsize << "\n";
  out << "NODATA_value " << hf.nodata << "\n";
  for (int r = 0; r < hf.nrows; ++r) {
    for (int c = 0; c < hf.ncols; ++c) {
      if (c) out << ' ';
      out << hf.at(r, c);
    }
    out << "\n";
  }
  return out.str();
}

namespace {

// Lattice value noise, smoothstep-interpolated, keyed on (seed, octave, cell).
double value_noise(std::uint64_t seed, int octave, double x, double y) {
  auto lattice = [&](std::int64_t ix, std::int64_t iy) {
    std::uint64_t h = hash_combine(seed, hash_combine(static_cast<std::uint64_t>(octave),
                                                      hash_combine(static_cast<std::uint64_t>(ix),
                                                                   static_cast<std::uint64_t>(iy))));
    return u64_to_unit(h) * 2.0 - 1.0;
  };
  std::int64_t ix = static_cast<std::int64_t>(std::floor(x));
  std::int64_t iy = static_cast<std::int64_t>(std::floor(y));
  double tx = x - ix;
  double ty = y - iy;
  double sx = tx * tx * (3 - 2 * tx);
  double sy = ty * ty * (3 - 2 * ty);
  double v00 = lattice(ix, iy);
  double v01 = lattice(ix + 1, iy);
  double v10 = lattice(ix, iy + 1);
  double v11 = lattice(ix + 1, iy + 1);
  double a = v00 + sx * (v01 - v00);
  double b = v10 + sx * (v11 - v10);
  return a + sy * (b - a);
}

double fbm_noise(std::uint64_t seed, int octaves, double roughness, double x, double y) {
  double sum = 0.0;
  double amp = 1.0;
  double freq = 1.0;
  double norm = 0.0;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * value_noise(seed, o, x * freq, y * freq);
    norm += amp;
    amp *= roughness;
    freq *= 2.0;
  }
  return norm > 0.0 ? sum / norm : 0.0;
}

}  // namespace

HeightField synth_heightfield(const TerrainSpec& spec) {
  if (spec.ncols < 2 || spec.nrows < 2) throw InvalidSpec("extent needs ncols,nrows >= 2");
  if (!(spec.cellsize > 0.0)) throw InvalidSpec("cellsize must be > 0");
  if (spec.kind == TerrainKind::GaussianHill && !(spec.sigma > 0.0)) {
    throw InvalidSpec("sigma must be > 0");
  }
  if (spec.kind == TerrainKind::Valley && !(spec.width > 0.0)) {
    throw InvalidSpec("width must be > 0");
  }
  if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.sigma) ||
      !std::isfinite(spec.depth) || !std::isfinite(spec.width)) {
    throw InvalidSpec("non-finite spec parameter");
  }

  HeightField hf;
  hf.ncols = spec.ncols;
  hf.nrows = spec.nrows;
  hf.cellsize = spec.cellsize;
  hf.samples.resize(static_cast<size_t>(spec.ncols) * spec.nrows, 0.0);

  double width_x = (spec.ncols - 1) * spec.cellsize;
  double width_y = (spec.nrows - 1) * spec.cellsize;
  double cx = hf.origin_x + width_x / 2.0;
  double cy = hf.origin_y + width_y / 2.0;

  for (int r = 0; r < hf.nrows; ++r) {
    for (int c = 0; c < hf.ncols; ++c) {
      double x = hf.world_x(c);
      double y = hf.world_y(r);
      double z = 0.0;
      switch (spec.kind) {
        case TerrainKind::Flat:
          break;
        case TerrainKind::GaussianHill: {
          double dx = x - spec.center_x;
          double dy = y - spec.center_y;
          z = spec.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * spec.sigma * spec.sigma));
          break;
        }
        case TerrainKind::Valley: {
          // Valley floor along the chosen axis through the center, walls of
          // height `depth`, and a raised sill toward the domain ends so that
          // mid-depth flooding leaves a dry connection around the valley.
          double u = (spec.axis == 'x') ? (y - cy) : (x - cx);
          double along = (spec.axis == 'x') ? (x - cx) : (y - cy);
          double half = ((spec.axis == 'x') ? width_x : width_y) / 2.0;
          double v = half > 0.0 ? along / half : 0.0;
          double wall = 1.0 - std::exp(-(u * u) / (spec.width * spec.width));
          z = spec.depth * wall + 0.7 * spec.depth * (1.0 - wall) * v * v;
          break;
        }
        case TerrainKind::Fbm: {
          double scale = 4.0 / std::max(width_x, width_y);
          z = spec.amplitude * fbm_noise(spec.seed, spec.octaves, spec.roughness,
                                         x * scale, y * scale);
          break;
        }
      }
      hf.at(r, c) = z;
    }
  }
  hf.validate();
  return hf;
}

TerrainSpec TerrainSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TerrainSpec s;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "flat") {
    s.kind = TerrainKind::Flat;
  } else if (kind == "gaussian_hill") {
    s.kind = TerrainKind::GaussianHill;
    auto center = j.at("center");
    s.center_x = center.at(0).get<double>();
    s.center_y = center.at(1).get<double>();
    s.amplitude = j.at("amplitude").get<double>();
    s.sigma = j.at("sigma").get<double>();
  } else if (kind == "valley") {
    s.kind = TerrainKind::Valley;
    s.axis = j.at("axis").get<std::string>().at(0);
    s.depth = j.at("depth").get<double>();
    s.width = j.at("width").get<double>();
  } else if (kind == "fbm") {
    s.kind = TerrainKind::Fbm;
    s.octaves = j.at("octaves").get<int>();
    s.roughness = j.at("roughness").get<double>();
    s.amplitude = j.at("amplitude").get<double>();
  } else {
    throw InvalidSpec("unknown terrain kind " + kind);
  }
  auto extent = j.at("extent");
  s.ncols = extent.at("ncols").get<int>();
  s.nrows = extent.at("nrows").get<int>();
  s.cellsize = extent.at("cellsize").get<double>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

std::string TerrainSpec::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case TerrainKind::Flat:
      j["kind"] = "flat";
      break;
    case TerrainKind::GaussianHill:
      j["kind"] = "gaussian_hill";
      j["center"] = {center_x, center_y};
      j["amplitude"] = amplitude;
      j["sigma"] = sigma;
      break;
    case TerrainKind::Valley:
      j["kind"] = "valley";
      j["axis"] = std::string(1, axis);
      j["depth"] = depth;
      j["width"] = width;
      break;
    case TerrainKind::Fbm:
      j["kind"] = "fbm";
      j["octaves"] = octaves;
      j["roughness"] = roughness;
      j["amplitude"] = amplitude;
      break;
  }
  j["extent"] = {{"ncols", ncols}, {"nrows", nrows}, {"cellsize", cellsize}};
  j["seed"] = seed;
  return j.dump(2);
}

}  // namespace tautpath
