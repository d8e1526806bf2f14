#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tautpath/geometry.hpp"

namespace tautpath {

// Regular elevation grid. Row 0 is the northernmost row (ESRI ASCII
// convention), so world y decreases with increasing row index.
struct HeightField {
  int ncols = 0;
  int nrows = 0;
  double origin_x = 0.0;  // x of the lower-left sample
  double origin_y = 0.0;  // y of the lower-left sample
  double cellsize = 1.0;
  double nodata = -9999.0;
  std::vector<double> samples;  // nrows * ncols, row-major

  double at(int r, int c) const { return samples[static_cast<size_t>(r) * ncols + c]; }
  double& at(int r, int c) { return samples[static_cast<size_t>(r) * ncols + c]; }
  bool is_nodata(int r, int c) const { return at(r, c) == nodata; }

  // World position of sample (r, c).
  double world_x(int c) const { return origin_x + c * cellsize; }
  double world_y(int r) const { return origin_y + (nrows - 1 - r) * cellsize; }

  // Bilinear interpolation at world (x, y); clamps to the grid hull.
  double interpolate(double x, double y) const;

  void validate() const;  // throws on invariant violation
};

enum class TerrainKind { Flat, GaussianHill, Valley, Fbm };

struct TerrainSpec {
  TerrainKind kind = TerrainKind::Flat;
  int ncols = 2;
  int nrows = 2;
  double cellsize = 1.0;
  // gaussian_hill
  double center_x = 0.0, center_y = 0.0;
  double amplitude = 0.0;
  double sigma = 1.0;
  // valley
  char axis = 'x';
  double depth = 0.0;
  double width = 1.0;
  // fbm
  int octaves = 4;
  double roughness = 0.5;
  std::uint64_t seed = 0;

  static TerrainSpec from_json(const std::string& text);
  std::string to_json() const;
};

HeightField load_heightfield(const std::string& text);
std::string save_heightfield(const HeightField& hf);
HeightField synth_heightfield(const TerrainSpec& spec);

}  // namespace tautpath
