#pragma once

#include <string>

#include "tautpath/extract.hpp"

namespace tautpath {

struct RenderInputs {
  const TerrainMesh* mesh = nullptr;          // required
  const TrussNetwork* network = nullptr;      // optional, enables strain coloring
  const SolveResult* result = nullptr;        // optional, needs network
  const PathSolution* path = nullptr;         // optional
  const RegionSolution* region = nullptr;     // optional
};

// Top-down orthographic SVG of the undeformed mesh. Elements colored by
// peak strain on a linear ramp #2060c0 -> #d02020 with a numeric legend;
// paths as 2px black polylines; region faces filled at 50% opacity.
std::string render_svg(const RenderInputs& inputs);

}  // namespace tautpath
