#pragma once

#include <string>
#include <vector>

#include "tautpath/solver.hpp"

namespace tautpath {

struct PathSolution {
  std::vector<int> chain;        // original-mesh vertex indices, a..b
  std::vector<Vec3> polyline;    // undeformed positions of the chain
  double length = 0.0;           // sum of undeformed segment lengths
  std::vector<double> strain_profile;  // peak strain per chain segment
  bool ambiguity = false;
  std::vector<std::vector<int>> alternatives;  // further chains within the window
  std::vector<double> alternative_lengths;
};

struct RegionSolution {
  std::vector<int> faces;        // source-mesh face indices in the region
  std::vector<double> face_strain;  // mean positive peak strain per region face
  double quantile = 0.9;
};

PathSolution extract_chain(const SolveResult& result, const TrussNetwork& network,
                           double rel_threshold = 0.5, double alt_window = 0.02);

RegionSolution extract_region(const SolveResult& result, const TrussNetwork& network,
                              const TerrainMesh& mesh, double quantile = 0.9);

double path_length(const PathSolution& solution);

enum class PathFormat { GeoJson, Csv, ObjPolyline };
std::string export_path(const PathSolution& solution, PathFormat format);

// Inverse of export_path(GeoJson); used by the verification pipeline.
PathSolution import_path_geojson(const std::string& text);

std::string region_to_json(const RegionSolution& region);
RegionSolution region_from_json(const std::string& text);

}  // namespace tautpath
