#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tautpath/geometry.hpp"
#include "tautpath/heightfield.hpp"

namespace tautpath {

enum class MeshProvenance { StructuredQuad, StructuredTri, Unstructured, Imported };

// Indexed surface mesh; faces are homogeneous (all tris or all quads).
struct TerrainMesh {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;  // 3 or 4 indices each
  MeshProvenance provenance = MeshProvenance::Imported;

  void validate() const;  // throws on invariant violation
};

enum class Diagonal { TowardNE, TowardNW };

struct RegionMask {
  std::vector<int> excluded_vertices;  // indices into the *source* mesh
  std::vector<int> vertex_remap;       // source index -> surviving index, or -1
  bool flood_cause = false;
  double flood_level = 0.0;
  bool disconnected = false;  // informational; set by callers that know anchors
};

struct ValidationReport {
  int duplicate_vertex_pairs = 0;
  int nonmanifold_edges = 0;
  int degenerate_faces = 0;
  int connected_components = 0;
  bool clean() const {
    return duplicate_vertex_pairs == 0 && nonmanifold_edges == 0 && degenerate_faces == 0;
  }
};

TerrainMesh mesh_structured_quad(const HeightField& hf);
TerrainMesh mesh_structured_tri(const HeightField& hf, Diagonal diagonal);
TerrainMesh mesh_unstructured(const HeightField& hf, double target_spacing, std::uint64_t seed);

TerrainMesh load_obj(const std::string& text);
std::string save_obj(const TerrainMesh& mesh);

std::pair<TerrainMesh, RegionMask> apply_flood_mask(const TerrainMesh& mesh, double level);
ValidationReport validate_mesh(const TerrainMesh& mesh);

}  // namespace tautpath
