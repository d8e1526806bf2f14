#pragma once

#include <string>
#include <vector>

#include "tautpath/mesh.hpp"

namespace tautpath {

struct Edge {
  int v_min = 0;
  int v_max = 0;
  double rest_length = 0.0;
  std::vector<int> parent_faces;  // 1 or 2 face indices
};

struct EdgeSet {
  std::vector<Edge> edges;  // sorted by (v_min, v_max)
};

struct TrussElement {
  int node_i = 0;
  int node_j = 0;
  double rest_length = 0.0;
  int parent_edge = 0;
};

// Axial-element network. Original mesh vertices come first in `nodes`;
// when split, one midpoint node per edge follows them.
struct TrussNetwork {
  std::vector<Vec3> nodes;
  std::vector<TrussElement> elements;
  bool split = false;
  int anchor_a = 0;
  int anchor_b = 0;
  int source_vertex_count = 0;  // V of the source mesh

  bool is_midpoint(int node) const { return split && node >= source_vertex_count; }

  static TrussNetwork from_json(const std::string& text);
  std::string to_json() const;
};

EdgeSet extract_edges(const TerrainMesh& mesh);
int nearest_vertex(const TerrainMesh& mesh, const Vec3& point);
TrussNetwork build_truss(const TerrainMesh& mesh, bool split, const Vec3& anchor_a_point,
                         const Vec3& anchor_b_point);

}  // namespace tautpath
