#include "tautpath/truss.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "tautpath/errors.hpp"

namespace tautpath {

EdgeSet extract_edges(const TerrainMesh& mesh) {
  std::map<std::pair<int, int>, std::vector<int>> incident;
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    const size_t k = face.size();
    for (size_t e = 0; e < k; ++e) {
      auto key = std::minmax(face[e], face[(e + 1) % k]);
      incident[key].push_back(static_cast<int>(f));
    }
  }
  EdgeSet set;
  set.edges.reserve(incident.size());
  for (const auto& [key, faces] : incident) {
    Edge edge;
    edge.v_min = key.first;
    edge.v_max = key.second;
    edge.rest_length = distance(mesh.vertices[key.first], mesh.vertices[key.second]);
    edge.parent_faces = faces;
    set.edges.push_back(std::move(edge));
  }
  return set;
}

int nearest_vertex(const TerrainMesh& mesh, const Vec3& point) {
  int best = 0;
  double best_d2 = (mesh.vertices[0] - point).norm2();
  for (int i = 1; i < static_cast<int>(mesh.vertices.size()); ++i) {
    double d2 = (mesh.vertices[i] - point).norm2();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

TrussNetwork build_truss(const TerrainMesh& mesh, bool split, const Vec3& anchor_a_point,
                         const Vec3& anchor_b_point) {
  EdgeSet set = extract_edges(mesh);
  const int nv = static_cast<int>(mesh.vertices.size());
  const int ne = static_cast<int>(set.edges.size());

  std::vector<double> lengths;
  lengths.reserve(ne);
  for (const auto& e : set.edges) lengths.push_back(e.rest_length);
  std::sort(lengths.begin(), lengths.end());
  double median = lengths.empty() ? 0.0 : lengths[lengths.size() / 2];

  int a = nearest_vertex(mesh, anchor_a_point);
  int b = nearest_vertex(mesh, anchor_b_point);
  if (distance(mesh.vertices[a], anchor_a_point) > 10.0 * median) {
    throw AnchorTooFar("anchor A is farther than 10 median edge lengths from any vertex");
  }
  if (distance(mesh.vertices[b], anchor_b_point) > 10.0 * median) {
    throw AnchorTooFar("anchor B is farther than 10 median edge lengths from any vertex");
  }
  if (a == b) throw AnchorsCoincide("both anchors snap to vertex " + std::to_string(a));

  TrussNetwork net;
  net.split = split;
  net.anchor_a = a;
  net.anchor_b = b;
  net.source_vertex_count = nv;
  net.nodes = mesh.vertices;
  if (split) {
    net.nodes.reserve(nv + ne);
    net.elements.reserve(2 * ne);
    for (int e = 0; e < ne; ++e) {
      const Edge& edge = set.edges[e];
      Vec3 mid = (mesh.vertices[edge.v_min] + mesh.vertices[edge.v_max]) * 0.5;
      int mid_node = nv + e;
      net.nodes.push_back(mid);
      double half = edge.rest_length / 2.0;
      net.elements.push_back({edge.v_min, mid_node, half, e});
      net.elements.push_back({mid_node, edge.v_max, half, e});
    }
  } else {
    net.elements.reserve(ne);
    for (int e = 0; e < ne; ++e) {
      const Edge& edge = set.edges[e];
      net.elements.push_back({edge.v_min, edge.v_max, edge.rest_length, e});
    }
  }
  return net;
}

TrussNetwork TrussNetwork::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TrussNetwork net;
  for (const auto& node : j.at("nodes")) {
    net.nodes.push_back({node.at(0).get<double>(), node.at(1).get<double>(),
                         node.at(2).get<double>()});
  }
  for (const auto& el : j.at("elements")) {
    net.elements.push_back({el.at(0).get<int>(), el.at(1).get<int>(), el.at(2).get<double>(),
                            el.at(3).get<int>()});
  }
  net.split = j.at("split").get<bool>();
  net.anchor_a = j.at("anchors").at(0).get<int>();
  net.anchor_b = j.at("anchors").at(1).get<int>();
  net.source_vertex_count =
      j.contains("source_vertices") ? j.at("source_vertices").get<int>()
                                    : static_cast<int>(net.nodes.size());
  return net;
}

std::string TrussNetwork::to_json() const {
  nlohmann::json j;
  auto& nodes_j = j["nodes"] = nlohmann::json::array();
  for (const auto& n : nodes) nodes_j.push_back({n.x, n.y, n.z});
  auto& els_j = j["elements"] = nlohmann::json::array();
  for (const auto& e : elements) els_j.push_back({e.node_i, e.node_j, e.rest_length, e.parent_edge});
  j["split"] = split;
  j["anchors"] = {anchor_a, anchor_b};
  j["source_vertices"] = source_vertex_count;
  return j.dump();
}

}  // namespace tautpath
