#include "tautpath/extract.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tautpath/errors.hpp"

namespace tautpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TautEdge {
  int u, v;        // original vertex indices
  double length;   // full parent-edge rest length
  double strain;   // peak strain (max over halves when split)
};

// Shortest a-b chain through the given edge subset; empty when disconnected.
std::pair<std::vector<int>, double> chain_through(
    const std::vector<TautEdge>& edges, int node_count, int a, int b,
    const std::set<std::pair<int, int>>& banned) {
  std::vector<std::vector<std::pair<int, double>>> adj(node_count);
  for (const auto& e : edges) {
    auto key = std::minmax(e.u, e.v);
    if (banned.count(key)) continue;
    adj[e.u].push_back({e.v, e.length});
    adj[e.v].push_back({e.u, e.length});
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  std::vector<double> dist(node_count, kInf);
  std::vector<int> pred(node_count, -1);
  std::vector<bool> settled(node_count, false);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[a] = 0.0;
  heap.push({0.0, a});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = true;
    if (u == b) break;
    for (const auto& [v, w] : adj[u]) {
      double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        pred[v] = u;
        heap.push({nd, v});
      }
    }
  }
  if (!std::isfinite(dist[b])) return {{}, kInf};
  std::vector<int> chain;
  for (int v = b; v != -1; v = pred[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  return {chain, dist[b]};
}

}  // namespace

PathSolution extract_chain(const SolveResult& result, const TrussNetwork& network,
                           double rel_threshold, double alt_window) {
  if (result.cause != Termination::Taut) {
    throw Error("extract_chain requires a taut solve result");
  }
  double max_peak = 0.0;
  for (double s : result.peak_strains) max_peak = std::max(max_peak, s);
  double cut = rel_threshold * max_peak;

  // Collect taut parent edges; a split pair joins when either half passes.
  std::map<std::pair<int, int>, TautEdge> merged;
  if (network.split) {
    std::map<int, std::pair<std::vector<int>, double>> per_parent;  // ends, total length
    std::map<int, double> parent_peak;
    for (size_t e = 0; e < network.elements.size(); ++e) {
      const auto& el = network.elements[e];
      auto& entry = per_parent[el.parent_edge];
      int orig = network.is_midpoint(el.node_i) ? el.node_j : el.node_i;
      entry.first.push_back(orig);
      entry.second += el.rest_length;
      double& peak = parent_peak[el.parent_edge];
      peak = std::max(peak, result.peak_strains[e]);
    }
    for (const auto& [parent, entry] : per_parent) {
      if (parent_peak[parent] < cut) continue;
      auto key = std::minmax(entry.first[0], entry.first[1]);
      merged[key] = {key.first, key.second, entry.second, parent_peak[parent]};
    }
  } else {
    for (size_t e = 0; e < network.elements.size(); ++e) {
      if (result.peak_strains[e] < cut) continue;
      const auto& el = network.elements[e];
      auto key = std::minmax(el.node_i, el.node_j);
      merged[key] = {key.first, key.second, el.rest_length, result.peak_strains[e]};
    }
  }
  std::vector<TautEdge> taut;
  taut.reserve(merged.size());
  for (const auto& [key, edge] : merged) taut.push_back(edge);

  const int nv = network.source_vertex_count;
  auto [chain, length] = chain_through(taut, nv, network.anchor_a, network.anchor_b, {});
  if (chain.empty()) {
    throw NoChain("taut set does not connect the anchors; lower rel_threshold");
  }

  PathSolution sol;
  sol.chain = chain;
  sol.length = length;
  std::map<std::pair<int, int>, double> strain_of;
  for (const auto& e : taut) strain_of[{e.u, e.v}] = e.strain;
  for (size_t i = 0; i < chain.size(); ++i) {
    sol.polyline.push_back(network.nodes[chain[i]]);
    if (i + 1 < chain.size()) {
      sol.strain_profile.push_back(strain_of[std::minmax(chain[i], chain[i + 1])]);
    }
  }

  // Alternatives: peel edge-disjoint chains while they stay inside the window.
  std::set<std::pair<int, int>> banned;
  std::vector<int> current = chain;
  while (true) {
    for (size_t i = 0; i + 1 < current.size(); ++i) {
      banned.insert(std::minmax(current[i], current[i + 1]));
    }
    auto [alt, alt_len] = chain_through(taut, nv, network.anchor_a, network.anchor_b, banned);
    if (alt.empty() || alt_len > (1.0 + alt_window) * sol.length) break;
    sol.alternatives.push_back(alt);
    sol.alternative_lengths.push_back(alt_len);
    current = alt;
  }
  sol.ambiguity = !sol.alternatives.empty();
  return sol;
}

RegionSolution extract_region(const SolveResult& result, const TrussNetwork& network,
                              const TerrainMesh& mesh, double quantile) {
  if (network.split) throw Error("extract_region expects a surface-mode (unsplit) network");
  if (quantile < 0.0 || quantile >= 1.0) {
    if (quantile != 0.0) throw InvalidSpec("quantile must be in [0, 1)");
  }
  EdgeSet set = extract_edges(mesh);
  // Element order mirrors edge order for unsplit networks.
  std::vector<double> face_scalar(mesh.faces.size(), 0.0);
  std::vector<int> face_edges(mesh.faces.size(), 0);
  for (size_t e = 0; e < set.edges.size(); ++e) {
    double s = std::max(result.peak_strains[e], 0.0);
    for (int f : set.edges[e].parent_faces) {
      face_scalar[f] += s;
      ++face_edges[f];
    }
  }
  for (size_t f = 0; f < face_scalar.size(); ++f) {
    if (face_edges[f] > 0) face_scalar[f] /= face_edges[f];
  }

  std::vector<double> sorted = face_scalar;
  std::sort(sorted.begin(), sorted.end());
  size_t idx = static_cast<size_t>(quantile * sorted.size());
  idx = std::min(idx, sorted.size() - 1);
  double threshold = sorted[idx];

  RegionSolution region;
  region.quantile = quantile;
  for (size_t f = 0; f < face_scalar.size(); ++f) {
    if (face_scalar[f] >= threshold) {
      region.faces.push_back(static_cast<int>(f));
      region.face_strain.push_back(face_scalar[f]);
    }
  }
  return region;
}

double path_length(const PathSolution& solution) {
  double length = 0.0;
  for (size_t i = 0; i + 1 < solution.polyline.size(); ++i) {
    length += distance(solution.polyline[i], solution.polyline[i + 1]);
  }
  return length;
}

namespace {

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

}  // namespace

std::string export_path(const PathSolution& sol, PathFormat format) {
  std::ostringstream out;
  switch (format) {
    case PathFormat::GeoJson: {
      nlohmann::json coords = nlohmann::json::array();
      for (const auto& p : sol.polyline) {
        coords.push_back({nlohmann::json::parse(fmt9(p.x)), nlohmann::json::parse(fmt9(p.y)),
                          nlohmann::json::parse(fmt9(p.z))});
      }
      nlohmann::json j;
      j["type"] = "Feature";
      j["geometry"] = {{"type", "LineString"}, {"coordinates", coords}};
      j["properties"] = {{"length_m", sol.length},
                         {"ambiguity", sol.ambiguity},
                         {"alternatives", sol.alternatives.size()},
                         {"chain", sol.chain}};
      out << j.dump(2) << "\n";
      break;
    }
    case PathFormat::Csv: {
      out << "index,x,y,z,cumulative_length,strain\n";
      double cum = 0.0;
      for (size_t i = 0; i < sol.polyline.size(); ++i) {
        if (i > 0) cum += distance(sol.polyline[i - 1], sol.polyline[i]);
        double strain = i < sol.strain_profile.size() ? sol.strain_profile[i] : 0.0;
        out << i << ',' << fmt9(sol.polyline[i].x) << ',' << fmt9(sol.polyline[i].y) << ','
            << fmt9(sol.polyline[i].z) << ',' << fmt9(cum) << ',' << strain << "\n";
      }
      break;
    }
    case PathFormat::ObjPolyline: {
      for (const auto& p : sol.polyline) {
        out << "v " << fmt9(p.x) << ' ' << fmt9(p.y) << ' ' << fmt9(p.z) << "\n";
      }
      out << 'l';
      for (size_t i = 1; i <= sol.polyline.size(); ++i) out << ' ' << i;
      out << "\n";
      break;
    }
  }
  return out.str();
}

PathSolution import_path_geojson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PathSolution sol;
  for (const auto& c : j.at("geometry").at("coordinates")) {
    sol.polyline.push_back({c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()});
  }
  const auto& props = j.at("properties");
  sol.length = props.at("length_m").get<double>();
  sol.ambiguity = props.at("ambiguity").get<bool>();
  if (props.contains("chain")) sol.chain = props.at("chain").get<std::vector<int>>();
  return sol;
}

std::string region_to_json(const RegionSolution& region) {
  nlohmann::json j;
  j["faces"] = region.faces;
  j["face_strain"] = region.face_strain;
  j["quantile"] = region.quantile;
  return j.dump(2);
}

RegionSolution region_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RegionSolution region;
  region.faces = j.at("faces").get<std::vector<int>>();
  region.face_strain = j.at("face_strain").get<std::vector<double>>();
  region.quantile = j.at("quantile").get<double>();
  return region;
}

}  // namespace tautpath
