#include "tautpath/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "tautpath/errors.hpp"

namespace tautpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Adjacency {
  // node -> list of (neighbor, weight); midpoints of split networks are
  // contracted so each parent edge appears as one weight.
  std::vector<std::vector<std::pair<int, double>>> neighbors;
};

Adjacency build_adjacency(const TrussNetwork& net) {
  Adjacency adj;
  adj.neighbors.resize(net.nodes.size());
  auto add = [&](int u, int v, double w) {
    adj.neighbors[u].push_back({v, w});
    adj.neighbors[v].push_back({u, w});
  };
  if (!net.split) {
    for (const auto& e : net.elements) add(e.node_i, e.node_j, e.rest_length);
  } else {
    // Elements come in pairs per parent edge; recombine them so the split
    // and unsplit graphs carry bit-identical weights.
    std::vector<double> total;
    int max_parent = -1;
    for (const auto& e : net.elements) max_parent = std::max(max_parent, e.parent_edge);
    std::vector<std::array<int, 2>> parent_ends(max_parent + 1, {-1, -1});
    total.assign(max_parent + 1, 0.0);
    for (const auto& e : net.elements) {
      int orig = net.is_midpoint(e.node_i) ? e.node_j : e.node_i;
      auto& pe = parent_ends[e.parent_edge];
      if (pe[0] < 0) {
        pe[0] = orig;
      } else {
        pe[1] = orig;
      }
      total[e.parent_edge] += e.rest_length;
    }
    for (size_t p = 0; p < parent_ends.size(); ++p) {
      if (parent_ends[p][0] >= 0 && parent_ends[p][1] >= 0) {
        add(parent_ends[p][0], parent_ends[p][1], total[p]);
      }
    }
  }
  // Deterministic relaxation order.
  for (auto& list : adj.neighbors) std::sort(list.begin(), list.end());
  return adj;
}

}  // namespace

bool GraphDistanceResult::reachable() const { return std::isfinite(distance); }

GraphDistanceResult dijkstra(const TrussNetwork& network, int a, int b) {
  if (a < 0 || a >= static_cast<int>(network.nodes.size()) || b < 0 ||
      b >= static_cast<int>(network.nodes.size())) {
    throw IndexOutOfRange("dijkstra: node index out of range");
  }
  Adjacency adj = build_adjacency(network);
  const int n = static_cast<int>(adj.neighbors.size());
  std::vector<double> dist(n, kInf);
  std::vector<int> pred(n, -1);
  std::vector<bool> settled(n, false);

  using Item = std::pair<double, int>;  // (distance, node); ties by node index
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[a] = 0.0;
  heap.push({0.0, a});
  GraphDistanceResult result;
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = true;
    ++result.settled;
    if (u == b) break;
    for (const auto& [v, w] : adj.neighbors[u]) {
      double nd = d + w;
      if (nd < dist[v] || (nd == dist[v] && pred[v] >= 0 && u < pred[v])) {
        dist[v] = nd;
        pred[v] = u;
        heap.push({nd, v});
      }
    }
  }
  result.distance = dist[b];
  if (result.reachable()) {
    for (int v = b; v != -1; v = pred[v]) result.chain.push_back(v);
    std::reverse(result.chain.begin(), result.chain.end());
  }
  return result;
}

double bellman_ford_distance(const TrussNetwork& network, int a, int b) {
  Adjacency adj = build_adjacency(network);
  const int n = static_cast<int>(adj.neighbors.size());
  std::vector<double> dist(n, kInf);
  dist[a] = 0.0;
  for (int pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (int u = 0; u < n; ++u) {
      if (!std::isfinite(dist[u])) continue;
      for (const auto& [v, w] : adj.neighbors[u]) {
        if (dist[u] + w < dist[v]) {
          dist[v] = dist[u] + w;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return dist[b];
}

std::uint64_t count_shortest_paths(const TrussNetwork& network, int a, int b, double rel_tol) {
  Adjacency adj = build_adjacency(network);
  const int n = static_cast<int>(adj.neighbors.size());

  auto sssp = [&](int src) {
    std::vector<double> dist(n, kInf);
    std::vector<bool> settled(n, false);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[src] = 0.0;
    heap.push({0.0, src});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (settled[u]) continue;
      settled[u] = true;
      for (const auto& [v, w] : adj.neighbors[u]) {
        if (d + w < dist[v]) {
          dist[v] = d + w;
          heap.push({dist[v], v});
        }
      }
    }
    return dist;
  };

  std::vector<double> da = sssp(a);
  std::vector<double> db = sssp(b);
  double d = da[b];
  if (!std::isfinite(d)) throw Unreachable("no path between the query nodes");
  double cutoff = d * (1.0 + rel_tol) + 1e-300;

  // Count over the DAG of tight edges, in order of increasing distance from a.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int u, int v) {
    if (da[u] != da[v]) return da[u] < da[v];
    return u < v;
  });
  constexpr std::uint64_t kSat = 0x7fffffffffffffffull;
  std::vector<std::uint64_t> count(n, 0);
  count[a] = 1;
  for (int u : order) {
    if (count[u] == 0 || !std::isfinite(da[u])) continue;
    for (const auto& [v, w] : adj.neighbors[u]) {
      bool tight = da[u] + w + db[v] <= cutoff && da[u] + w <= da[v] * (1.0 + rel_tol) + 1e-300;
      if (tight && da[u] < da[v]) {
        std::uint64_t sum = count[v] + count[u];
        count[v] = (sum < count[v] || sum > kSat) ? kSat : sum;
      }
    }
  }
  return count[b];
}

double euclidean_bound(const TrussNetwork& network, int a, int b) {
  return distance(network.nodes[a], network.nodes[b]);
}

double sphere_geodesic(const Vec3& p, const Vec3& q, double radius) {
  if (std::abs(p.norm() - radius) > 1e-9 || std::abs(q.norm() - radius) > 1e-9) {
    throw NotOnSphere("point is not on the sphere of the given radius");
  }
  double c = std::clamp(p.dot(q) / (radius * radius), -1.0, 1.0);
  return radius * std::acos(c);
}

}  // namespace tautpath
