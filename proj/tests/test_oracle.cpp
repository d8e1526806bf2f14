#include <cmath>
#include <functional>
#include <set>

#include "doctest.h"
#include "tautpath/errors.hpp"
#include "tautpath/mesh.hpp"
#include "tautpath/oracle.hpp"
#include "tautpath/truss.hpp"

using namespace tautpath;

namespace {

TerrainMesh flat_quad_grid(int n) {
  TerrainSpec spec;
  spec.ncols = n;
  spec.nrows = n;
  return mesh_structured_quad(synth_heightfield(spec));
}

// Exhaustive count of simple a-b paths with length within rel_tol of best.
std::uint64_t brute_force_count(const TrussNetwork& net, int a, int b, double best,
                                double rel_tol) {
  std::vector<std::vector<std::pair<int, double>>> adj(net.nodes.size());
  for (const auto& el : net.elements) {
    adj[el.node_i].push_back({el.node_j, el.rest_length});
    adj[el.node_j].push_back({el.node_i, el.rest_length});
  }
  std::uint64_t count = 0;
  std::vector<bool> visited(net.nodes.size(), false);
  std::function<void(int, double)> dfs = [&](int u, double len) {
    if (len > (1.0 + rel_tol) * best) return;
    if (u == b) {
      ++count;
      return;
    }
    visited[u] = true;
    for (auto [v, w] : adj[u]) {
      if (!visited[v]) dfs(v, len + w);
    }
    visited[u] = false;
  };
  dfs(a, 0.0);
  return count;
}

}  // namespace

TEST_CASE("single split edge distance is the full rest length") {
  TrussNetwork net;
  net.nodes = {{0, 0, 0}, {3, 0, 0}, {1.5, 0, 0}};
  net.elements = {{0, 2, 1.5, 0}, {2, 1, 1.5, 0}};
  net.split = true;
  net.source_vertex_count = 2;
  net.anchor_b = 1;
  GraphDistanceResult r = dijkstra(net, 0, 1);
  CHECK(r.distance == 3.0);
  CHECK(r.chain == std::vector<int>{0, 1});
}

TEST_CASE("flat 3x3 quad corners give taxicab distance 4") {
  TerrainMesh mesh = flat_quad_grid(3);
  TrussNetwork net = build_truss(mesh, false, mesh.vertices[6], mesh.vertices[2]);
  GraphDistanceResult r = dijkstra(net, net.anchor_a, net.anchor_b);
  CHECK(r.distance == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(r.chain.size() == 5);
  CHECK(r.chain.front() == net.anchor_a);
  CHECK(r.chain.back() == net.anchor_b);
}

TEST_CASE("chain edge lengths sum to the reported distance") {
  TerrainSpec spec;
  spec.kind = TerrainKind::Fbm;
  spec.ncols = 12;
  spec.nrows = 12;
  spec.amplitude = 3.0;
  spec.seed = 17;
  TerrainMesh mesh = mesh_unstructured(synth_heightfield(spec), 1.2, 17);
  TrussNetwork net = build_truss(mesh, false, {0, 0, 0}, {11, 11, 0});
  GraphDistanceResult r = dijkstra(net, net.anchor_a, net.anchor_b);
  double sum = 0.0;
  for (size_t i = 0; i + 1 < r.chain.size(); ++i) {
    sum += distance(net.nodes[r.chain[i]], net.nodes[r.chain[i + 1]]);
  }
  CHECK(sum == doctest::Approx(r.distance).epsilon(1e-12));
}

TEST_CASE("dijkstra agrees with bellman-ford on random terrains") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TerrainSpec spec;
    spec.kind = TerrainKind::Fbm;
    spec.ncols = 20;
    spec.nrows = 20;
    spec.amplitude = 4.0;
    spec.seed = seed;
    TerrainMesh mesh = mesh_unstructured(synth_heightfield(spec), 1.7, seed);
    bool split = seed % 2 == 0;
    TrussNetwork net = build_truss(mesh, split, {0, 0, 0}, {19, 19, 0});
    double d = dijkstra(net, net.anchor_a, net.anchor_b).distance;
    CHECK(d == bellman_ford_distance(net, net.anchor_a, net.anchor_b));
  }
}

TEST_CASE("unreachable pairs report infinite distance") {
  TrussNetwork net;
  net.nodes = {{0, 0, 0}, {1, 0, 0}, {5, 0, 0}, {6, 0, 0}};
  net.elements = {{0, 1, 1.0, 0}, {2, 3, 1.0, 1}};
  net.source_vertex_count = 4;
  net.anchor_b = 3;
  GraphDistanceResult r = dijkstra(net, 0, 3);
  CHECK_FALSE(r.reachable());
  CHECK(std::isinf(bellman_ford_distance(net, 0, 3)));
}

TEST_CASE("triangle inequality over sampled triples") {
  TerrainSpec spec;
  spec.kind = TerrainKind::GaussianHill;
  spec.ncols = 10;
  spec.nrows = 10;
  spec.center_x = 4.5;
  spec.center_y = 4.5;
  spec.amplitude = 4.0;
  spec.sigma = 2.0;
  TerrainMesh mesh = mesh_unstructured(synth_heightfield(spec), 1.4, 9);
  TrussNetwork net = build_truss(mesh, false, {0, 0, 0}, {9, 9, 0});
  int nv = static_cast<int>(net.nodes.size());
  for (std::uint64_t k = 0; k < 15; ++k) {
    int a = static_cast<int>(hash_u64(k * 3) % nv);
    int b = static_cast<int>(hash_u64(k * 3 + 1) % nv);
    int c = static_cast<int>(hash_u64(k * 3 + 2) % nv);
    if (a == b || b == c || a == c) continue;
    double ab = dijkstra(net, a, b).distance;
    double ac = dijkstra(net, a, c).distance;
    double cb = dijkstra(net, c, b).distance;
    CHECK(ab <= ac + cb + 1e-12 * ab);
  }
}

TEST_CASE("flood masking never shortens the distance") {
  TerrainSpec spec;
  spec.kind = TerrainKind::GaussianHill;
  spec.ncols = 11;
  spec.nrows = 11;
  spec.center_x = 5.0;
  spec.center_y = 5.0;
  spec.amplitude = 6.0;
  spec.sigma = 2.5;
  TerrainMesh mesh = mesh_structured_tri(synth_heightfield(spec), Diagonal::TowardNE);
  // Anchors on the summit flanks so the flood of the low outskirts bites.
  Vec3 pa = {5.0, 2.0, 0.0};
  Vec3 pb = {5.0, 8.0, 0.0};
  TrussNetwork full = build_truss(mesh, false, pa, pb);
  double base = dijkstra(full, full.anchor_a, full.anchor_b).distance;
  auto [flooded, mask] = apply_flood_mask(mesh, 1.0);
  TrussNetwork masked = build_truss(flooded, false, pa, pb);
  double constrained = dijkstra(masked, masked.anchor_a, masked.anchor_b).distance;
  CHECK(constrained >= base - 1e-12 * base);
}

TEST_CASE("path counting: 3x3 lattice corners") {
  TerrainMesh mesh = flat_quad_grid(3);
  TrussNetwork net = build_truss(mesh, false, mesh.vertices[6], mesh.vertices[2]);
  double best = dijkstra(net, net.anchor_a, net.anchor_b).distance;
  CHECK(count_shortest_paths(net, net.anchor_a, net.anchor_b) == 6);
  CHECK(brute_force_count(net, net.anchor_a, net.anchor_b, best, 1e-9) == 6);
}

TEST_CASE("path counting: 11x11 lattice corners equal the binomial") {
  TerrainMesh mesh = flat_quad_grid(11);
  TrussNetwork net = build_truss(mesh, true, mesh.vertices[110], mesh.vertices[10]);
  // C(20,10) computed here as the independent lattice DP.
  std::vector<std::vector<std::uint64_t>> dp(11, std::vector<std::uint64_t>(11, 0));
  dp[0][0] = 1;
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      if (i > 0) dp[i][j] += dp[i - 1][j];
      if (j > 0) dp[i][j] += dp[i][j - 1];
    }
  }
  CHECK(dp[10][10] == 184756);
  CHECK(count_shortest_paths(net, net.anchor_a, net.anchor_b) == 184756);
}

TEST_CASE("path counting: aligned diagonal is unique") {
  TerrainSpec spec;
  spec.ncols = 6;
  spec.nrows = 6;
  TerrainMesh mesh = mesh_structured_tri(synth_heightfield(spec), Diagonal::TowardNE);
  // SW corner is vertex 25, NE corner is vertex 5 (row 0 is north).
  TrussNetwork net = build_truss(mesh, false, {0, 0, 0}, {5, 5, 0});
  CHECK(count_shortest_paths(net, net.anchor_a, net.anchor_b) == 1);
  CHECK(dijkstra(net, net.anchor_a, net.anchor_b).distance ==
        doctest::Approx(5.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("euclidean bound holds") {
  TerrainSpec spec;
  spec.kind = TerrainKind::GaussianHill;
  spec.ncols = 11;
  spec.nrows = 11;
  spec.center_x = 5.0;
  spec.center_y = 5.0;
  spec.amplitude = 5.0;
  spec.sigma = 2.0;
  TerrainMesh mesh = mesh_structured_quad(synth_heightfield(spec));
  TrussNetwork net = build_truss(mesh, false, {0, 0, 0}, {10, 10, 0});
  double bound = euclidean_bound(net, net.anchor_a, net.anchor_b);
  CHECK(bound == doctest::Approx(10.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(bound <= dijkstra(net, net.anchor_a, net.anchor_b).distance);
}

TEST_CASE("sphere geodesic closed forms") {
  CHECK(sphere_geodesic({1, 0, 0}, {-1, 0, 0}, 1.0) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(sphere_geodesic({1, 0, 0}, {0, 1, 0}, 1.0) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-15));
  CHECK(sphere_geodesic({0, 0, 2}, {0, 0, 2}, 2.0) == 0.0);
  CHECK_THROWS_AS(sphere_geodesic({1, 0, 0}, {2, 0, 0}, 1.0), NotOnSphere);
}
