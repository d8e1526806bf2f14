#pragma once

#include <cstdint>
#include <vector>

#include "tautpath/truss.hpp"

namespace tautpath {

struct GraphDistanceResult {
  double distance = 0.0;  // +inf when unreachable
  std::vector<int> chain; // node indices a..b, midpoints contracted away
  int settled = 0;
  bool reachable() const;
};

// Exact shortest path on the element graph, weights = rest lengths.
// Split networks are contracted through their degree-2 midpoints first so
// split and unsplit distances agree bit-for-bit.
GraphDistanceResult dijkstra(const TrussNetwork& network, int a, int b);

// Number of distinct a-b paths within (1+rel_tol) of the shortest distance,
// via DAG counting over tight edges; saturates at 2^63-1.
std::uint64_t count_shortest_paths(const TrussNetwork& network, int a, int b,
                                   double rel_tol = 1e-9);

double euclidean_bound(const TrussNetwork& network, int a, int b);

// Great-circle distance between two points on the sphere of radius R.
double sphere_geodesic(const Vec3& p, const Vec3& q, double radius);

// Bellman-Ford cross-check; same contraction rule as dijkstra.
double bellman_ford_distance(const TrussNetwork& network, int a, int b);

}  // namespace tautpath
