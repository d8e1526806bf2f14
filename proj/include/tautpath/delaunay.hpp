#pragma once

#include <array>
#include <vector>

namespace tautpath {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// 2D Delaunay triangulation (Bowyer-Watson). Returns CCW triangles as
// index triples into `sites`. Throws DegenerateTriangulation when the
// sites are collinear or fewer than 3.
std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Point2>& sites);

}  // namespace tautpath
