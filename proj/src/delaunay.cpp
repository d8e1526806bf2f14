#include "tautpath/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "tautpath/errors.hpp"

namespace tautpath {

namespace {

struct Tri {
  int a, b, c;
  // circumcircle cache
  double ccx, ccy, rr;
  bool alive = true;
};

double orient2d(const Point2& p, const Point2& q, const Point2& r) {
  return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
}

void circumcircle(const Point2& p, const Point2& q, const Point2& r, double& cx, double& cy,
                  double& rr) {
  double ax = p.x, ay = p.y;
  double bx = q.x - ax, by = q.y - ay;
  double cx2 = r.x - ax, cy2 = r.y - ay;
  double d = 2.0 * (bx * cy2 - by * cx2);
  double b2 = bx * bx + by * by;
  double c2 = cx2 * cx2 + cy2 * cy2;
  double ux = (cy2 * b2 - by * c2) / d;
  double uy = (bx * c2 - cx2 * b2) / d;
  cx = ax + ux;
  cy = ay + uy;
  rr = ux * ux + uy * uy;
}

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Point2>& sites) {
  const int n = static_cast<int>(sites.size());
  if (n < 3) throw DegenerateTriangulation("need at least 3 sites");

  double minx = sites[0].x, maxx = sites[0].x, miny = sites[0].y, maxy = sites[0].y;
  for (const auto& s : sites) {
    minx = std::min(minx, s.x);
    maxx = std::max(maxx, s.x);
    miny = std::min(miny, s.y);
    maxy = std::max(maxy, s.y);
  }
  double span = std::max(maxx - minx, maxy - miny);
  if (!(span > 0.0)) throw DegenerateTriangulation("all sites coincide");

  // Super-triangle far outside the hull.
  double midx = (minx + maxx) / 2.0;
  double midy = (miny + maxy) / 2.0;
  std::vector<Point2> pts = sites;
  pts.push_back({midx - 20.0 * span, midy - 10.0 * span});
  pts.push_back({midx + 20.0 * span, midy - 10.0 * span});
  pts.push_back({midx, midy + 20.0 * span});
  const int s0 = n, s1 = n + 1, s2 = n + 2;

  std::vector<Tri> tris;
  auto add_tri = [&](int a, int b, int c) {
    if (orient2d(pts[a], pts[b], pts[c]) < 0.0) std::swap(b, c);
    Tri t{a, b, c, 0, 0, 0, true};
    circumcircle(pts[a], pts[b], pts[c], t.ccx, t.ccy, t.rr);
    tris.push_back(t);
  };
  add_tri(s0, s1, s2);

  for (int i = 0; i < n; ++i) {
    const Point2& p = pts[i];
    // Boundary edges of the cavity: edge -> count.
    std::map<std::pair<int, int>, std::pair<int, int>> edge_count;
    bool found = false;
    for (auto& t : tris) {
      if (!t.alive) continue;
      double dx = p.x - t.ccx;
      double dy = p.y - t.ccy;
      if (dx * dx + dy * dy <= t.rr * (1.0 + 1e-12)) {
        t.alive = false;
        found = true;
        const int vs[3] = {t.a, t.b, t.c};
        for (int e = 0; e < 3; ++e) {
          int u = vs[e], v = vs[(e + 1) % 3];
          auto key = std::minmax(u, v);
          auto it = edge_count.find(key);
          if (it == edge_count.end()) {
            edge_count[key] = {u, v};
          } else {
            edge_count.erase(it);  // interior edge, shared by two dead triangles
          }
        }
      }
    }
    if (!found) throw DegenerateTriangulation("point outside all circumcircles");
    for (const auto& [key, uv] : edge_count) {
      add_tri(uv.first, uv.second, i);
    }
    // Compact occasionally to keep the scan linear-ish.
    if (tris.size() > 16u * static_cast<unsigned>(n + 3)) {
      std::vector<Tri> live;
      live.reserve(tris.size() / 2);
      for (const auto& t : tris) {
        if (t.alive) live.push_back(t);
      }
      tris = std::move(live);
    }
  }

  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris) {
    if (!t.alive) continue;
    if (t.a >= n || t.b >= n || t.c >= n) continue;  // touches the super-triangle
    out.push_back({t.a, t.b, t.c});
  }
  if (out.empty()) throw DegenerateTriangulation("collinear site set");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tautpath
