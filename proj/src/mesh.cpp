#include "tautpath/mesh.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tautpath/delaunay.hpp"
#include "tautpath/errors.hpp"

namespace tautpath {

namespace {

void check_no_nodata(const HeightField& hf) {
  for (int r = 0; r < hf.nrows; ++r) {
    for (int c = 0; c < hf.ncols; ++c) {
      if (hf.is_nodata(r, c)) throw NodataInInterior("nodata sample inside hull");
    }
  }
}

double face_area(const TerrainMesh& mesh, const std::vector<int>& face) {
  double area = 0.0;
  const Vec3& p0 = mesh.vertices[face[0]];
  for (size_t k = 1; k + 1 < face.size(); ++k) {
    Vec3 u = mesh.vertices[face[k]] - p0;
    Vec3 v = mesh.vertices[face[k + 1]] - p0;
    Vec3 cr{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
    area += 0.5 * cr.norm();
  }
  return area;
}

}  // namespace

void TerrainMesh::validate() const {
  const int nv = static_cast<int>(vertices.size());
  for (const auto& face : faces) {
    if (face.size() != 3 && face.size() != 4) throw UnsupportedFaceArity("face arity must be 3 or 4");
    std::set<int> seen;
    for (int idx : face) {
      if (idx < 0 || idx >= nv) throw IndexOutOfRange("face index out of range");
      if (!seen.insert(idx).second) throw Error("face repeats a vertex");
    }
  }
  ValidationReport report = validate_mesh(*this);
  if (report.duplicate_vertex_pairs > 0) throw Error("duplicate vertices within 1e-9");
  if (report.nonmanifold_edges > 0) throw Error("non-manifold edge");
}

TerrainMesh mesh_structured_quad(const HeightField& hf) {
  hf.validate();
  check_no_nodata(hf);
  TerrainMesh mesh;
  mesh.provenance = MeshProvenance::StructuredQuad;
  mesh.vertices.reserve(static_cast<size_t>(hf.nrows) * hf.ncols);
  for (int r = 0; r < hf.nrows; ++r) {
    for (int c = 0; c < hf.ncols; ++c) {
      mesh.vertices.push_back({hf.world_x(c), hf.world_y(r), hf.at(r, c)});
    }
  }
  auto vid = [&](int r, int c) { return r * hf.ncols + c; };
  for (int r = 0; r + 1 < hf.nrows; ++r) {
    for (int c = 0; c + 1 < hf.ncols; ++c) {
      // CCW in plan: SW, SE, NE, NW (row r+1 is south of row r).
      mesh.faces.push_back({vid(r + 1, c), vid(r + 1, c + 1), vid(r, c + 1), vid(r, c)});
    }
  }
  return mesh;
}

TerrainMesh mesh_structured_tri(const HeightField& hf, Diagonal diagonal) {
  hf.validate();
  check_no_nodata(hf);
  TerrainMesh mesh;
  mesh.provenance = MeshProvenance::StructuredTri;
  for (int r = 0; r < hf.nrows; ++r) {
    for (int c = 0; c < hf.ncols; ++c) {
      mesh.vertices.push_back({hf.world_x(c), hf.world_y(r), hf.at(r, c)});
    }
  }
  auto vid = [&](int r, int c) { return r * hf.ncols + c; };
  for (int r = 0; r + 1 < hf.nrows; ++r) {
    for (int c = 0; c + 1 < hf.ncols; ++c) {
      int sw = vid(r + 1, c), se = vid(r + 1, c + 1), ne = vid(r, c + 1), nw = vid(r, c);
      if (diagonal == Diagonal::TowardNE) {
        mesh.faces.push_back({sw, se, ne});
        mesh.faces.push_back({sw, ne, nw});
      } else {
        mesh.faces.push_back({sw, se, nw});
        mesh.faces.push_back({se, ne, nw});
      }
    }
  }
  return mesh;
}

TerrainMesh mesh_unstructured(const HeightField& hf, double target_spacing, std::uint64_t seed) {
  hf.validate();
  check_no_nodata(hf);
  if (!(target_spacing > 0.0)) throw InvalidSpec("target_spacing must be > 0");
  double width = (hf.ncols - 1) * hf.cellsize;
  double height = (hf.nrows - 1) * hf.cellsize;
  if (target_spacing >= std::min(width, height)) {
    throw SpacingTooCoarse("target_spacing exceeds the field extent");
  }

  double x0 = hf.origin_x, y0 = hf.origin_y;
  double x1 = x0 + width, y1 = y0 + height;

  std::vector<Point2> sites;
  std::uint64_t counter = 0;
  auto unit = [&]() { return u64_to_unit(hash_combine(seed, counter++)); };

  // Boundary vertices stay on the rectangle; jitter only along the edge so
  // the Delaunay input avoids exactly cocircular quadruples.
  int nx = std::max(2, static_cast<int>(std::round(width / target_spacing)) + 1);
  int ny = std::max(2, static_cast<int>(std::round(height / target_spacing)) + 1);
  double sx = width / (nx - 1);
  double sy = height / (ny - 1);
  sites.push_back({x0, y0});
  sites.push_back({x1, y0});
  sites.push_back({x1, y1});
  sites.push_back({x0, y1});
  for (int i = 1; i + 1 < nx; ++i) {
    double j = (unit() - 0.5) * 0.4 * sx;
    sites.push_back({x0 + i * sx + j, y0});
    j = (unit() - 0.5) * 0.4 * sx;
    sites.push_back({x0 + i * sx + j, y1});
  }
  for (int i = 1; i + 1 < ny; ++i) {
    double j = (unit() - 0.5) * 0.4 * sy;
    sites.push_back({x0, y0 + i * sy + j});
    j = (unit() - 0.5) * 0.4 * sy;
    sites.push_back({x1, y0 + i * sy + j});
  }
  // Interior sites: jittered grid, jitter <= 0.4 * spacing.
  for (int iy = 1; iy + 1 < ny; ++iy) {
    for (int ix = 1; ix + 1 < nx; ++ix) {
      double jx = (unit() - 0.5) * 0.8 * sx * 0.999;
      double jy = (unit() - 0.5) * 0.8 * sy * 0.999;
      sites.push_back({x0 + ix * sx + jx, y0 + iy * sy + jy});
    }
  }

  auto tris = delaunay_triangulate(sites);

  TerrainMesh mesh;
  mesh.provenance = MeshProvenance::Unstructured;
  mesh.vertices.reserve(sites.size());
  for (const auto& s : sites) {
    mesh.vertices.push_back({s.x, s.y, hf.interpolate(s.x, s.y)});
  }
  mesh.faces.reserve(tris.size());
  for (const auto& t : tris) {
    mesh.faces.push_back({t[0], t[1], t[2]});
  }
  return mesh;
}

TerrainMesh load_obj(const std::string& text) {
  TerrainMesh mesh;
  mesh.provenance = MeshProvenance::Imported;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) throw Error("malformed vertex record: " + line);
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string token;
      while (ls >> token) {
        // "i", "i/t", "i/t/n", "i//n" — only the vertex index matters.
        int idx = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), idx);
        (void)ptr;
        if (ec != std::errc()) throw Error("malformed face record: " + line);
        face.push_back(idx - 1);
      }
      if (face.size() > 4) throw UnsupportedFaceArity("face with more than 4 vertices");
      if (face.size() < 3) throw Error("face with fewer than 3 vertices");
      for (int idx : face) {
        if (idx < 0 || idx >= static_cast<int>(mesh.vertices.size())) {
          throw IndexOutOfRange("face index out of range: " + line);
        }
      }
      mesh.faces.push_back(face);
    }
  }
  return mesh;
}

std::string save_obj(const TerrainMesh& mesh) {
  std::ostringstream out;
  out << std::fixed;
  out.precision(9);
  for (const auto& v : mesh.vertices) {
    out << "v " << v.x << ' ' << v.y << ' ' << v.z << "\n";
  }
  out.unsetf(std::ios_base::floatfield);
  for (const auto& face : mesh.faces) {
    out << 'f';
    for (int idx : face) out << ' ' << (idx + 1);
    out << "\n";
  }
  return out.str();
}

std::pair<TerrainMesh, RegionMask> apply_flood_mask(const TerrainMesh& mesh, double level) {
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<bool> dry(nv);
  for (int i = 0; i < nv; ++i) dry[i] = mesh.vertices[i].z >= level;

  // A face survives iff all its corners are dry.
  std::vector<bool> used(nv, false);
  TerrainMesh out;
  out.provenance = mesh.provenance;
  std::vector<std::vector<int>> surviving;
  for (const auto& face : mesh.faces) {
    bool keep = true;
    for (int idx : face) {
      if (!dry[idx]) {
        keep = false;
        break;
      }
    }
    if (keep) {
      surviving.push_back(face);
      for (int idx : face) used[idx] = true;
    }
  }
  if (surviving.empty()) throw EmptyResult("no face survives the flood level");

  RegionMask mask;
  mask.flood_cause = true;
  mask.flood_level = level;
  mask.vertex_remap.assign(nv, -1);
  int next = 0;
  for (int i = 0; i < nv; ++i) {
    if (used[i]) {
      mask.vertex_remap[i] = next++;
      out.vertices.push_back(mesh.vertices[i]);
    } else {
      mask.excluded_vertices.push_back(i);
    }
  }
  for (auto face : surviving) {
    for (int& idx : face) idx = mask.vertex_remap[idx];
    out.faces.push_back(std::move(face));
  }
  return {std::move(out), std::move(mask)};
}

ValidationReport validate_mesh(const TerrainMesh& mesh) {
  ValidationReport report;
  const int nv = static_cast<int>(mesh.vertices.size());

  // Duplicate vertices within 1e-9 via spatial hashing on a 1e-9 grid.
  {
    std::unordered_map<std::uint64_t, std::vector<int>> cells;
    const double inv = 1e9;
    auto key_of = [&](double x, double y, double z, int dx, int dy, int dz) {
      auto q = [&](double v, int d) {
        return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(v * inv)) + d);
      };
      return hash_combine(q(x, dx), hash_combine(q(y, dy), q(z, dz)));
    };
    for (int i = 0; i < nv; ++i) {
      const Vec3& p = mesh.vertices[i];
      // Distinct offsets can hash to the same bucket, so de-duplicate the
      // candidate set before counting pairs.
      std::set<int> candidates;
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dz = -1; dz <= 1; ++dz) {
            auto it = cells.find(key_of(p.x, p.y, p.z, dx, dy, dz));
            if (it == cells.end()) continue;
            candidates.insert(it->second.begin(), it->second.end());
          }
        }
      }
      for (int j : candidates) {
        if (distance(p, mesh.vertices[j]) < 1e-9) ++report.duplicate_vertex_pairs;
      }
      cells[key_of(p.x, p.y, p.z, 0, 0, 0)].push_back(i);
    }
  }

  // Edge incidence and degenerate faces.
  std::map<std::pair<int, int>, int> edge_faces;
  for (const auto& face : mesh.faces) {
    std::set<int> seen(face.begin(), face.end());
    bool degenerate = seen.size() != face.size();
    if (!degenerate && face_area(mesh, face) < 1e-12) degenerate = true;
    if (degenerate) {
      ++report.degenerate_faces;
      continue;
    }
    const size_t k = face.size();
    for (size_t e = 0; e < k; ++e) {
      auto key = std::minmax(face[e], face[(e + 1) % k]);
      ++edge_faces[key];
    }
  }
  for (const auto& [key, count] : edge_faces) {
    if (count > 2) ++report.nonmanifold_edges;
  }

  // Connected components over face edges; isolated vertices count too.
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [key, count] : edge_faces) {
    parent[find(key.first)] = find(key.second);
  }
  std::set<int> roots;
  for (int i = 0; i < nv; ++i) roots.insert(find(i));
  report.connected_components = static_cast<int>(roots.size());
  return report;
}

}  // namespace tautpath
