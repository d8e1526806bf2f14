#include "tautpath/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tautpath/errors.hpp"

namespace tautpath {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Linear two-stop ramp #2060c0 -> #d02020.
std::string ramp_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  int r = static_cast<int>(std::lround(0x20 + t * (0xd0 - 0x20)));
  int g = static_cast<int>(std::lround(0x60 + t * (0x20 - 0x60)));
  int b = static_cast<int>(std::lround(0xc0 + t * (0x20 - 0xc0)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_svg(const RenderInputs& in) {
  if (in.mesh == nullptr) throw Error("render needs a mesh");
  const TerrainMesh& mesh = *in.mesh;
  if (in.result != nullptr && in.network != nullptr &&
      in.network->source_vertex_count != static_cast<int>(mesh.vertices.size())) {
    throw Error("node counts of mesh and network disagree");
  }

  double minx = mesh.vertices[0].x, maxx = minx, miny = mesh.vertices[0].y, maxy = miny;
  for (const auto& v : mesh.vertices) {
    minx = std::min(minx, v.x);
    maxx = std::max(maxx, v.x);
    miny = std::min(miny, v.y);
    maxy = std::max(maxy, v.y);
  }
  double span = std::max(maxx - minx, maxy - miny);
  if (!(span > 0.0)) span = 1.0;
  const double size = 800.0;
  const double margin = 40.0;
  double scale = (size - 2 * margin) / span;
  auto sx = [&](double x) { return margin + (x - minx) * scale; };
  auto sy = [&](double y) { return size - margin - (y - miny) * scale; };  // y up

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // Region faces first so wireframe stays visible above them.
  if (in.region != nullptr) {
    for (int f : in.region->faces) {
      const auto& face = mesh.faces[f];
      svg << "<polygon points=\"";
      for (size_t k = 0; k < face.size(); ++k) {
        if (k) svg << ' ';
        svg << fmt(sx(mesh.vertices[face[k]].x)) << ',' << fmt(sy(mesh.vertices[face[k]].y));
      }
      svg << "\" fill=\"#d02020\" fill-opacity=\"0.5\" stroke=\"none\"/>\n";
    }
  }

  // Elements colored by peak strain when a result is present.
  double lo = 0.0, hi = 0.0;
  bool colored = in.result != nullptr && in.network != nullptr;
  if (colored) {
    lo = hi = in.result->peak_strains.empty() ? 0.0 : in.result->peak_strains[0];
    for (double s : in.result->peak_strains) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  if (colored) {
    const TrussNetwork& net = *in.network;
    for (size_t e = 0; e < net.elements.size(); ++e) {
      const auto& el = net.elements[e];
      const Vec3& p = net.nodes[el.node_i];
      const Vec3& q = net.nodes[el.node_j];
      double t = hi > lo ? (in.result->peak_strains[e] - lo) / (hi - lo) : 0.0;
      svg << "<line x1=\"" << fmt(sx(p.x)) << "\" y1=\"" << fmt(sy(p.y)) << "\" x2=\""
          << fmt(sx(q.x)) << "\" y2=\"" << fmt(sy(q.y)) << "\" stroke=\"" << ramp_color(t)
          << "\" stroke-width=\"1\"/>\n";
    }
  } else {
    for (const auto& face : mesh.faces) {
      svg << "<polygon points=\"";
      for (size_t k = 0; k < face.size(); ++k) {
        if (k) svg << ' ';
        svg << fmt(sx(mesh.vertices[face[k]].x)) << ',' << fmt(sy(mesh.vertices[face[k]].y));
      }
      svg << "\" fill=\"none\" stroke=\"#808080\" stroke-width=\"0.5\"/>\n";
    }
  }

  if (in.path != nullptr) {
    svg << "<polyline points=\"";
    for (size_t i = 0; i < in.path->polyline.size(); ++i) {
      if (i) svg << ' ';
      svg << fmt(sx(in.path->polyline[i].x)) << ',' << fmt(sy(in.path->polyline[i].y));
    }
    svg << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  }

  if (colored) {
    svg << "<rect x=\"10\" y=\"10\" width=\"180\" height=\"14\" fill=\"url(#ramp)\"/>\n";
    svg << "<defs><linearGradient id=\"ramp\"><stop offset=\"0\" stop-color=\"#2060c0\"/>"
           "<stop offset=\"1\" stop-color=\"#d02020\"/></linearGradient></defs>\n";
    char legend[128];
    std::snprintf(legend, sizeof(legend), "peak strain %.6g .. %.6g", lo, hi);
    svg << "<text x=\"10\" y=\"38\" font-size=\"12\" font-family=\"monospace\">" << legend
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace tautpath
