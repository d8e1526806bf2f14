#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tautpath/errors.hpp"
#include "tautpath/extract.hpp"
#include "tautpath/heightfield.hpp"
#include "tautpath/mesh.hpp"
#include "tautpath/oracle.hpp"
#include "tautpath/render.hpp"
#include "tautpath/solver.hpp"
#include "tautpath/truss.hpp"

namespace py = pybind11;
using namespace tautpath;

namespace {

Vec3 vec3_from_seq(const py::sequence& s) {
  if (py::len(s) != 3) throw py::value_error("expected a sequence of 3 floats");
  return {s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Terrain shortest paths via taut spring networks";

  // Translators run most-recently-registered first, so the catch-all base
  // goes in before the specific subclasses.
  py::register_exception<Error>(m, "TautPathError", PyExc_RuntimeError);
  py::register_exception<InvalidSpec>(m, "InvalidSpecError", PyExc_ValueError);
  py::register_exception<NoChain>(m, "NoChainError", PyExc_RuntimeError);
  py::register_exception<AnchorsDisconnected>(m, "AnchorsDisconnectedError", PyExc_RuntimeError);

  py::class_<Vec3>(m, "Vec3")
      .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }), py::arg("x"),
           py::arg("y"), py::arg("z"))
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z)
      .def("__repr__", [](const Vec3& v) {
        return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
               std::to_string(v.z) + ")";
      });

  py::enum_<TerrainKind>(m, "TerrainKind")
      .value("flat", TerrainKind::Flat)
      .value("gaussian_hill", TerrainKind::GaussianHill)
      .value("valley", TerrainKind::Valley)
      .value("fbm", TerrainKind::Fbm);

  py::class_<TerrainSpec>(m, "TerrainSpec")
      .def(py::init<>())
      .def_readwrite("kind", &TerrainSpec::kind)
      .def_readwrite("ncols", &TerrainSpec::ncols)
      .def_readwrite("nrows", &TerrainSpec::nrows)
      .def_readwrite("cellsize", &TerrainSpec::cellsize)
      .def_readwrite("center_x", &TerrainSpec::center_x)
      .def_readwrite("center_y", &TerrainSpec::center_y)
      .def_readwrite("amplitude", &TerrainSpec::amplitude)
      .def_readwrite("sigma", &TerrainSpec::sigma)
      .def_readwrite("axis", &TerrainSpec::axis)
      .def_readwrite("depth", &TerrainSpec::depth)
      .def_readwrite("width", &TerrainSpec::width)
      .def_readwrite("octaves", &TerrainSpec::octaves)
      .def_readwrite("roughness", &TerrainSpec::roughness)
      .def_readwrite("seed", &TerrainSpec::seed)
      .def_static("from_json", &TerrainSpec::from_json)
      .def("to_json", &TerrainSpec::to_json);

  py::class_<HeightField>(m, "HeightField")
      .def(py::init<>())
      .def_readwrite("ncols", &HeightField::ncols)
      .def_readwrite("nrows", &HeightField::nrows)
      .def_readwrite("origin_x", &HeightField::origin_x)
      .def_readwrite("origin_y", &HeightField::origin_y)
      .def_readwrite("cellsize", &HeightField::cellsize)
      .def_readwrite("nodata", &HeightField::nodata)
      .def_readwrite("samples", &HeightField::samples)
      .def("at", [](const HeightField& hf, int r, int c) { return hf.at(r, c); }, py::arg("r"),
           py::arg("c"))
      .def("interpolate", &HeightField::interpolate, py::arg("x"), py::arg("y"))
      .def("validate", &HeightField::validate);

  m.def("load_heightfield", &load_heightfield, py::arg("text"));
  m.def("save_heightfield", &save_heightfield, py::arg("hf"));
  m.def("synth_heightfield", &synth_heightfield, py::arg("spec"));

  py::enum_<MeshProvenance>(m, "MeshProvenance")
      .value("structured_quad", MeshProvenance::StructuredQuad)
      .value("structured_tri", MeshProvenance::StructuredTri)
      .value("unstructured", MeshProvenance::Unstructured)
      .value("imported", MeshProvenance::Imported);

  py::enum_<Diagonal>(m, "Diagonal")
      .value("toward_ne", Diagonal::TowardNE)
      .value("toward_nw", Diagonal::TowardNW);

  py::class_<TerrainMesh>(m, "TerrainMesh")
      .def(py::init<>())
      .def_readwrite("vertices", &TerrainMesh::vertices)
      .def_readwrite("faces", &TerrainMesh::faces)
      .def_readwrite("provenance", &TerrainMesh::provenance)
      .def("validate", &TerrainMesh::validate);

  py::class_<RegionMask>(m, "RegionMask")
      .def_readonly("excluded_vertices", &RegionMask::excluded_vertices)
      .def_readonly("vertex_remap", &RegionMask::vertex_remap)
      .def_readonly("flood_level", &RegionMask::flood_level);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("duplicate_vertex_pairs", &ValidationReport::duplicate_vertex_pairs)
      .def_readonly("nonmanifold_edges", &ValidationReport::nonmanifold_edges)
      .def_readonly("degenerate_faces", &ValidationReport::degenerate_faces)
      .def_readonly("connected_components", &ValidationReport::connected_components)
      .def("clean", &ValidationReport::clean);

  m.def("mesh_structured_quad", &mesh_structured_quad, py::arg("hf"));
  m.def("mesh_structured_tri", &mesh_structured_tri, py::arg("hf"), py::arg("diagonal"));
  m.def("mesh_unstructured", &mesh_unstructured, py::arg("hf"), py::arg("target_spacing"),
        py::arg("seed"));
  m.def("load_obj", &load_obj, py::arg("text"));
  m.def("save_obj", &save_obj, py::arg("mesh"));
  m.def("apply_flood_mask", &apply_flood_mask, py::arg("mesh"), py::arg("level"));
  m.def("validate_mesh", &validate_mesh, py::arg("mesh"));

  py::class_<TrussElement>(m, "TrussElement")
      .def_readonly("node_i", &TrussElement::node_i)
      .def_readonly("node_j", &TrussElement::node_j)
      .def_readonly("rest_length", &TrussElement::rest_length)
      .def_readonly("parent_edge", &TrussElement::parent_edge);

  py::class_<TrussNetwork>(m, "TrussNetwork")
      .def(py::init<>())
      .def_readwrite("nodes", &TrussNetwork::nodes)
      .def_readwrite("elements", &TrussNetwork::elements)
      .def_readwrite("split", &TrussNetwork::split)
      .def_readwrite("anchor_a", &TrussNetwork::anchor_a)
      .def_readwrite("anchor_b", &TrussNetwork::anchor_b)
      .def_readwrite("source_vertex_count", &TrussNetwork::source_vertex_count)
      .def_static("from_json", &TrussNetwork::from_json)
      .def("to_json", &TrussNetwork::to_json);

  m.def("nearest_vertex",
        [](const TerrainMesh& mesh, const py::sequence& p) {
          return nearest_vertex(mesh, vec3_from_seq(p));
        },
        py::arg("mesh"), py::arg("point"));
  m.def("build_truss",
        [](const TerrainMesh& mesh, bool split, const py::sequence& a, const py::sequence& b) {
          return build_truss(mesh, split, vec3_from_seq(a), vec3_from_seq(b));
        },
        py::arg("mesh"), py::arg("split"), py::arg("anchor_a"), py::arg("anchor_b"));

  py::class_<SolverParams>(m, "SolverParams")
      .def(py::init<>())
      .def_readwrite("stiffness", &SolverParams::stiffness)
      .def_readwrite("mass", &SolverParams::mass)
      .def_readwrite("damping", &SolverParams::damping)
      .def_readwrite("dt", &SolverParams::dt)
      .def_readwrite("residual_tol", &SolverParams::residual_tol)
      .def_readwrite("max_iters", &SolverParams::max_iters)
      .def_readwrite("pull_increment", &SolverParams::pull_increment)
      .def_readwrite("taut_strain", &SolverParams::taut_strain)
      .def_readwrite("max_total_stretch", &SolverParams::max_total_stretch)
      .def_readwrite("max_phases", &SolverParams::max_phases)
      .def_static("from_json", &SolverParams::from_json)
      .def("to_json", &SolverParams::to_json);

  py::enum_<Termination>(m, "Termination")
      .value("taut", Termination::Taut)
      .value("separation_cap", Termination::SeparationCap)
      .value("iteration_cap", Termination::IterationCap);

  py::class_<SimState>(m, "SimState")
      .def_readonly("positions", &SimState::positions)
      .def_readonly("strains", &SimState::strains)
      .def_readonly("separation", &SimState::separation)
      .def_readonly("phase", &SimState::phase)
      .def_readonly("residual", &SimState::residual)
      .def_readonly("iterations", &SimState::iterations);

  py::class_<PhaseRecord>(m, "PhaseRecord")
      .def_readonly("separation", &PhaseRecord::separation)
      .def_readonly("residual", &PhaseRecord::residual)
      .def_readonly("max_strain", &PhaseRecord::max_strain)
      .def_readonly("iterations", &PhaseRecord::iterations);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("state", &SolveResult::state)
      .def_readonly("peak_strains", &SolveResult::peak_strains)
      .def_readonly("cause", &SolveResult::cause)
      .def_readonly("history", &SolveResult::history)
      .def_readonly("initial_separation", &SolveResult::initial_separation)
      .def_static("from_json", &SolveResult::from_json)
      .def("to_json", &SolveResult::to_json);

  m.def("solve_taut",
        [](const TrussNetwork& net, const SolverParams& params) {
          py::gil_scoped_release release;
          return solve_taut(net, params);
        },
        py::arg("network"), py::arg("params") = SolverParams{});

  py::class_<PathSolution>(m, "PathSolution")
      .def_readonly("chain", &PathSolution::chain)
      .def_readonly("polyline", &PathSolution::polyline)
      .def_readonly("length", &PathSolution::length)
      .def_readonly("strain_profile", &PathSolution::strain_profile)
      .def_readonly("ambiguity", &PathSolution::ambiguity)
      .def_readonly("alternatives", &PathSolution::alternatives)
      .def_readonly("alternative_lengths", &PathSolution::alternative_lengths);

  py::class_<RegionSolution>(m, "RegionSolution")
      .def_readonly("faces", &RegionSolution::faces)
      .def_readonly("face_strain", &RegionSolution::face_strain)
      .def_readonly("quantile", &RegionSolution::quantile);

  m.def("extract_chain", &extract_chain, py::arg("result"), py::arg("network"),
        py::arg("rel_threshold") = 0.5, py::arg("alt_window") = 0.02);
  m.def("extract_region", &extract_region, py::arg("result"), py::arg("network"), py::arg("mesh"),
        py::arg("quantile") = 0.9);
  m.def("path_length", &path_length, py::arg("solution"));

  py::enum_<PathFormat>(m, "PathFormat")
      .value("geojson", PathFormat::GeoJson)
      .value("csv", PathFormat::Csv)
      .value("obj_polyline", PathFormat::ObjPolyline);

  m.def("export_path", &export_path, py::arg("solution"), py::arg("format"));
  m.def("import_path_geojson", &import_path_geojson, py::arg("text"));
  m.def("region_to_json", &region_to_json, py::arg("region"));
  m.def("region_from_json", &region_from_json, py::arg("text"));

  py::class_<GraphDistanceResult>(m, "GraphDistanceResult")
      .def_readonly("distance", &GraphDistanceResult::distance)
      .def_readonly("chain", &GraphDistanceResult::chain)
      .def_readonly("settled", &GraphDistanceResult::settled)
      .def("reachable", &GraphDistanceResult::reachable);

  m.def("dijkstra", &dijkstra, py::arg("network"), py::arg("a"), py::arg("b"));
  m.def("count_shortest_paths", &count_shortest_paths, py::arg("network"), py::arg("a"),
        py::arg("b"), py::arg("rel_tol") = 1e-9);
  m.def("euclidean_bound", &euclidean_bound, py::arg("network"), py::arg("a"), py::arg("b"));
  m.def("bellman_ford_distance", &bellman_ford_distance, py::arg("network"), py::arg("a"),
        py::arg("b"));
  m.def("sphere_geodesic",
        [](const py::sequence& p, const py::sequence& q, double radius) {
          return sphere_geodesic(vec3_from_seq(p), vec3_from_seq(q), radius);
        },
        py::arg("p"), py::arg("q"), py::arg("radius"));

  m.def("render_svg",
        [](const TerrainMesh& mesh, const TrussNetwork* network, const SolveResult* result,
           const PathSolution* path, const RegionSolution* region) {
          RenderInputs in;
          in.mesh = &mesh;
          in.network = network;
          in.result = result;
          in.path = path;
          in.region = region;
          return render_svg(in);
        },
        py::arg("mesh"), py::arg("network") = nullptr, py::arg("result") = nullptr,
        py::arg("path") = nullptr, py::arg("region") = nullptr);
}
