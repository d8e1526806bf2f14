#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tautpath/errors.hpp"
#include "tautpath/extract.hpp"
#include "tautpath/heightfield.hpp"
#include "tautpath/mesh.hpp"
#include "tautpath/oracle.hpp"
#include "tautpath/render.hpp"
#include "tautpath/solver.hpp"
#include "tautpath/truss.hpp"

namespace {

using namespace tautpath;

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 ok, 2 input, 3 infeasible, 4 solver, 5 extraction, 6 verification.
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSolver = 4;
constexpr int kExitExtraction = 5;
constexpr int kExitVerification = 6;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Every command writes a manifest next to its primary output; `replay`
// re-runs the stored argv and compares output checksums.
void write_manifest(const std::string& out_path, const std::vector<std::string>& argv,
                    const std::vector<std::string>& inputs,
                    const nlohmann::json& resolved_params) {
  nlohmann::json m;
  m["version"] = kVersion;
  m["argv"] = argv;
  m["params"] = resolved_params;
  auto& in_j = m["inputs"] = nlohmann::json::object();
  for (const auto& p : inputs) in_j[p] = fnv1a64(read_file(p));
  m["outputs"] = {{out_path, fnv1a64(read_file(out_path))}};
  write_file(out_path + ".manifest.json", m.dump(2) + "\n");
}

Vec3 parse_point(const std::string& text) {
  Vec3 p;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &p.x, &p.y, &p.z) != 3) {
    throw Error("expected x,y,z: " + text);
  }
  return p;
}

int run_cli(const std::vector<std::string>& argv);

struct GenmeshOpts {
  std::string spec_path, dem_path, kind = "flat", mesh_kind = "quad", diagonal = "toward_ne";
  std::string out_path, axis = "x";
  int ncols = 11, nrows = 11, octaves = 4;
  double cellsize = 1.0, amplitude = 0.0, sigma = 1.0, depth = 0.0, width = 1.0;
  double roughness = 0.5, spacing = 1.0, flood = std::nan("");
  std::vector<double> center;
  std::uint64_t seed = 0;
};

void setup_genmesh(CLI::App* cmd, const std::vector<std::string>& argv) {
  auto o = std::make_shared<GenmeshOpts>();
  cmd->add_option("--spec", o->spec_path, "terrain spec JSON file");
  cmd->add_option("--dem", o->dem_path, "ESRI ASCII grid file");
  cmd->add_option("--kind", o->kind)
      ->check(CLI::IsMember({"flat", "gaussian_hill", "valley", "fbm"}));
  cmd->add_option("--ncols", o->ncols);
  cmd->add_option("--nrows", o->nrows);
  cmd->add_option("--cellsize", o->cellsize);
  cmd->add_option("--amplitude", o->amplitude);
  cmd->add_option("--sigma", o->sigma);
  cmd->add_option("--center", o->center)->expected(2);
  cmd->add_option("--depth", o->depth);
  cmd->add_option("--width", o->width);
  cmd->add_option("--axis", o->axis)->check(CLI::IsMember({"x", "y"}));
  cmd->add_option("--octaves", o->octaves);
  cmd->add_option("--roughness", o->roughness);
  cmd->add_option("--seed", o->seed);
  cmd->add_option("--mesh", o->mesh_kind)->check(CLI::IsMember({"quad", "tri", "unstructured"}));
  cmd->add_option("--diagonal", o->diagonal)->check(CLI::IsMember({"toward_ne", "toward_nw"}));
  cmd->add_option("--spacing", o->spacing);
  cmd->add_option("--flood-level", o->flood, "drop faces below this elevation");
  cmd->add_option("-o,--output", o->out_path)->required();

  cmd->callback([o, argv]() {
    HeightField hf;
    nlohmann::json params;
    if (!o->dem_path.empty()) {
      hf = load_heightfield(read_file(o->dem_path));
      params["dem"] = o->dem_path;
    } else {
      TerrainSpec spec;
      if (!o->spec_path.empty()) {
        spec = TerrainSpec::from_json(read_file(o->spec_path));
      } else {
        if (o->kind == "gaussian_hill") spec.kind = TerrainKind::GaussianHill;
        if (o->kind == "valley") spec.kind = TerrainKind::Valley;
        if (o->kind == "fbm") spec.kind = TerrainKind::Fbm;
        spec.ncols = o->ncols;
        spec.nrows = o->nrows;
        spec.cellsize = o->cellsize;
        spec.amplitude = o->amplitude;
        spec.sigma = o->sigma;
        if (o->center.size() == 2) {
          spec.center_x = o->center[0];
          spec.center_y = o->center[1];
        } else {
          spec.center_x = (o->ncols - 1) * o->cellsize / 2.0;
          spec.center_y = (o->nrows - 1) * o->cellsize / 2.0;
        }
        spec.axis = o->axis[0];
        spec.depth = o->depth;
        spec.width = o->width;
        spec.octaves = o->octaves;
        spec.roughness = o->roughness;
        spec.seed = o->seed;
      }
      hf = synth_heightfield(spec);
      params["terrain_spec"] = nlohmann::json::parse(spec.to_json());
    }

    TerrainMesh mesh;
    if (o->mesh_kind == "quad") {
      mesh = mesh_structured_quad(hf);
    } else if (o->mesh_kind == "tri") {
      mesh = mesh_structured_tri(hf, o->diagonal == "toward_ne" ? Diagonal::TowardNE
                                                                : Diagonal::TowardNW);
    } else {
      mesh = mesh_unstructured(hf, o->spacing, o->seed);
      params["spacing"] = o->spacing;
    }
    params["mesh"] = o->mesh_kind;
    params["seed"] = o->seed;
    if (!std::isnan(o->flood)) {
      auto [flooded, mask] = apply_flood_mask(mesh, o->flood);
      mesh = flooded;
      params["flood_level"] = o->flood;
      params["flooded_vertices"] = mask.excluded_vertices.size();
    }
    mesh.validate();
    write_file(o->out_path, save_obj(mesh));
    std::vector<std::string> inputs;
    if (!o->spec_path.empty()) inputs.push_back(o->spec_path);
    if (!o->dem_path.empty()) inputs.push_back(o->dem_path);
    write_manifest(o->out_path, argv, inputs, params);
    std::cout << "wrote " << o->out_path << ": " << mesh.vertices.size() << " vertices, "
              << mesh.faces.size() << " faces\n";
  });
}

struct ConvertOpts {
  std::string mesh_path, out_path, anchor_a, anchor_b;
  bool no_split = false;
};

void setup_convert(CLI::App* cmd, const std::vector<std::string>& argv) {
  auto o = std::make_shared<ConvertOpts>();
  cmd->add_option("mesh", o->mesh_path)->required();
  cmd->add_flag("--no-split", o->no_split, "surface mode: keep edges whole");
  cmd->add_flag("--split", "insert a mid-joint per edge (default)");
  cmd->add_option("--anchor-a", o->anchor_a, "x,y,z")->required();
  cmd->add_option("--anchor-b", o->anchor_b, "x,y,z")->required();
  cmd->add_option("-o,--output", o->out_path)->required();

  cmd->callback([o, argv]() {
    TerrainMesh mesh = load_obj(read_file(o->mesh_path));
    mesh.validate();
    Vec3 pa = parse_point(o->anchor_a);
    Vec3 pb = parse_point(o->anchor_b);
    TrussNetwork net = build_truss(mesh, !o->no_split, pa, pb);
    write_file(o->out_path, net.to_json() + "\n");
    nlohmann::json params;
    params["split"] = !o->no_split;
    params["anchor_a"] = {pa.x, pa.y, pa.z};
    params["anchor_b"] = {pb.x, pb.y, pb.z};
    params["snapped_a"] = net.anchor_a;
    params["snapped_b"] = net.anchor_b;
    write_manifest(o->out_path, argv, {o->mesh_path}, params);
    std::cout << "wrote " << o->out_path << ": " << net.nodes.size() << " nodes, "
              << net.elements.size() << " elements, anchors snapped to " << net.anchor_a
              << " and " << net.anchor_b << "\n";
  });
}

struct SolveOpts {
  std::string net_path, out_path, params_path;
  SolverParams p;
};

void setup_solve(CLI::App* cmd, const std::vector<std::string>& argv) {
  auto o = std::make_shared<SolveOpts>();
  cmd->add_option("net", o->net_path)->required();
  cmd->add_option("--params", o->params_path, "SolverParams JSON file");
  cmd->add_option("--stiffness", o->p.stiffness);
  cmd->add_option("--mass", o->p.mass);
  cmd->add_option("--damping", o->p.damping);
  cmd->add_option("--dt", o->p.dt);
  cmd->add_option("--residual-tol", o->p.residual_tol);
  cmd->add_option("--max-iters", o->p.max_iters);
  cmd->add_option("--pull-increment", o->p.pull_increment);
  cmd->add_option("--taut-strain", o->p.taut_strain);
  cmd->add_option("--max-total-stretch", o->p.max_total_stretch);
  cmd->add_option("--max-phases", o->p.max_phases);
  cmd->add_option("-o,--output", o->out_path)->required();

  cmd->callback([o, argv]() {
    TrussNetwork net = TrussNetwork::from_json(read_file(o->net_path));
    if (!o->params_path.empty()) o->p = SolverParams::from_json(read_file(o->params_path));
    SolverParams resolved = o->p.resolved(net);
    SolveResult result = solve_taut(net, resolved);
    write_file(o->out_path, result.to_json() + "\n");
    std::vector<std::string> inputs{o->net_path};
    if (!o->params_path.empty()) inputs.push_back(o->params_path);
    write_manifest(o->out_path, argv, inputs, nlohmann::json::parse(resolved.to_json()));
    double max_strain = 0.0;
    for (double s : result.peak_strains) max_strain = std::max(max_strain, s);
    std::cout << "terminated " << termination_name(result.cause) << " after "
              << result.state.phase << " phases, max strain " << max_strain << "\n";
  });
}

struct ExtractOpts {
  std::string result_path, net_path, mesh_path, out_path, mode = "chain", format = "geojson";
  double threshold = 0.5, quantile = 0.9, alt_window = 0.02;
};

void setup_extract(CLI::App* cmd, const std::vector<std::string>& argv) {
  auto o = std::make_shared<ExtractOpts>();
  cmd->add_option("result", o->result_path)->required();
  cmd->add_option("net", o->net_path)->required();
  cmd->add_option("mesh", o->mesh_path)->required();
  cmd->add_option("--mode", o->mode)->check(CLI::IsMember({"chain", "region"}));
  cmd->add_option("--threshold", o->threshold, "fraction of max peak strain");
  cmd->add_option("--alt-window", o->alt_window, "relative length window for alternatives");
  cmd->add_option("--quantile", o->quantile);
  cmd->add_option("--format", o->format)->check(CLI::IsMember({"geojson", "csv", "obj"}));
  cmd->add_option("-o,--output", o->out_path)->required();

  cmd->callback([o, argv]() {
    SolveResult result = SolveResult::from_json(read_file(o->result_path));
    TrussNetwork net = TrussNetwork::from_json(read_file(o->net_path));
    TerrainMesh mesh = load_obj(read_file(o->mesh_path));
    nlohmann::json params;
    params["mode"] = o->mode;
    if (o->mode == "chain") {
      PathSolution sol = extract_chain(result, net, o->threshold, o->alt_window);
      PathFormat fmt = o->format == "csv"   ? PathFormat::Csv
                       : o->format == "obj" ? PathFormat::ObjPolyline
                                            : PathFormat::GeoJson;
      write_file(o->out_path, export_path(sol, fmt));
      params["threshold"] = o->threshold;
      params["alt_window"] = o->alt_window;
      std::cout << "length " << sol.length << ", ambiguity "
                << (sol.ambiguity ? "true" : "false") << ", alternatives "
                << sol.alternatives.size() << "\n";
    } else {
      RegionSolution region = extract_region(result, net, mesh, o->quantile);
      write_file(o->out_path, region_to_json(region) + "\n");
      params["quantile"] = o->quantile;
      std::cout << "region: " << region.faces.size() << " faces at quantile " << o->quantile
                << "\n";
    }
    write_manifest(o->out_path, argv, {o->result_path, o->net_path, o->mesh_path}, params);
  });
}

struct OracleOpts {
  std::string net_path, out_path;
};

void setup_oracle(CLI::App* cmd, const std::vector<std::string>& argv) {
  auto o = std::make_shared<OracleOpts>();
  cmd->add_option("net", o->net_path)->required();
  cmd->add_option("-o,--output", o->out_path)->required();

  cmd->callback([o, argv]() {
    TrussNetwork net = TrussNetwork::from_json(read_file(o->net_path));
    GraphDistanceResult r = dijkstra(net, net.anchor_a, net.anchor_b);
    nlohmann::json j;
    j["distance"] = r.reachable() ? r.distance : -1.0;
    j["reachable"] = r.reachable();
    j["chain"] = r.chain;
    j["settled"] = r.settled;
    j["euclidean_bound"] = euclidean_bound(net, net.anchor_a, net.anchor_b);
    write_file(o->out_path, j.dump(2) + "\n");
    write_manifest(o->out_path, argv, {o->net_path}, nlohmann::json::object());
    if (!r.reachable()) throw AnchorsDisconnected("anchors unreachable");
    std::cout << "distance " << r.distance << " over " << (r.chain.size() - 1) << " edges\n";
  });
}

struct CompareOpts {
  std::string path_file, oracle_file;
  double tol = 1e-6;
};

void setup_compare(CLI::App* cmd) {
  auto o = std::make_shared<CompareOpts>();
  cmd->add_option("path", o->path_file)->required();
  cmd->add_option("oracle", o->oracle_file)->required();
  cmd->add_option("--tol", o->tol);

  cmd->callback([o]() {
    PathSolution sol = import_path_geojson(read_file(o->path_file));
    nlohmann::json oracle = nlohmann::json::parse(read_file(o->oracle_file));
    double expected = oracle.at("distance").get<double>();
    double recomputed = path_length(sol);
    double rel_stored = std::abs(sol.length - expected) / expected;
    double rel_geo = std::abs(recomputed - expected) / expected;
    double rel = std::max(rel_stored, rel_geo);
    bool pass = rel <= o->tol;
    std::cout << "relative length difference " << rel << " -> " << (pass ? "PASS" : "FAIL")
              << "\n";
    if (!pass) throw Error("verification failed");
  });
}

struct RenderOpts {
  std::string mesh_path, net_path, result_path, path_path, region_path, out_path;
};

void setup_render(CLI::App* cmd, const std::vector<std::string>& argv) {
  auto o = std::make_shared<RenderOpts>();
  cmd->add_option("mesh", o->mesh_path)->required();
  cmd->add_option("--net", o->net_path);
  cmd->add_option("--result", o->result_path);
  cmd->add_option("--path", o->path_path);
  cmd->add_option("--region", o->region_path);
  cmd->add_option("-o,--output", o->out_path)->required();

  cmd->callback([o, argv]() {
    TerrainMesh mesh = load_obj(read_file(o->mesh_path));
    TrussNetwork net;
    SolveResult result;
    PathSolution path;
    RegionSolution region;
    RenderInputs in;
    in.mesh = &mesh;
    if (!o->net_path.empty() && !o->result_path.empty()) {
      net = TrussNetwork::from_json(read_file(o->net_path));
      result = SolveResult::from_json(read_file(o->result_path));
      in.network = &net;
      in.result = &result;
    }
    if (!o->path_path.empty()) {
      path = import_path_geojson(read_file(o->path_path));
      in.path = &path;
    }
    if (!o->region_path.empty()) {
      region = region_from_json(read_file(o->region_path));
      in.region = &region;
    }
    write_file(o->out_path, render_svg(in));
    std::vector<std::string> inputs{o->mesh_path};
    if (in.network != nullptr) {
      inputs.push_back(o->net_path);
      inputs.push_back(o->result_path);
    }
    if (in.path != nullptr) inputs.push_back(o->path_path);
    if (in.region != nullptr) inputs.push_back(o->region_path);
    write_manifest(o->out_path, argv, inputs, nlohmann::json::object());
    std::cout << "wrote " << o->out_path << "\n";
  });
}

void setup_replay(CLI::App* cmd) {
  auto manifest_path = std::make_shared<std::string>();
  cmd->add_option("manifest", *manifest_path)->required();

  cmd->callback([manifest_path]() {
    nlohmann::json m = nlohmann::json::parse(read_file(*manifest_path));
    std::vector<std::string> argv = m.at("argv").get<std::vector<std::string>>();
    auto outputs = m.at("outputs");

    // Redirect every recorded output path to a temp file, re-run, compare.
    namespace fs = std::filesystem;
    fs::path tmpdir = fs::temp_directory_path() / ("tautpath-replay-" + fnv1a64(m.dump()));
    fs::create_directories(tmpdir);
    std::vector<std::pair<std::string, std::string>> remap;  // original -> temp
    for (auto it = outputs.begin(); it != outputs.end(); ++it) {
      std::string tmp = (tmpdir / fs::path(it.key()).filename()).string();
      remap.push_back({it.key(), tmp});
    }
    for (auto& arg : argv) {
      for (const auto& [orig, tmp] : remap) {
        if (arg == orig) arg = tmp;
      }
    }
    int rc = run_cli(argv);
    if (rc != 0) throw Error("replayed command failed with exit code " + std::to_string(rc));
    bool ok = true;
    for (const auto& [orig, tmp] : remap) {
      std::string expected = outputs.at(orig).get<std::string>();
      std::string actual = fnv1a64(read_file(tmp));
      bool match = expected == actual;
      std::cout << orig << ": " << (match ? "PASS" : "FAIL") << "\n";
      ok = ok && match;
    }
    fs::remove_all(tmpdir);
    if (!ok) throw Error("replay outputs differ");
  });
}

int run_cli(const std::vector<std::string>& argv) {
  CLI::App app{"terrain shortest paths via stretched truss relaxation"};
  app.require_subcommand(1);

  setup_genmesh(app.add_subcommand("genmesh", "generate a terrain mesh"), argv);
  setup_convert(app.add_subcommand("convert", "convert a mesh to a truss network"), argv);
  setup_solve(app.add_subcommand("solve", "pull the anchors apart until taut"), argv);
  setup_extract(app.add_subcommand("extract", "extract the path or region"), argv);
  setup_oracle(app.add_subcommand("oracle", "exact graph shortest path"), argv);
  setup_compare(app.add_subcommand("compare", "verify a path against the oracle"));
  setup_render(app.add_subcommand("render", "render an SVG figure"), argv);
  setup_replay(app.add_subcommand("replay", "re-run a manifest and verify outputs"));

  // CLI11's vector overload consumes arguments back to front.
  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  } catch (const AnchorsDisconnected& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const NumericalBlowup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const NoChain& e) {
    std::cerr << "error: " << e.what() << " (try a lower --threshold)\n";
    return kExitExtraction;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string what = e.what();
    if (what.find("verification") != std::string::npos ||
        what.find("replay") != std::string::npos) {
      return kExitVerification;
    }
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}
