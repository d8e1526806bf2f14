import math

import pytest

import tautpath as tp


def hill_mesh(seed=3, split=True):
    spec = tp.TerrainSpec()
    spec.kind = tp.TerrainKind.gaussian_hill
    spec.ncols = 9
    spec.nrows = 9
    spec.center_x = 4.0
    spec.center_y = 4.0
    spec.amplitude = 3.0
    spec.sigma = 2.0
    spec.seed = seed
    mesh = tp.mesh_unstructured(tp.synth_heightfield(spec), 1.4, seed)
    net = tp.build_truss(mesh, split, (0, 0, 0), (8, 8, 0))
    return mesh, net


def test_heightfield_round_trip():
    spec = tp.TerrainSpec()
    spec.kind = tp.TerrainKind.fbm
    spec.ncols = 12
    spec.nrows = 10
    spec.amplitude = 3.0
    spec.seed = 7
    hf = tp.synth_heightfield(spec)
    back = tp.load_heightfield(tp.save_heightfield(hf))
    assert back.ncols == 12 and back.nrows == 10
    assert back.samples == pytest.approx(hf.samples, abs=1e-6)


def test_structured_mesh_counts():
    spec = tp.TerrainSpec()
    spec.ncols = 5
    spec.nrows = 4
    hf = tp.synth_heightfield(spec)
    quad = tp.mesh_structured_quad(hf)
    assert len(quad.vertices) == 20
    assert len(quad.faces) == 12
    tri = tp.mesh_structured_tri(hf, tp.Diagonal.toward_ne)
    assert len(tri.faces) == 24
    assert tp.validate_mesh(tri).clean()


def test_obj_round_trip():
    mesh, _ = hill_mesh()
    back = tp.load_obj(tp.save_obj(mesh))
    assert len(back.vertices) == len(mesh.vertices)
    assert back.faces == mesh.faces


def test_split_conversion_counts():
    mesh, net = hill_mesh(split=True)
    edges = len(net.elements) // 2
    assert len(net.nodes) == len(mesh.vertices) + edges
    unsplit = tp.build_truss(mesh, False, (0, 0, 0), (8, 8, 0))
    assert len(unsplit.elements) == edges
    d_split = tp.dijkstra(net, net.anchor_a, net.anchor_b).distance
    d_unsplit = tp.dijkstra(unsplit, unsplit.anchor_a, unsplit.anchor_b).distance
    assert d_split == d_unsplit


def test_solve_and_extract_agrees_with_oracle():
    _, net = hill_mesh()
    result = tp.solve_taut(net, tp.SolverParams())
    assert result.cause == tp.Termination.taut
    sol = tp.extract_chain(result, net)
    oracle = tp.dijkstra(net, net.anchor_a, net.anchor_b)
    assert sol.length == pytest.approx(oracle.distance, rel=1e-6)
    assert sol.chain[0] == net.anchor_a
    assert sol.chain[-1] == net.anchor_b
    assert tp.path_length(sol) == pytest.approx(sol.length, rel=1e-12)
    assert sol.length >= tp.euclidean_bound(net, net.anchor_a, net.anchor_b)


def test_geojson_export_round_trip():
    _, net = hill_mesh()
    result = tp.solve_taut(net, tp.SolverParams())
    sol = tp.extract_chain(result, net)
    text = tp.export_path(sol, tp.PathFormat.geojson)
    back = tp.import_path_geojson(text)
    assert back.chain == sol.chain
    assert back.length == sol.length


def test_region_mode():
    mesh, net = hill_mesh(split=False)
    result = tp.solve_taut(net, tp.SolverParams())
    region = tp.extract_region(result, net, mesh, 0.9)
    assert len(region.faces) > 0
    assert all(s >= 0 for s in region.face_strain)
    everything = tp.extract_region(result, net, mesh, 0.0)
    assert len(everything.faces) == len(mesh.faces)


def test_flood_mask():
    spec = tp.TerrainSpec()
    spec.kind = tp.TerrainKind.valley
    spec.ncols = 11
    spec.nrows = 9
    spec.depth = 4.0
    spec.width = 2.0
    mesh = tp.mesh_structured_tri(tp.synth_heightfield(spec), tp.Diagonal.toward_ne)
    flooded, mask = tp.apply_flood_mask(mesh, 2.0)
    assert len(flooded.faces) < len(mesh.faces)
    assert len(mask.excluded_vertices) > 0


def test_errors_are_python_exceptions():
    mesh, _ = hill_mesh()
    with pytest.raises(ValueError):
        bad = tp.SolverParams()
        bad.pull_increment = 0.5
        _, net = hill_mesh()
        tp.solve_taut(net, bad)
    with pytest.raises(tp.TautPathError):
        tp.build_truss(mesh, True, (900, 900, 0), (0, 0, 0))


def test_sphere_geodesic():
    assert tp.sphere_geodesic((1, 0, 0), (-1, 0, 0), 1.0) == pytest.approx(math.pi)


def test_render_svg():
    mesh, net = hill_mesh()
    result = tp.solve_taut(net, tp.SolverParams())
    svg = tp.render_svg(mesh, network=net, result=result)
    assert "<svg" in svg and "</svg>" in svg
