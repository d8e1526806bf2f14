"""Terrain shortest paths via taut spring networks.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface so `import tautpath` is all a script needs.
"""

from tautpath._core import (  # noqa: F401
    AnchorsDisconnectedError,
    Diagonal,
    GraphDistanceResult,
    HeightField,
    InvalidSpecError,
    MeshProvenance,
    NoChainError,
    PathFormat,
    PathSolution,
    PhaseRecord,
    RegionMask,
    RegionSolution,
    SimState,
    SolveResult,
    SolverParams,
    TautPathError,
    TerrainKind,
    TerrainMesh,
    TerrainSpec,
    Termination,
    TrussElement,
    TrussNetwork,
    ValidationReport,
    Vec3,
    apply_flood_mask,
    bellman_ford_distance,
    build_truss,
    count_shortest_paths,
    dijkstra,
    euclidean_bound,
    export_path,
    extract_chain,
    extract_region,
    import_path_geojson,
    load_heightfield,
    load_obj,
    mesh_structured_quad,
    mesh_structured_tri,
    mesh_unstructured,
    nearest_vertex,
    path_length,
    region_from_json,
    region_to_json,
    render_svg,
    save_heightfield,
    save_obj,
    solve_taut,
    sphere_geodesic,
    synth_heightfield,
    validate_mesh,
)

__all__ = [name for name in dir() if not name.startswith("_")]
