"""Point sampling of parts with user-callback labeling.

Faces receive samples in proportion to their estimated trimmed area;
within a face, uniform UV proposals are filtered by the trim test and
thinned by the local area density, giving uniform-in-area points. Edges
(optional) are sampled by arc length. Every entity draws from its own
seeded random stream, so results are independent of iteration schedule.

The callback is invoked once per entity with the full parametric batch:
``callback(part, topo, params) -> payload`` where ``params`` is (n, 2)
UV for faces or (n,) parameters for edges. Returning None skips the
entity and removes its points from the output. Payloads are spread to
points by shape: a leading axis of length n maps rows to points, tuples
and lists spread componentwise, anything else repeats.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import curve_jet
from .errors import BrepError, CallbackError
from .model import BSplineSurface, Part, PlaneSurface, SphereSurface
from .surfaces import first_fundamental_density, surface_jet
from .topology import TopoRef, face_oriented_normal
from .trimming import TrimRegion, build_trim_region, points_in_face

EXHAUSTION_RATE = 1e-4
EXHAUSTION_DRAWS = 1_000_000

# Stream labels keeping every entity's generator distinct from the rest.
_STREAM_FACE, _STREAM_ESTIMATE, _STREAM_EDGE = 0, 1, 2


@dataclass(frozen=True)
class SamplerConfig:
    include_edges: bool = True
    edge_fraction: float = 0.1
    seed: int = 0
    chord_tol: float | None = None       # None: per-face from UV extent
    singularity_radius: float = 1e-6     # UV exclusion around declared points
    area_estimate_draws: int = 512
    density_margin: float = 1.2
    threads: int = 1                     # parallel parameter generation only


@dataclass
class SampleReport:
    """Per-run diagnostics; sampling always continues past entries here."""

    exhausted: list = field(default_factory=list)     # (part, face, message)
    skipped: list = field(default_factory=list)       # (part, kind, index)
    unsupported: list = field(default_factory=list)   # (part, kind, index, msg)


@dataclass(frozen=True, eq=False)
class SamplePoint:
    topo: TopoRef
    params: np.ndarray      # (2,) UV for faces, () parameter for edges
    position: np.ndarray
    payload: object


def _rng(seed: int, part_index: int, stream: int, entity: int):
    ss = np.random.SeedSequence(seed, spawn_key=(part_index, stream, entity))
    return np.random.default_rng(ss)


def _largest_remainder(weights: np.ndarray, total: int) -> np.ndarray:
    """Integer allocation proportional to weights, summing to total."""
    weights = np.asarray(weights, dtype=np.float64)
    out = np.zeros(weights.shape[0], dtype=np.int64)
    mass = float(weights.sum())
    if total <= 0 or mass <= 0.0 or weights.shape[0] == 0:
        return out
    quota = weights * (total / mass)
    out = np.floor(quota).astype(np.int64)
    short = total - int(out.sum())
    if short > 0:
        order = np.argsort(-(quota - np.floor(quota)), kind="stable")
        out[order[:short]] += 1
    return out


def _jittered_grid(rng, n: int) -> np.ndarray:
    """Stratified unit-square draws: near-square grid, one jitter each."""
    cols = max(int(np.sqrt(2 * n)), 1)
    rows = max(n // cols, 1)
    while rows * cols < n:
        cols += 1
    iu, iv = np.meshgrid(np.arange(cols), np.arange(rows), indexing="ij")
    cells = np.column_stack([iu.ravel(), iv.ravel()])[:n]
    jitter = rng.random((n, 2))
    return (cells + jitter) / np.array([cols, rows], dtype=np.float64)


@dataclass(frozen=True, eq=False)
class _FacePlan:
    region: TrimRegion
    area: float
    max_density: float
    singular_uv: np.ndarray


def _box_points(box, unit_pts):
    return box[0] + unit_pts * (box[1] - box[0])


def _estimate_face(part, part_index, face_index, config, report):
    try:
        region = build_trim_region(part, face_index, config.chord_tol)
    except BrepError as exc:
        report.unsupported.append((part_index, "face", face_index, str(exc)))
        return None
    face = part.topology.faces[face_index]
    surface = part.geometry.surfaces[face.surface]
    rng = _rng(config.seed, part_index, _STREAM_ESTIMATE, face_index)
    uv = _box_points(region.uv_box, _jittered_grid(rng, config.area_estimate_draws))
    inside = points_in_face(region, uv)
    if not inside.any():
        return _FacePlan(region=region, area=0.0, max_density=0.0,
                         singular_uv=face.singularities)
    try:
        dens = np.array([first_fundamental_density(surface, p[0], p[1])
                         for p in uv[inside]])
    except BrepError as exc:
        report.unsupported.append((part_index, "face", face_index, str(exc)))
        return None
    frac = inside.mean()
    area = region.box_area * float(frac) * float(dens.mean())
    return _FacePlan(region=region, area=area,
                     max_density=float(dens.max()),
                     singular_uv=face.singularities)


def _sample_face(part, part_index, face_index, plan, count, config, report):
    """Accepted UV points, uniform in surface area."""
    face = part.topology.faces[face_index]
    surface = part.geometry.surfaces[face.surface]
    rng = _rng(config.seed, part_index, _STREAM_FACE, face_index)
    got = []
    n_got, draws = 0, 0
    cap = plan.max_density * config.density_margin
    while n_got < count:
        batch = max(256, 2 * (count - n_got))
        draws += batch
        uv = _box_points(plan.region.uv_box, rng.random((batch, 2)))
        thin = rng.random(batch)
        keep = points_in_face(plan.region, uv)
        for sing in plan.singular_uv:
            keep &= np.linalg.norm(uv - sing, axis=1) >= config.singularity_radius
        idx = np.flatnonzero(keep)
        if idx.size and cap > 0.0:
            dens = np.array([first_fundamental_density(surface, uv[i, 0], uv[i, 1])
                             for i in idx])
            idx = idx[thin[idx] < dens / cap]
        elif cap <= 0.0:
            idx = idx[:0]
        got.append(uv[idx])
        n_got += idx.size
        if draws >= EXHAUSTION_DRAWS and n_got / draws < EXHAUSTION_RATE:
            report.exhausted.append(
                (part_index, face_index,
                 f"acceptance rate {n_got / draws:.2e} after {draws} draws"))
            break
    out = np.concatenate(got) if got else np.zeros((0, 2))
    return out[:count]


def _edge_lengths(part, part_index, config, report):
    """Approximate arc length and speed bound per edge (64-point probe)."""
    lengths = np.zeros(len(part.topology.edges))
    caps = np.zeros(len(part.topology.edges))
    for ei, edge in enumerate(part.topology.edges):
        curve = part.geometry.curves3d[edge.curve3d]
        t0, t1 = float(curve.interval[0]), float(curve.interval[1])
        if t1 <= t0:
            continue
        ts = np.linspace(t0, t1, 64)
        try:
            speeds = np.array([np.linalg.norm(curve_jet(curve, t, 1)[1])
                               for t in ts])
        except BrepError as exc:
            report.unsupported.append((part_index, "edge", ei, str(exc)))
            continue
        lengths[ei] = float(speeds.mean()) * (t1 - t0)
        caps[ei] = float(speeds.max()) * config.density_margin
    return lengths, caps


def _sample_edge(part, part_index, edge_index, cap, count, config):
    edge = part.topology.edges[edge_index]
    curve = part.geometry.curves3d[edge.curve3d]
    t0, t1 = float(curve.interval[0]), float(curve.interval[1])
    rng = _rng(config.seed, part_index, _STREAM_EDGE, edge_index)
    got = []
    n_got = 0
    while n_got < count:
        batch = max(64, 2 * (count - n_got))
        ts = t0 + (t1 - t0) * rng.random(batch)
        thin = rng.random(batch)
        speeds = np.array([np.linalg.norm(curve_jet(curve, t, 1)[1]) for t in ts])
        keep = thin < speeds / cap
        got.append(ts[keep])
        n_got += int(keep.sum())
    return np.concatenate(got)[:count]


def _spread_payload(payload, n: int, where: str):
    """One payload value per point, by the documented shape rules."""
    if isinstance(payload, np.ndarray):
        if payload.ndim >= 1 and payload.shape[0] == n:
            return list(payload)
        if payload.ndim == 0:
            return [payload[()]] * n
        raise CallbackError(
            f"{where}: payload array has leading dimension "
            f"{payload.shape[0] if payload.ndim else 'none'}, expected {n}")
    if isinstance(payload, (tuple, list)):
        spread = [_spread_payload(c, n, where) for c in payload]
        return [tuple(parts) for parts in zip(*spread)]
    return [payload] * n


def _invoke(callback, part, topo, params, where):
    try:
        return callback(part, topo, params)
    except Exception as exc:
        raise CallbackError(f"{where}: callback raised {type(exc).__name__}: "
                            f"{exc}") from exc


def sample_parts(parts, num_samples: int, callback,
                 config: SamplerConfig | None = None,
                 report: SampleReport | None = None):
    """Labeled point cloud: (positions (N, 3), payloads list of length N)."""
    samples = sample_parts_detailed(parts, num_samples, callback, config, report)
    if not samples:
        return np.zeros((0, 3)), []
    positions = np.stack([s.position for s in samples])
    return positions, [s.payload for s in samples]


def sample_parts_detailed(parts, num_samples: int, callback,
                          config: SamplerConfig | None = None,
                          report: SampleReport | None = None):
    """As :func:`sample_parts` but returning full :class:`SamplePoint`s."""
    config = config or SamplerConfig()
    report = report if report is not None else SampleReport()
    if num_samples <= 0:
        raise ValueError("num_samples must be positive")

    # Stage 1: fix the entity visit order and per-entity counts.
    jobs = []
    part_budgets = _part_allocation(parts, num_samples, config, report)
    for part_index, (part, budget, plans, edge_data) in enumerate(part_budgets):
        n_faces = len(part.topology.faces)
        edge_total = 0
        if config.include_edges and len(part.topology.edges):
            edge_total = int(round(budget * config.edge_fraction))
        face_total = budget - edge_total

        areas = np.array([p.area if p is not None else 0.0 for p in plans])
        face_counts = _largest_remainder(areas, face_total)
        for fi in range(n_faces):
            if face_counts[fi]:
                jobs.append(("face", part_index, fi, plans[fi],
                             int(face_counts[fi])))
        if edge_total > 0:
            lengths, caps = edge_data
            edge_counts = _largest_remainder(lengths, edge_total)
            for ei in range(len(part.topology.edges)):
                if edge_counts[ei]:
                    jobs.append(("edge", part_index, ei, caps[ei],
                                 int(edge_counts[ei])))

    # Stage 2: generate parameters. Every entity owns a seeded stream, so
    # the result is independent of scheduling and thread count.
    def _generate(job):
        kind, part_index, index, aux, count = job
        local = SampleReport()
        if kind == "face":
            params = _sample_face(parts[part_index], part_index, index, aux,
                                  count, config, local)
        else:
            params = _sample_edge(parts[part_index], part_index, index, aux,
                                  count, config)
        return params, local

    if config.threads > 1 and len(jobs) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            generated = list(pool.map(_generate, jobs))
    else:
        generated = [_generate(job) for job in jobs]

    # Stage 3: callbacks and assembly, serialized in entity order.
    out = []
    for job, (params, local) in zip(jobs, generated):
        report.exhausted.extend(local.exhausted)
        report.skipped.extend(local.skipped)
        report.unsupported.extend(local.unsupported)
        kind, part_index, index, _, _ = job
        if params.shape[0] == 0:
            continue
        part = parts[part_index]
        topo = TopoRef(part=part, kind=kind, index=index)
        where = f"part {part_index} {kind} {index}"
        payload = _invoke(callback, part, topo, params, where)
        if payload is None:
            report.skipped.append((part_index, kind, index))
            continue
        values = _spread_payload(payload, params.shape[0], where)
        if kind == "face":
            surface = part.geometry.surfaces[part.topology.faces[index].surface]
            for k in range(params.shape[0]):
                pos = surface_jet(surface, params[k, 0], params[k, 1], 0)[0, 0]
                out.append(SamplePoint(topo=topo, params=params[k],
                                       position=pos, payload=values[k]))
        else:
            curve = part.geometry.curves3d[part.topology.edges[index].curve3d]
            for k in range(params.shape[0]):
                pos = curve_jet(curve, params[k], 0)[0]
                out.append(SamplePoint(topo=topo, params=np.float64(params[k]),
                                       position=pos, payload=values[k]))
    return out


def _part_allocation(parts, num_samples, config, report):
    """Precompute per-part budgets, face plans, and edge length tables."""
    staged = []
    part_areas = []
    for part_index, part in enumerate(parts):
        plans = [_estimate_face(part, part_index, fi, config, report)
                 for fi in range(len(part.topology.faces))]
        edge_data = _edge_lengths(part, part_index, config, report)
        staged.append((part, plans, edge_data))
        part_areas.append(sum(p.area for p in plans if p is not None))
    budgets = _largest_remainder(np.array(part_areas), num_samples)
    return [(part, int(b), plans, edge_data)
            for (part, plans, edge_data), b in zip(staged, budgets)]


# ---------------------------------------------------------------------------
# Built-in callbacks and noise
# ---------------------------------------------------------------------------

def _cb_points(part, topo, params):
    if not topo.is_face():
        return None
    return np.ones(np.atleast_2d(params).shape[0])


def _cb_normals(part, topo, params):
    if not topo.is_face():
        return None
    uv = np.atleast_2d(params)
    return np.stack([face_oriented_normal(part, topo.index, p[0], p[1])
                     for p in uv])


def _cb_feature_edge(part, topo, params):
    if topo.is_face():
        return np.zeros(np.atleast_2d(params).shape[0])
    return np.ones(np.asarray(params).shape[0])


def _cb_primitive_degree(part, topo, params):
    if not topo.is_face():
        return None
    surface = topo.surface
    if isinstance(surface, BSplineSurface):
        if surface.u_rational or surface.v_rational:
            return None
        degree = (surface.u_degree, surface.v_degree)
    elif isinstance(surface, PlaneSurface):
        degree = (1, 1)
    elif isinstance(surface, SphereSurface):
        degree = ((2, 2), (3, 3))
    else:
        degree = ((2, 3), (3, 2))
    normals = _cb_normals(part, topo, params)
    return [normals, degree]


def builtin_callbacks() -> dict:
    """The stock labeling callbacks, by task name."""
    return {
        "points": _cb_points,
        "normals": _cb_normals,
        "feature_edge": _cb_feature_edge,
        "primitive_degree": _cb_primitive_degree,
    }


def add_noise(positions: np.ndarray, sigma: float, seed: int = 0,
              diagonal: float | None = None) -> np.ndarray:
    """Gaussian offsets with standard deviation ``sigma x diagonal``.

    ``diagonal`` defaults to the positions' own bounding-box diagonal.
    """
    positions = np.asarray(positions, dtype=np.float64)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0 or positions.size == 0:
        return positions.copy()
    if diagonal is None:
        diagonal = float(np.linalg.norm(
            positions.max(axis=0) - positions.min(axis=0)))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return positions + rng.normal(0.0, sigma * diagonal, positions.shape)
