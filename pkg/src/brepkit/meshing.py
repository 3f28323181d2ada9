"""Per-face mesh concatenation, seam welding, and export.

Patch meshes come from the file independent per face; concatenation
offsets indices and welds vertices that coincide across patch seams
within a tolerance scaled by the bounding-box diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import BrepError
from .model import FaceMesh, Part

WELD_TOL_FACTOR = 1e-7


def _flatten_meshes(meshes, out):
    if meshes is None:
        return
    if isinstance(meshes, FaceMesh):
        if not meshes.is_empty:
            out.append((meshes.points, meshes.triangles))
        return
    if isinstance(meshes, dict):
        for key in sorted(meshes):
            _flatten_meshes(meshes[key], out)
        return
    if isinstance(meshes, (list, tuple)):
        for m in meshes:
            _flatten_meshes(m, out)
        return
    raise TypeError(f"cannot interpret {type(meshes).__name__} as meshes")


class _UnionFind:
    def __init__(self, n):
        self.parent = np.arange(n)

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # lower index wins so representatives are stable
            lo, hi = (ra, rb) if ra < rb else (rb, ra)
            self.parent[hi] = lo


def weld_vertices(points: np.ndarray, triangles: np.ndarray, tol: float):
    """Merge vertices closer than ``tol``; representative is the lowest
    index, output order follows first occurrence."""
    if points.shape[0] == 0:
        return points, triangles
    pairs = cKDTree(points).query_pairs(tol, output_type="ndarray")
    uf = _UnionFind(points.shape[0])
    for a, b in pairs:
        uf.union(int(a), int(b))
    root = np.array([uf.find(i) for i in range(points.shape[0])])
    reps, new_index = np.unique(root, return_inverse=True)
    return points[reps], new_index[triangles]


def get_mesh(meshes, parts=None):
    """Concatenate patch meshes into one (V, F) pair.

    ``meshes`` may be a FaceMesh, a per-face list (with None holes), or
    a per-part list of per-face lists. With ``parts`` given, triangles
    of faces whose surface_orientation is False are flipped first so
    patch windings agree; ``parts`` must then mirror the mesh nesting.
    """
    flat = []
    if parts is not None:
        _flatten_with_orientation(meshes, parts, flat)
    else:
        _flatten_meshes(meshes, flat)
    if not flat:
        return np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64)

    pts = []
    tris = []
    offset = 0
    for p, t in flat:
        pts.append(p)
        tris.append(t + offset)
        offset += p.shape[0]
    points = np.concatenate(pts)
    triangles = np.concatenate(tris)
    diag = float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
    return weld_vertices(points, triangles, WELD_TOL_FACTOR * max(diag, 1e-30))


def _flatten_with_orientation(meshes, parts, out):
    if isinstance(parts, Part):
        parts = [parts]
    if isinstance(meshes, dict):
        meshes = [meshes[k] for k in sorted(meshes)]
    if meshes and isinstance(meshes[0], (FaceMesh, type(None))):
        meshes = [meshes]        # one part's per-face list
    for part, per_face in zip(parts, meshes):
        for fi, fm in enumerate(per_face):
            if fm is None or fm.is_empty:
                continue
            tris = fm.triangles
            if not part.topology.faces[fi].surface_orientation:
                tris = tris[:, ::-1]
            out.append((fm.points, tris))


def part_failure_fraction(part: Part) -> float:
    """Fraction of the part's faces with an empty mesh slot."""
    n = len(part.topology.faces)
    if n == 0:
        return 0.0
    empty = sum(1 for m in part.meshes if m.is_empty)
    missing = n - len(part.meshes)
    return (empty + max(missing, 0)) / n


@dataclass
class MeshFailureReport:
    per_file: dict = field(default_factory=dict)    # path -> fraction
    errors: dict = field(default_factory=dict)      # path -> message
    failed_faces: int = 0
    total_faces: int = 0

    @property
    def aggregate(self) -> float:
        return self.failed_faces / self.total_faces if self.total_faces else 0.0


def mesh_failure_rate(paths) -> MeshFailureReport:
    """Empty-mesh fraction per file and pooled over the readable corpus."""
    from .io_hdf5 import read_parts

    report = MeshFailureReport()
    for path in paths:
        try:
            parts = read_parts(path)
        except BrepError as exc:
            report.errors[str(path)] = str(exc)
            continue
        failed = total = 0
        for part in parts:
            n = len(part.topology.faces)
            total += n
            failed += sum(1 for m in part.meshes[:n] if m.is_empty)
            failed += max(n - len(part.meshes), 0)
        report.per_file[str(path)] = failed / total if total else 0.0
        report.failed_faces += failed
        report.total_faces += total
    return report


def export_mesh_text(points: np.ndarray, triangles: np.ndarray, stream):
    """Vertex lines then 1-based face lines (the common OBJ layout)."""
    for p in np.asarray(points, dtype=np.float64):
        stream.write(f"v {p[0]:.17g} {p[1]:.17g} {p[2]:.17g}\n")
    for t in np.asarray(triangles, dtype=np.int64):
        stream.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")
