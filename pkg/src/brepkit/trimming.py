"""Trim-region construction and point-in-face classification.

A face's loops are discretized into closed UV polylines by adaptive
chordal refinement of the pcurves. Membership uses the even-odd crossing
rule: inside the outer polyline and outside every inner one. Points
within the chord tolerance of any polyline sit inside the discretization
error band and are deterministically classified outside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import curve_jet
from .errors import UnsupportedKindError
from .model import Part
from .topology import loop_halfedges_oriented

MAX_REFINE_DEPTH = 24
MIN_SEGMENTS_PER_HALFEDGE = 4


@dataclass(frozen=True, eq=False)
class TrimRegion:
    """Discretized trimming of one face."""

    face_index: int
    uv_box: np.ndarray        # 2x2: [min corner, max corner]
    polylines: tuple          # closed (k, 2) arrays, aligned with face.loops
    outer_pos: int            # position of the outer loop in face.loops
    chord_tol: float

    @property
    def box_area(self) -> float:
        ext = self.uv_box[1] - self.uv_box[0]
        return float(ext[0] * ext[1])

    def check_nesting(self) -> bool:
        """True when every inner polyline lies inside the outer one."""
        outer = self.polylines[self.outer_pos]
        for i, poly in enumerate(self.polylines):
            if i == self.outer_pos:
                continue
            if not np.all(_crossing_parity(outer, poly[:-1])):
                return False
        return True


def default_chord_tol(uv_box) -> float:
    ext = np.asarray(uv_box[1]) - np.asarray(uv_box[0])
    return 1e-3 * max(float(ext[0]), float(ext[1]), 1e-12)


def face_uv_box(part: Part, face_index: int) -> np.ndarray:
    """Intersection of the surface trim domain with the face exact domain."""
    face = part.topology.faces[face_index]
    surface = part.geometry.surfaces[face.surface]
    d = surface.trim_domain
    e = face.exact_domain
    lo = np.maximum(d[0], [e[0], e[1]])
    hi = np.minimum(d[1], [e[2], e[3]])
    return np.array([lo, hi])


def _point_segment_dist(p, a, b) -> float:
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    s = float(np.clip(np.dot(p - a, ab) / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + s * ab)))


def _refine(curve, t0, t1, p0, p1, tol, depth, out):
    tm = 0.5 * (t0 + t1)
    pm = curve_jet(curve, tm, 0)[0]
    if depth >= MAX_REFINE_DEPTH or _point_segment_dist(pm, p0, p1) < tol:
        out.append(p1)
        return
    _refine(curve, t0, tm, p0, pm, tol, depth + 1, out)
    _refine(curve, tm, t1, pm, p1, tol, depth + 1, out)


def discretize_pcurve(curve, chord_tol: float) -> np.ndarray:
    """Polyline along the pcurve's stored direction, endpoints included."""
    t0, t1 = float(curve.interval[0]), float(curve.interval[1])
    breaks = np.linspace(t0, t1, MIN_SEGMENTS_PER_HALFEDGE + 1)
    pts = [curve_jet(curve, t, 0)[0] for t in breaks]
    out = [pts[0]]
    for k in range(len(breaks) - 1):
        _refine(curve, breaks[k], breaks[k + 1], pts[k], pts[k + 1],
                chord_tol, 0, out)
    return np.asarray(out)


def build_trim_region(part: Part, face_index: int,
                      chord_tol: float | None = None) -> TrimRegion:
    """Discretize every loop of the face into a closed UV polyline."""
    face = part.topology.faces[face_index]
    box = face_uv_box(part, face_index)
    if chord_tol is None:
        chord_tol = default_chord_tol(box)

    polylines = []
    for loop_index in face.loops:
        loop_halfedges_oriented(part, int(loop_index))   # raises OpenLoop
        loop = part.topology.loops[int(loop_index)]
        pieces = []
        for he_index in loop.halfedges:
            he = part.topology.halfedges[int(he_index)]
            pcurve = part.geometry.curves2d[he.curve2d]
            try:
                pieces.append(discretize_pcurve(pcurve, chord_tol))
            except UnsupportedKindError as exc:
                raise UnsupportedKindError(
                    f"half-edge {int(he_index)}: {exc}") from None
        points = [pieces[0][0]]
        for piece in pieces:
            for p in piece[1:]:
                if np.linalg.norm(p - points[-1]) > 1e-13:
                    points.append(p)
        # force exact closure; pcurve endpoints agree only approximately
        if np.linalg.norm(points[-1] - points[0]) <= max(chord_tol, 1e-9):
            points[-1] = points[0]
        else:
            points.append(points[0])
        polylines.append(np.asarray(points))

    outer_pos = int(np.flatnonzero(face.loops == face.outer_loop)[0])
    return TrimRegion(face_index=face_index, uv_box=box,
                      polylines=tuple(polylines), outer_pos=outer_pos,
                      chord_tol=float(chord_tol))


def _crossing_parity(polyline: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Even-odd rule: True where a point's rightward ray crosses the
    closed polyline an odd number of times."""
    pts = np.atleast_2d(pts)
    a = polyline[:-1]
    b = polyline[1:]
    inside = np.zeros(pts.shape[0], dtype=bool)
    for start in range(0, pts.shape[0], 4096):
        chunk = pts[start:start + 4096]
        px = chunk[:, 0][:, None]
        py = chunk[:, 1][:, None]
        ya, yb = a[:, 1][None, :], b[:, 1][None, :]
        xa, xb = a[:, 0][None, :], b[:, 0][None, :]
        straddle = (ya > py) != (yb > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = xa + (py - ya) * (xb - xa) / (yb - ya)
        crossing = straddle & (px < xint)
        inside[start:start + 4096] = (crossing.sum(axis=1) % 2).astype(bool)
    return inside


def _dist_to_polyline(polyline: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest polyline segment."""
    pts = np.atleast_2d(pts)
    a = polyline[:-1]
    ab = polyline[1:] - a
    denom = np.einsum("ij,ij->i", ab, ab)
    denom = np.where(denom == 0.0, 1.0, denom)
    out = np.full(pts.shape[0], np.inf)
    for start in range(0, pts.shape[0], 2048):
        chunk = pts[start:start + 2048]
        ap = chunk[:, None, :] - a[None, :, :]
        s = np.clip(np.einsum("pij,ij->pi", ap, ab) / denom[None, :], 0.0, 1.0)
        closest = a[None, :, :] + s[:, :, None] * ab[None, :, :]
        d = np.linalg.norm(chunk[:, None, :] - closest, axis=2)
        out[start:start + 2048] = d.min(axis=1)
    return out


def points_in_face(region: TrimRegion, uvs: np.ndarray) -> np.ndarray:
    """Vectorized membership test for a batch of UV points."""
    uvs = np.atleast_2d(np.asarray(uvs, dtype=np.float64))
    ok = _crossing_parity(region.polylines[region.outer_pos], uvs)
    for i, poly in enumerate(region.polylines):
        if i == region.outer_pos:
            continue
        ok &= ~_crossing_parity(poly, uvs)
    near = np.zeros(uvs.shape[0], dtype=bool)
    active = np.flatnonzero(ok)
    if active.size:
        for poly in region.polylines:
            near[active] |= (_dist_to_polyline(poly, uvs[active])
                             < region.chord_tol)
            active = np.flatnonzero(ok & ~near)
            if not active.size:
                break
    return ok & ~near


def point_in_face(region: TrimRegion, uv) -> bool:
    """Scalar membership test, boundary band classified outside."""
    return bool(points_in_face(region, np.asarray(uv, dtype=np.float64))[0])
