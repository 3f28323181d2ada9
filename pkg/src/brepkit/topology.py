"""Half-edge navigation: reverse links, loop traversal, oriented
evaluation.

The stores keep only top-down links (solid -> shell -> face -> loop ->
half-edge -> edge). Everything bottom-up is derived here and cached per
part; parts are immutable, so one reverse index serves all threads.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass

import numpy as np

from .curves import curve_jet
from .errors import InconsistentTopologyError, OpenLoopError
from .model import Part
from .surfaces import surface_normal

_cache_lock = threading.Lock()
_reverse_cache = weakref.WeakKeyDictionary()


@dataclass(frozen=True, eq=False)
class TopoRef:
    """Reference to one face or edge of a part."""

    part: Part
    kind: str      # "face" | "edge"
    index: int

    def is_face(self) -> bool:
        return self.kind == "face"

    def is_edge(self) -> bool:
        return self.kind == "edge"

    @property
    def surface(self):
        if not self.is_face():
            raise InconsistentTopologyError("surface requested on a non-face")
        face = self.part.topology.faces[self.index]
        return self.part.geometry.surfaces[face.surface]

    @property
    def curve(self):
        if not self.is_edge():
            raise InconsistentTopologyError("curve requested on a non-edge")
        edge = self.part.topology.edges[self.index]
        return self.part.geometry.curves3d[edge.curve3d]


@dataclass(frozen=True, eq=False)
class ReverseIndex:
    halfedge_loop: np.ndarray       # unique parent, -1 when unreferenced
    loop_face: np.ndarray
    face_shells: tuple              # tuple of index tuples (may be shared)
    shell_solids: tuple
    edge_halfedges: tuple
    surface_faces: tuple
    curve3d_edges: tuple


def build_reverse_index(part: Part) -> ReverseIndex:
    """One linear pass over all forward links.

    Children with a unique-parent kind (half-edge in loop, loop in face)
    referenced twice raise InconsistentTopology; shared-parent kinds
    (faces in shells, shells in solids) accumulate every referent.
    """
    t = part.topology
    halfedge_loop = np.full(len(t.halfedges), -1, dtype=np.int64)
    loop_face = np.full(len(t.loops), -1, dtype=np.int64)
    face_shells = [[] for _ in t.faces]
    shell_solids = [[] for _ in t.shells]
    edge_halfedges = [[] for _ in t.edges]
    surface_faces = [[] for _ in part.geometry.surfaces]
    curve3d_edges = [[] for _ in part.geometry.curves3d]

    for si, solid in enumerate(t.solids):
        for sh in solid.shells:
            shell_solids[sh].append(si)
    for si, shell in enumerate(t.shells):
        for f in shell.faces:
            face_shells[f].append(si)
    for fi, face in enumerate(t.faces):
        surface_faces[face.surface].append(fi)
        for lp in face.loops:
            if loop_face[lp] not in (-1, fi):
                raise InconsistentTopologyError(
                    f"loop {lp} referenced by faces {loop_face[lp]} and {fi}")
            loop_face[lp] = fi
    for li, loop in enumerate(t.loops):
        for he in loop.halfedges:
            if halfedge_loop[he] not in (-1, li):
                raise InconsistentTopologyError(
                    f"half-edge {he} referenced by loops "
                    f"{halfedge_loop[he]} and {li}")
            halfedge_loop[he] = li
    for hi, he in enumerate(t.halfedges):
        edge_halfedges[he.edge].append(hi)
    for ei, e in enumerate(t.edges):
        curve3d_edges[e.curve3d].append(ei)

    halfedge_loop.flags.writeable = False
    loop_face.flags.writeable = False
    return ReverseIndex(
        halfedge_loop=halfedge_loop,
        loop_face=loop_face,
        face_shells=tuple(tuple(x) for x in face_shells),
        shell_solids=tuple(tuple(x) for x in shell_solids),
        edge_halfedges=tuple(tuple(x) for x in edge_halfedges),
        surface_faces=tuple(tuple(x) for x in surface_faces),
        curve3d_edges=tuple(tuple(x) for x in curve3d_edges))


def reverse_index(part: Part) -> ReverseIndex:
    """Cached :func:`build_reverse_index`; built once per part."""
    with _cache_lock:
        idx = _reverse_cache.get(part)
        if idx is None:
            idx = build_reverse_index(part)
            _reverse_cache[part] = idx
        return idx


def _halfedge_endpoints(part: Part, he_index: int):
    he = part.topology.halfedges[he_index]
    edge = part.topology.edges[he.edge]
    if he.orientation_wrt_edge:
        return edge.start_vertex, edge.end_vertex
    return edge.end_vertex, edge.start_vertex


def loop_halfedges_oriented(part: Part, loop_index: int) -> list:
    """Loop's half-edges as (halfedge_index, flip) in traversal order.

    ``flip`` says the 3D curve must be walked backwards. Raises OpenLoop
    when consecutive endpoint vertices fail to chain into a closed cycle.
    """
    loop = part.topology.loops[loop_index]
    hes = [int(h) for h in loop.halfedges]
    if not hes:
        raise OpenLoopError(f"loop {loop_index} has no half-edges")
    ends = [_halfedge_endpoints(part, h) for h in hes]
    for k in range(len(ends)):
        here, nxt = ends[k], ends[(k + 1) % len(ends)]
        if here[1] != nxt[0]:
            raise OpenLoopError(
                f"loop {loop_index} does not close: half-edge {hes[k]} ends "
                f"at vertex {here[1]}, next starts at vertex {nxt[0]}")
    return [(h, not part.topology.halfedges[h].orientation_wrt_edge)
            for h in hes]


def halfedge_eval(part: Part, halfedge_index: int, t: float,
                  space: str = "world3d") -> np.ndarray:
    """Point on a half-edge.

    ``param2d``: the pcurve at ``t`` (UV point in the owning face).
    ``world3d``: the owning edge's 3D curve, walked backwards
    (``t -> t0 + t1 - t``) when the orientation flag is false.
    """
    he = part.topology.halfedges[halfedge_index]
    if space == "param2d":
        pcurve = part.geometry.curves2d[he.curve2d]
        return curve_jet(pcurve, t, 0)[0]
    if space == "world3d":
        curve = part.geometry.curves3d[part.topology.edges[he.edge].curve3d]
        if not he.orientation_wrt_edge:
            t0, t1 = float(curve.interval[0]), float(curve.interval[1])
            t = t0 + t1 - t
        return curve_jet(curve, t, 0)[0]
    raise ValueError(f"unknown evaluation space '{space}'")


def face_oriented_normal(part: Part, face_index: int, u: float, v: float,
                         shell_use=None) -> np.ndarray:
    """Unit normal of a face honoring orientation flags.

    Without ``shell_use`` the face's own surface_orientation applies.
    With ``shell_use`` (a shell index) the result is further negated when
    that shell's use of the face has orientation_wrt_solid false, giving
    the normal pointing out of the shell's solid volume.
    """
    face = part.topology.faces[face_index]
    surface = part.geometry.surfaces[face.surface]
    n = surface_normal(surface, u, v, orientation=face.surface_orientation)
    if shell_use is None:
        return n
    shell = part.topology.shells[shell_use]
    slots = np.flatnonzero(shell.faces == face_index)
    if slots.size == 0:
        raise InconsistentTopologyError(
            f"face {face_index} is not used by shell {shell_use}")
    if not shell.orientation_wrt_solid[slots[0]]:
        n = -n
    return n


def euler_characteristic(part: Part) -> int:
    """V - E + F from entity counts."""
    return (part.geometry.vertices.shape[0] - len(part.topology.edges)
            + len(part.topology.faces))
