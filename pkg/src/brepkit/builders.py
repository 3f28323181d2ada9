"""Programmatic construction of valid parts.

`PartBuilder` stages entities under integer handles, links mates
automatically (all half-edges sharing an edge become mutual mates), and
derives the bounding box, so fixtures stay short and validate cleanly.
The fixture functions cover every geometry and topology feature the
rest of the library exercises: periodic seams, inner trimming loops,
B-spline boundaries, shared faces between shells, and degenerate
singular boundaries.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import UnknownMutationError
from .model import (
    EMPTY_MESH,
    BSplineCurve,
    BSplineSurface,
    Circle,
    CylinderSurface,
    Edge,
    Ellipse,
    Face,
    FaceMesh,
    GeometryStore,
    Halfedge,
    Line,
    Loop,
    Part,
    PlaneSurface,
    Shell,
    Solid,
    SphereSurface,
    TopologyStore,
    TorusSurface,
)
from .surfaces import surface_jet

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# Geometry helpers
# ---------------------------------------------------------------------------

def line_through(p, q, dim: int) -> Line:
    """Unit-speed line from p to q; zero direction when p == q."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    d = q - p
    length = float(np.linalg.norm(d))
    if length > 0.0:
        return Line(interval=(0.0, length), location=p, direction=d / length)
    return Line(interval=(0.0, 1.0), location=p, direction=np.zeros(dim))


def line2d(p, q) -> Line:
    return line_through(p, q, 2)


def line3d(p, q) -> Line:
    return line_through(p, q, 3)


def circle2d(center, radius, t0, t1, x_axis=(1.0, 0.0), y_axis=(0.0, 1.0)) -> Circle:
    return Circle(interval=(t0, t1), location=center, radius=radius,
                  x_axis=x_axis, y_axis=y_axis)


def circle3d(center, radius, t0, t1, x_axis, y_axis) -> Circle:
    return Circle(interval=(t0, t1), location=center, radius=radius,
                  x_axis=x_axis, y_axis=y_axis)


def arc_spline(p0, p1, p2, weight_mid: float) -> BSplineCurve:
    """Rational quadratic Bezier (exact circular arc for the right
    middle weight)."""
    poles = np.stack([np.asarray(p0, dtype=np.float64),
                      np.asarray(p1, dtype=np.float64),
                      np.asarray(p2, dtype=np.float64)])
    return BSplineCurve(interval=(0.0, 1.0), poles=poles,
                        knots=(0.0, 0.0, 0.0, 1.0, 1.0, 1.0), degree=2,
                        rational=True, weights=(1.0, weight_mid, 1.0))


def _grid_points(surface, us, vs) -> np.ndarray:
    out = np.empty((len(us), len(vs), 3))
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            out[i, j] = surface_jet(surface, u, v, 0)[0, 0]
    return out


def grid_mesh(surface, us, vs) -> FaceMesh:
    """Quad grid mesh over the given parameter lines, split into
    triangles wound along the surface's natural normal."""
    pts = _grid_points(surface, us, vs)
    nu, nv = pts.shape[:2]
    tris = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j
            b = (i + 1) * nv + j
            c = (i + 1) * nv + j + 1
            d = i * nv + j + 1
            tris.append((a, b, c))
            tris.append((a, c, d))
    return FaceMesh(points=pts.reshape(-1, 3), triangles=np.array(tris))


# ---------------------------------------------------------------------------
# Builder
# ---------------------------------------------------------------------------

class PartBuilder:
    """Stages geometry and topology; `build()` emits an immutable Part."""

    def __init__(self):
        self._vertices = []
        self._vertex_ids = {}
        self._curves2d = []
        self._curves3d = []
        self._surfaces = []
        self._edges = []
        self._edge_ids = {}
        self._halfedges = []
        self._loops = []
        self._faces = []
        self._shells = []
        self._solids = []
        self._meshes = {}

    def add_vertex(self, xyz) -> int:
        xyz = np.asarray(xyz, dtype=np.float64).reshape(3)
        key = xyz.tobytes()
        if key not in self._vertex_ids:
            self._vertex_ids[key] = len(self._vertices)
            self._vertices.append(xyz)
        return self._vertex_ids[key]

    def add_curve2d(self, curve) -> int:
        self._curves2d.append(curve)
        return len(self._curves2d) - 1

    def add_curve3d(self, curve) -> int:
        self._curves3d.append(curve)
        return len(self._curves3d) - 1

    def add_surface(self, surface) -> int:
        self._surfaces.append(surface)
        return len(self._surfaces) - 1

    def add_edge(self, curve3d: int, start: int, end: int) -> int:
        key = (curve3d, start, end)
        if key not in self._edge_ids:
            self._edge_ids[key] = len(self._edges)
            self._edges.append(key)
        return self._edge_ids[key]

    def add_halfedge(self, curve2d: int, edge: int, orientation: bool = True) -> int:
        self._halfedges.append((curve2d, edge, bool(orientation)))
        return len(self._halfedges) - 1

    def add_loop(self, halfedges) -> int:
        self._loops.append([int(h) for h in halfedges])
        return len(self._loops) - 1

    def add_face(self, surface: int, loops, outer_loop: int | None = None,
                 orientation: bool = True, exact_domain=None,
                 singularities=()) -> int:
        loops = [int(x) for x in loops]
        if outer_loop is None:
            outer_loop = loops[0]
        if exact_domain is None:
            d = self._surfaces[surface].trim_domain
            exact_domain = (d[0, 0], d[0, 1], d[1, 0], d[1, 1])
        singularities = np.asarray(singularities, dtype=np.float64).reshape(-1, 2)
        self._faces.append(dict(
            surface=surface, surface_orientation=bool(orientation),
            loops=loops, outer_loop=int(outer_loop),
            exact_domain=np.asarray(exact_domain, dtype=np.float64),
            has_singularities=singularities.shape[0] > 0,
            nr_singularities=singularities.shape[0],
            singularities=singularities))
        return len(self._faces) - 1

    def add_shell(self, faces, orientations=None) -> int:
        faces = [int(f) for f in faces]
        if orientations is None:
            orientations = [True] * len(faces)
        self._shells.append((faces, [bool(o) for o in orientations]))
        return len(self._shells) - 1

    def add_solid(self, shells) -> int:
        self._solids.append([int(s) for s in shells])
        return len(self._solids) - 1

    def set_mesh(self, face: int, mesh: FaceMesh) -> None:
        self._meshes[int(face)] = mesh

    def build(self) -> Part:
        by_edge = {}
        for hi, (_, edge, _) in enumerate(self._halfedges):
            by_edge.setdefault(edge, []).append(hi)
        halfedges = []
        for hi, (c2, edge, orient) in enumerate(self._halfedges):
            mates = [m for m in by_edge.get(edge, []) if m != hi]
            halfedges.append(Halfedge(curve2d=c2, edge=edge, mates=mates,
                                      orientation_wrt_edge=orient))
        vertices = (np.stack(self._vertices) if self._vertices
                    else np.zeros((0, 3)))
        if vertices.shape[0]:
            bbox = np.stack([vertices.min(axis=0), vertices.max(axis=0)])
        else:
            bbox = np.zeros((2, 3))
        geometry = GeometryStore(
            curves2d=self._curves2d, curves3d=self._curves3d,
            surfaces=self._surfaces, vertices=vertices, bbox=bbox)
        topology = TopologyStore(
            solids=[Solid(shells=s) for s in self._solids],
            shells=[Shell(faces=f, orientation_wrt_solid=o)
                    for f, o in self._shells],
            faces=[Face(**f) for f in self._faces],
            loops=[Loop(halfedges=h) for h in self._loops],
            halfedges=halfedges,
            edges=[Edge(curve3d=c, start_vertex=s, end_vertex=e)
                   for c, s, e in self._edges])
        meshes = [self._meshes.get(i, EMPTY_MESH)
                  for i in range(len(self._faces))]
        return Part(geometry=geometry, topology=topology, meshes=meshes)


def _chain_edge(b: PartBuilder, cache: dict, va: int, vb: int,
                pa, pb) -> tuple:
    """Line edge between two vertices, deduplicated regardless of
    direction. Returns (edge index, traversal is forward)."""
    key = (min(va, vb), max(va, vb))
    if key not in cache:
        lo, hi = key
        plo = pa if va == lo else pb
        phi = pb if va == lo else pa
        ci = b.add_curve3d(line3d(plo, phi))
        cache[key] = b.add_edge(ci, lo, hi)
    return cache[key], va == key[0]


def _plane_rect_face(b: PartBuilder, edge_cache: dict, location, ax, ay,
                     u_max: float, v_max: float, u_min: float = 0.0,
                     v_min: float = 0.0, surface: int | None = None) -> int:
    """Rectangular face of a plane; loop runs counterclockwise in UV."""
    location = np.asarray(location, dtype=np.float64)
    ax = np.asarray(ax, dtype=np.float64)
    ay = np.asarray(ay, dtype=np.float64)
    if surface is None:
        surface = b.add_surface(PlaneSurface(
            trim_domain=((u_min, v_min), (u_max, v_max)),
            location=location, x_axis=ax, y_axis=ay))
    uv = [(u_min, v_min), (u_max, v_min), (u_max, v_max), (u_min, v_max)]
    pts = [location + u * ax + v * ay for u, v in uv]
    vids = [b.add_vertex(p) for p in pts]
    hes = []
    for k in range(4):
        nxt = (k + 1) % 4
        edge, forward = _chain_edge(b, edge_cache, vids[k], vids[nxt],
                                    pts[k], pts[nxt])
        pcurve = b.add_curve2d(line2d(uv[k], uv[nxt]))
        hes.append(b.add_halfedge(pcurve, edge, forward))
    loop = b.add_loop(hes)
    return b.add_face(surface, [loop],
                      exact_domain=(u_min, v_min, u_max, v_max))


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

def primitive_box(dx: float = 1.0, dy: float = 1.0, dz: float = 1.0,
                  meshed: bool = True) -> Part:
    """Closed box: 1 solid, 1 shell, 6 planar faces, 12 edges,
    24 half-edges; all flags oriented outward."""
    if min(dx, dy, dz) <= 0:
        raise ValueError("box extents must be positive")
    b = PartBuilder()
    cache = {}
    o = np.zeros(3)
    x, y, z = np.eye(3)
    specs = [
        (o, y, x, dy, dx),                  # bottom, normal -z
        (np.array([0, 0, dz]), x, y, dx, dy),   # top, normal +z
        (o, x, z, dx, dz),                  # front, normal -y
        (np.array([0, dy, 0]), z, x, dz, dx),   # back, normal +y
        (o, z, y, dz, dy),                  # left, normal -x
        (np.array([dx, 0, 0]), y, z, dy, dz),   # right, normal +x
    ]
    faces = [_plane_rect_face(b, cache, *spec) for spec in specs]
    shell = b.add_shell(faces)
    b.add_solid([shell])
    if meshed:
        # one surface per face, added in face order
        for fi, (_, _, _, umax, vmax) in zip(faces, specs):
            b.set_mesh(fi, grid_mesh(b._surfaces[fi], [0.0, umax], [0.0, vmax]))
    return b.build()


def _cylinder_side_face(b: PartBuilder, radius: float, height: float,
                        center, orientation: bool,
                        counterclockwise: bool) -> tuple:
    """Cylindrical side face with a seam; returns (face, bottom circle
    edge, top circle edge, bottom-circle use flag, top-circle use flag).

    ``counterclockwise`` picks the loop direction in UV; the returned
    use flags say which direction the caps must traverse each circle to
    oppose this face's uses.
    """
    center = np.asarray(center, dtype=np.float64)
    x, y, z = np.eye(3)
    surf = b.add_surface(CylinderSurface(
        trim_domain=((0.0, 0.0), (TWO_PI, height)),
        location=center, radius=radius, x_axis=x, y_axis=y, z_axis=z))
    p_lo = center + radius * x
    p_hi = p_lo + height * z
    v_lo = b.add_vertex(p_lo)
    v_hi = b.add_vertex(p_hi)
    c_bot = b.add_curve3d(circle3d(center, radius, 0.0, TWO_PI, x, y))
    c_top = b.add_curve3d(circle3d(center + height * z, radius, 0.0, TWO_PI, x, y))
    c_seam = b.add_curve3d(line3d(p_lo, p_hi))
    e_bot = b.add_edge(c_bot, v_lo, v_lo)
    e_top = b.add_edge(c_top, v_hi, v_hi)
    e_seam = b.add_edge(c_seam, v_lo, v_hi)

    h = height
    if counterclockwise:
        # bottom forward, seam up at 2pi, top backward, seam down at 0
        hes = [
            b.add_halfedge(b.add_curve2d(line2d((0, 0), (TWO_PI, 0))), e_bot, True),
            b.add_halfedge(b.add_curve2d(line2d((TWO_PI, 0), (TWO_PI, h))), e_seam, True),
            b.add_halfedge(b.add_curve2d(line2d((TWO_PI, h), (0, h))), e_top, False),
            b.add_halfedge(b.add_curve2d(line2d((0, h), (0, 0))), e_seam, False),
        ]
        bot_use, top_use = True, False
    else:
        # seam up at 0, top forward, seam down at 2pi, bottom backward
        hes = [
            b.add_halfedge(b.add_curve2d(line2d((0, 0), (0, h))), e_seam, True),
            b.add_halfedge(b.add_curve2d(line2d((0, h), (TWO_PI, h))), e_top, True),
            b.add_halfedge(b.add_curve2d(line2d((TWO_PI, h), (TWO_PI, 0))), e_seam, False),
            b.add_halfedge(b.add_curve2d(line2d((TWO_PI, 0), (0, 0))), e_bot, False),
        ]
        bot_use, top_use = False, True
    loop = b.add_loop(hes)
    face = b.add_face(surf, [loop], orientation=orientation)
    return face, e_bot, e_top, bot_use, top_use


def _cap_circle_pcurve(radius: float, forward: bool, flip_uv: bool) -> Circle:
    """Pcurve of a 3D circle `(r cos t, r sin t, z)` in a cap plane.

    ``flip_uv`` marks the bottom-cap convention UV = (y, x); ``forward``
    False traces the reversed traversal (parameter s maps to 2pi - s).
    """
    if not flip_uv:
        axes = ((1, 0), (0, 1)) if forward else ((1, 0), (0, -1))
    else:
        axes = ((0, 1), (1, 0)) if forward else ((0, 1), (-1, 0))
    return circle2d((0.0, 0.0), radius, 0.0, TWO_PI,
                    x_axis=axes[0], y_axis=axes[1])


def primitive_cylinder_capped(radius: float = 1.0, height: float = 2.0,
                              meshed: bool = True) -> Part:
    """Closed cylinder: periodic side face with a seam plus two caps."""
    if radius <= 0 or height <= 0:
        raise ValueError("radius and height must be positive")
    b = PartBuilder()
    x, y, z = np.eye(3)
    side, e_bot, e_top, bot_use, top_use = _cylinder_side_face(
        b, radius, height, np.zeros(3), True, True)

    r = radius
    dom = ((-r, -r), (r, r))
    bot_surf = b.add_surface(PlaneSurface(
        trim_domain=dom, location=np.zeros(3), x_axis=y, y_axis=x))
    he = b.add_halfedge(
        b.add_curve2d(_cap_circle_pcurve(r, not bot_use, True)), e_bot, not bot_use)
    bot_face = b.add_face(bot_surf, [b.add_loop([he])])

    top_surf = b.add_surface(PlaneSurface(
        trim_domain=dom, location=height * z, x_axis=x, y_axis=y))
    he = b.add_halfedge(
        b.add_curve2d(_cap_circle_pcurve(r, not top_use, False)), e_top, not top_use)
    top_face = b.add_face(top_surf, [b.add_loop([he])])

    shell = b.add_shell([side, bot_face, top_face])
    b.add_solid([shell])
    if meshed:
        us = np.linspace(0.0, TWO_PI, 17)
        b.set_mesh(side, grid_mesh(b._surfaces[0], us, [0.0, height]))
        b.set_mesh(bot_face, _disk_mesh(radius, 0.0, down=True))
        b.set_mesh(top_face, _disk_mesh(radius, height, down=False))
    return b.build()


def _disk_mesh(radius: float, z: float, down: bool, segments: int = 16) -> FaceMesh:
    ts = np.linspace(0.0, TWO_PI, segments + 1)[:-1]
    ring = np.column_stack([radius * np.cos(ts), radius * np.sin(ts),
                            np.full(segments, z)])
    pts = np.vstack([[[0.0, 0.0, z]], ring])
    tris = []
    for k in range(segments):
        a, c = 1 + k, 1 + (k + 1) % segments
        tris.append((0, c, a) if down else (0, a, c))
    return FaceMesh(points=pts, triangles=np.array(tris))


def _ring_mesh(r_in: float, r_out: float, z: float, down: bool,
               segments: int = 16) -> FaceMesh:
    ts = np.linspace(0.0, TWO_PI, segments + 1)[:-1]
    inner = np.column_stack([r_in * np.cos(ts), r_in * np.sin(ts),
                             np.full(segments, z)])
    outer = np.column_stack([r_out * np.cos(ts), r_out * np.sin(ts),
                             np.full(segments, z)])
    pts = np.vstack([inner, outer])
    tris = []
    for k in range(segments):
        k2 = (k + 1) % segments
        a, bdx, c, d = k, segments + k, segments + k2, k2
        quad = [(a, bdx, c), (a, c, d)]
        if down:
            quad = [(t[0], t[2], t[1]) for t in quad]
        tris.extend(quad)
    return FaceMesh(points=pts, triangles=np.array(tris))


def primitive_annulus_plate(r_in: float = 1.0, r_out: float = 2.0,
                            height: float = 1.0, meshed: bool = True) -> Part:
    """Washer: outer/inner cylindrical sides plus two annular caps, each
    cap carrying an inner trimming loop."""
    if not 0 < r_in < r_out or height <= 0:
        raise ValueError("need 0 < r_in < r_out and positive height")
    b = PartBuilder()
    x, y, z = np.eye(3)
    outer_face, oe_bot, oe_top, obot_use, otop_use = _cylinder_side_face(
        b, r_out, height, np.zeros(3), True, True)
    inner_face, ie_bot, ie_top, ibot_use, itop_use = _cylinder_side_face(
        b, r_in, height, np.zeros(3), False, False)

    dom = ((-r_out, -r_out), (r_out, r_out))
    bot_surf = b.add_surface(PlaneSurface(
        trim_domain=dom, location=np.zeros(3), x_axis=y, y_axis=x))
    he_o = b.add_halfedge(
        b.add_curve2d(_cap_circle_pcurve(r_out, not obot_use, True)),
        oe_bot, not obot_use)
    he_i = b.add_halfedge(
        b.add_curve2d(_cap_circle_pcurve(r_in, not ibot_use, True)),
        ie_bot, not ibot_use)
    outer_loop = b.add_loop([he_o])
    inner_loop = b.add_loop([he_i])
    bot_face = b.add_face(bot_surf, [outer_loop, inner_loop],
                          outer_loop=outer_loop)

    top_surf = b.add_surface(PlaneSurface(
        trim_domain=dom, location=height * z, x_axis=x, y_axis=y))
    he_o = b.add_halfedge(
        b.add_curve2d(_cap_circle_pcurve(r_out, not otop_use, False)),
        oe_top, not otop_use)
    he_i = b.add_halfedge(
        b.add_curve2d(_cap_circle_pcurve(r_in, not itop_use, False)),
        ie_top, not itop_use)
    outer_loop = b.add_loop([he_o])
    inner_loop = b.add_loop([he_i])
    top_face = b.add_face(top_surf, [outer_loop, inner_loop],
                          outer_loop=outer_loop)

    shell = b.add_shell([outer_face, inner_face, bot_face, top_face])
    b.add_solid([shell])
    if meshed:
        us = np.linspace(0.0, TWO_PI, 17)
        b.set_mesh(outer_face, grid_mesh(b._surfaces[0], us, [0.0, height]))
        b.set_mesh(inner_face, grid_mesh(b._surfaces[1], us, [0.0, height]))
        b.set_mesh(bot_face, _ring_mesh(r_in, r_out, 0.0, down=True))
        b.set_mesh(top_face, _ring_mesh(r_in, r_out, height, down=False))
    return b.build()


def fan_fixture(n_blades: int = 8) -> Part:
    """Flat fan: a hub disc and ``n_blades`` ring-sector blades with
    rational-spline outer arcs; ``n_blades + 1`` faces on one plane."""
    if not 3 <= n_blades <= 64:
        raise ValueError("n_blades must be in [3, 64]")
    b = PartBuilder()
    r0, r1 = 1.0, 2.0
    n = n_blades
    thetas = np.arange(2 * n + 1) * (np.pi / n)
    surf = b.add_surface(PlaneSurface(
        trim_domain=((-r1, -r1), (r1, r1)),
        location=np.zeros(3), x_axis=np.array([1.0, 0, 0]),
        y_axis=np.array([0, 1.0, 0])))

    def on_circle(r, t):
        return np.array([r * np.cos(t), r * np.sin(t), 0.0])

    hub_v = [b.add_vertex(on_circle(r0, t)) for t in thetas[:-1]]
    hub_edges = []
    for j in range(2 * n):
        ta, tb = thetas[j], thetas[j + 1]
        ci = b.add_curve3d(circle3d(np.zeros(3), r0, ta, tb,
                                    np.array([1.0, 0, 0]), np.array([0, 1.0, 0])))
        hub_edges.append(b.add_edge(ci, hub_v[j], hub_v[(j + 1) % (2 * n)]))

    hub_hes = [b.add_halfedge(
        b.add_curve2d(circle2d((0.0, 0.0), r0, thetas[j], thetas[j + 1])),
        hub_edges[j], True) for j in range(2 * n)]
    hub_face = b.add_face(surf, [b.add_loop(hub_hes)],
                          exact_domain=(-r0, -r0, r0, r0))

    half = np.pi / (2 * n)
    w_mid = float(np.cos(half))
    for k in range(n):
        ja, jb = 2 * k, 2 * k + 1
        ta, tb = thetas[ja], thetas[jb]
        va, vb = hub_v[ja], hub_v[jb % (2 * n)]
        pa_in, pb_in = on_circle(r0, ta), on_circle(r0, tb)
        pa_out, pb_out = on_circle(r1, ta), on_circle(r1, tb)
        wa = b.add_vertex(pa_out)
        wb = b.add_vertex(pb_out)

        mid = (r1 / w_mid) * np.array([np.cos(0.5 * (ta + tb)),
                                       np.sin(0.5 * (ta + tb)), 0.0])
        arc3 = b.add_curve3d(arc_spline(pa_out, mid, pb_out, w_mid))
        e_arc = b.add_edge(arc3, wa, wb)
        e_ra = b.add_edge(b.add_curve3d(line3d(pa_in, pa_out)), va, wa)
        e_rb = b.add_edge(b.add_curve3d(line3d(pb_in, pb_out)), vb, wb)

        phi = ta + tb
        rev_axes = (np.array([np.cos(phi), np.sin(phi)]),
                    np.array([np.sin(phi), -np.cos(phi)]))
        hes = [
            # inner hub arc, reversed
            b.add_halfedge(b.add_curve2d(Circle(
                interval=(ta, tb), location=(0.0, 0.0), radius=r0,
                x_axis=rev_axes[0], y_axis=rev_axes[1])), hub_edges[ja], False),
            b.add_halfedge(b.add_curve2d(line2d(pa_in[:2], pa_out[:2])),
                           e_ra, True),
            b.add_halfedge(b.add_curve2d(arc_spline(
                pa_out[:2], mid[:2], pb_out[:2], w_mid)), e_arc, True),
            b.add_halfedge(b.add_curve2d(line2d(pb_out[:2], pb_in[:2])),
                           e_rb, False),
        ]
        b.add_face(surf, [b.add_loop(hes)],
                   exact_domain=(-r1, -r1, r1, r1))

    b.add_shell([hub_face] + list(range(1, n + 1)))
    return b.build()


def primitive_torus(max_radius: float = 2.0, min_radius: float = 0.5,
                    meshed: bool = False) -> Part:
    """Closed torus as one doubly periodic face cut along two seams;
    V - E + F = 0 (genus 1)."""
    if not 0 < min_radius < max_radius:
        raise ValueError("need 0 < min_radius < max_radius")
    b = PartBuilder()
    x, y, z = np.eye(3)
    surf = b.add_surface(TorusSurface(
        trim_domain=((0.0, 0.0), (TWO_PI, TWO_PI)),
        location=np.zeros(3), max_radius=max_radius, min_radius=min_radius,
        x_axis=x, y_axis=y, z_axis=z))
    p0 = np.array([max_radius + min_radius, 0.0, 0.0])
    v0 = b.add_vertex(p0)
    big = b.add_curve3d(circle3d(np.zeros(3), max_radius + min_radius,
                                 0.0, TWO_PI, x, y))
    small = b.add_curve3d(circle3d(max_radius * x, min_radius,
                                   0.0, TWO_PI, x, z))
    e_big = b.add_edge(big, v0, v0)
    e_small = b.add_edge(small, v0, v0)
    t = TWO_PI
    hes = [
        b.add_halfedge(b.add_curve2d(line2d((0, 0), (t, 0))), e_big, True),
        b.add_halfedge(b.add_curve2d(line2d((t, 0), (t, t))), e_small, True),
        b.add_halfedge(b.add_curve2d(line2d((t, t), (0, t))), e_big, False),
        b.add_halfedge(b.add_curve2d(line2d((0, t), (0, 0))), e_small, False),
    ]
    face = b.add_face(surf, [b.add_loop(hes)])
    shell = b.add_shell([face])
    b.add_solid([shell])
    if meshed:
        us = np.linspace(0.0, TWO_PI, 17)
        vs = np.linspace(0.0, TWO_PI, 9)
        b.set_mesh(face, grid_mesh(b._surfaces[0], us, vs))
    return b.build()


def primitive_sphere(radius: float = 1.0) -> Part:
    """Full sphere as one face with degenerate pole boundaries; the two
    poles are declared singularities."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    b = PartBuilder()
    x, y, z = np.eye(3)
    half_pi = 0.5 * np.pi
    surf = b.add_surface(SphereSurface(
        trim_domain=((0.0, -half_pi), (TWO_PI, half_pi)),
        location=np.zeros(3), radius=radius, x_axis=x, y_axis=y, z_axis=z))
    south = b.add_vertex(np.array([0.0, 0.0, -radius]))
    north = b.add_vertex(np.array([0.0, 0.0, radius]))
    # pole boundaries collapse to points; seam is the u = 0 meridian
    c_south = b.add_curve3d(Line(interval=(0.0, TWO_PI),
                                 location=(0.0, 0.0, -radius),
                                 direction=(0.0, 0.0, 0.0)))
    c_north = b.add_curve3d(Line(interval=(0.0, TWO_PI),
                                 location=(0.0, 0.0, radius),
                                 direction=(0.0, 0.0, 0.0)))
    c_seam = b.add_curve3d(circle3d(np.zeros(3), radius, -half_pi, half_pi, x, z))
    e_south = b.add_edge(c_south, south, south)
    e_north = b.add_edge(c_north, north, north)
    e_seam = b.add_edge(c_seam, south, north)
    hes = [
        b.add_halfedge(b.add_curve2d(line2d((0, -half_pi), (TWO_PI, -half_pi))),
                       e_south, True),
        b.add_halfedge(b.add_curve2d(line2d((TWO_PI, -half_pi), (TWO_PI, half_pi))),
                       e_seam, True),
        b.add_halfedge(b.add_curve2d(line2d((TWO_PI, half_pi), (0, half_pi))),
                       e_north, False),
        b.add_halfedge(b.add_curve2d(line2d((0, half_pi), (0, -half_pi))),
                       e_seam, False),
    ]
    face = b.add_face(surf, [b.add_loop(hes)],
                      singularities=[(0.0, -half_pi), (0.0, half_pi)])
    shell = b.add_shell([face])
    b.add_solid([shell])
    return b.build()


def bspline_patch(transformed: bool = True, meshed: bool = True) -> Part:
    """Single clamped bicubic patch with spline boundary curves; the
    whole part optionally carries a rigid transform."""
    ii, jj = np.meshgrid(np.arange(4.0), np.arange(4.0), indexing="ij")
    zz = 0.25 * np.sin(ii) * np.cos(jj)
    poles = np.stack([ii, jj, zz], axis=2)
    knots = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0])

    transform = None
    if transformed:
        axis = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
        ang = 0.5
        k = np.array([[0, -axis[2], axis[1]],
                      [axis[2], 0, -axis[0]],
                      [-axis[1], axis[0], 0]])
        rot = np.eye(3) + np.sin(ang) * k + (1 - np.cos(ang)) * (k @ k)
        transform = np.column_stack([rot, np.array([0.5, -0.25, 0.75])])

    b = PartBuilder()
    surf = b.add_surface(BSplineSurface(
        trim_domain=((0.0, 0.0), (1.0, 1.0)), transform=transform,
        poles=poles, u_knots=knots, v_knots=knots, u_degree=3, v_degree=3))

    def boundary(pole_row):
        return BSplineCurve(interval=(0.0, 1.0), transform=transform,
                            poles=pole_row, knots=knots, degree=3)

    def world(p):
        if transform is None:
            return np.asarray(p)
        return transform[:, :3] @ np.asarray(p) + transform[:, 3]

    c00 = b.add_vertex(world(poles[0, 0]))
    c10 = b.add_vertex(world(poles[3, 0]))
    c11 = b.add_vertex(world(poles[3, 3]))
    c01 = b.add_vertex(world(poles[0, 3]))
    e0 = b.add_edge(b.add_curve3d(boundary(poles[:, 0])), c00, c10)
    e1 = b.add_edge(b.add_curve3d(boundary(poles[3, :])), c10, c11)
    e2 = b.add_edge(b.add_curve3d(boundary(poles[:, 3])), c01, c11)
    e3 = b.add_edge(b.add_curve3d(boundary(poles[0, :])), c00, c01)
    hes = [
        b.add_halfedge(b.add_curve2d(line2d((0, 0), (1, 0))), e0, True),
        b.add_halfedge(b.add_curve2d(line2d((1, 0), (1, 1))), e1, True),
        b.add_halfedge(b.add_curve2d(line2d((1, 1), (0, 1))), e2, False),
        b.add_halfedge(b.add_curve2d(line2d((0, 1), (0, 0))), e3, False),
    ]
    face = b.add_face(surf, [b.add_loop(hes)])
    b.add_shell([face])
    if meshed:
        grid = np.linspace(0.0, 1.0, 5)
        b.set_mesh(face, grid_mesh(b._surfaces[0], grid, grid))
    return b.build()


def plate_pair() -> Part:
    """Two coplanar rectangular faces with areas 1 and 3 sharing an
    edge, both trimmed from the same plane surface."""
    b = PartBuilder()
    cache = {}
    surf = b.add_surface(PlaneSurface(
        trim_domain=((0.0, 0.0), (4.0, 1.0)),
        location=np.zeros(3), x_axis=np.array([1.0, 0, 0]),
        y_axis=np.array([0, 1.0, 0])))
    fa = _plane_rect_face(b, cache, np.zeros(3), np.array([1.0, 0, 0]),
                          np.array([0, 1.0, 0]), 1.0, 1.0, surface=surf)
    fb = _plane_rect_face(b, cache, np.zeros(3), np.array([1.0, 0, 0]),
                          np.array([0, 1.0, 0]), 4.0, 1.0, u_min=1.0,
                          surface=surf)
    b.add_shell([fa, fb])
    return b.build()


def _wall_spec(x0, dx, dy, dz):
    """Outward faces of the box [x0, x0+dx] x [0, dy] x [0, dz],
    excluding the x-min and x-max walls."""
    o = np.array([x0, 0.0, 0.0])
    x, y, z = np.eye(3)
    return [
        (o, y, x * 1.0, dy, dx),
        (o + dz * z, x * 1.0, y, dx, dy),
        (o, x * 1.0, z, dx, dz),
        (o + dy * y, z, x * 1.0, dz, dx),
    ]


def nonmanifold_bricks() -> Part:
    """Two unit bricks sharing the wall at x = 0: one face used by two
    shells with opposite orientation flags, edges with two mates."""
    b = PartBuilder()
    cache = {}
    x, y, z = np.eye(3)
    shared = _plane_rect_face(b, cache, np.zeros(3), y, z, 1.0, 1.0)

    left = [shared]
    left += [_plane_rect_face(b, cache, *spec)
             for spec in _wall_spec(-1.0, 1.0, 1.0, 1.0)]
    left.append(_plane_rect_face(b, cache, np.array([-1.0, 0, 0]), z, y, 1.0, 1.0))

    right = [shared]
    right += [_plane_rect_face(b, cache, *spec)
              for spec in _wall_spec(0.0, 1.0, 1.0, 1.0)]
    right.append(_plane_rect_face(b, cache, np.array([1.0, 0, 0]), y, z, 1.0, 1.0))

    # wall normal +x points out of the left solid, into the right one
    shell_l = b.add_shell(left, [True] + [True] * 5)
    shell_r = b.add_shell(right, [False] + [True] * 5)
    b.add_solid([shell_l])
    b.add_solid([shell_r])
    return b.build()


def without_mesh(part: Part, face_index: int) -> Part:
    """Copy of the part with one face's mesh emptied."""
    meshes = list(part.meshes)
    meshes[face_index] = EMPTY_MESH
    return dataclasses.replace(part, meshes=tuple(meshes))


# ---------------------------------------------------------------------------
# Targeted corruption
# ---------------------------------------------------------------------------

MUTATIONS = ("index_overflow", "mates_asymmetry", "open_loop",
             "wrong_outer_loop", "nonunit_axis")


def _replace_tuple(seq, index, value):
    out = list(seq)
    out[index] = value
    return tuple(out)


def corrupt(part: Part, mutation: str) -> Part:
    """Copy of the part with exactly one targeted invariant broken."""
    t = part.topology
    g = part.geometry
    if mutation == "index_overflow":
        face = t.faces[0]
        bad = dataclasses.replace(face, surface=len(g.surfaces) + 4)
        return dataclasses.replace(
            part, topology=dataclasses.replace(
                t, faces=_replace_tuple(t.faces, 0, bad)))

    if mutation == "mates_asymmetry":
        for hi, he in enumerate(t.halfedges):
            if he.mates.shape[0]:
                mate = int(he.mates[0])
                other = t.halfedges[mate]
                pruned = other.mates[other.mates != hi]
                bad = dataclasses.replace(other, mates=pruned)
                return dataclasses.replace(
                    part, topology=dataclasses.replace(
                        t, halfedges=_replace_tuple(t.halfedges, mate, bad)))
        raise ValueError("part has no mated half-edges to desymmetrize")

    if mutation == "open_loop":
        for loop in t.loops:
            for hi in loop.halfedges:
                he = t.halfedges[int(hi)]
                edge = t.edges[he.edge]
                if edge.start_vertex != edge.end_vertex:
                    bad = dataclasses.replace(
                        he, orientation_wrt_edge=not he.orientation_wrt_edge)
                    return dataclasses.replace(
                        part, topology=dataclasses.replace(
                            t, halfedges=_replace_tuple(
                                t.halfedges, int(hi), bad)))
        raise ValueError("part has no loop that a flip can break open")

    if mutation == "wrong_outer_loop":
        face = t.faces[0]
        outside = [i for i in range(len(t.loops)) if i not in face.loops]
        target = outside[0] if outside else len(t.loops) + 1
        bad = dataclasses.replace(face, outer_loop=target)
        return dataclasses.replace(
            part, topology=dataclasses.replace(
                t, faces=_replace_tuple(t.faces, 0, bad)))

    if mutation == "nonunit_axis":
        for store_name in ("curves3d", "curves2d"):
            store = getattr(g, store_name)
            for i, c in enumerate(store):
                if isinstance(c, (Circle, Ellipse)):
                    bad = dataclasses.replace(c, x_axis=1.25 * c.x_axis)
                    return dataclasses.replace(
                        part, geometry=dataclasses.replace(
                            g, **{store_name: _replace_tuple(store, i, bad)}))
        raise ValueError("part has no curve with axes to denormalize")

    raise UnknownMutationError(f"unknown mutation '{mutation}'")
