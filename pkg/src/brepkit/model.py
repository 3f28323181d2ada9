"""In-memory model of half-edge B-rep parts.

A :class:`Part` is one solid-model part: a geometry store (parametric
curves and surfaces plus vertices), a topology store (solids, shells,
faces, loops, half-edges, edges with top-down links only), and one mesh
slot per face (possibly empty).

Conventions:

- all indices are 0-based; the I/O layer owns the mapping to on-disk
  group names
- numeric arrays are float64 (int64 for indices) and frozen read-only;
  parts are immutable after construction and safe to share across threads
- topology stores only top-down links; reverse links are derived on
  demand (see :mod:`brepkit.topology`)
"""

from __future__ import annotations

from dataclasses import dataclass, fields, is_dataclass
from typing import ClassVar, Optional

import numpy as np

# Tolerances used by the validator. Length-like tolerances scale with the
# bounding-box diagonal; angular/unit ones are absolute.
VERTEX_BBOX_TOL = 1e-9
AXIS_TOL = 1e-9
TRANSFORM_TOL = 1e-9
ELLIPSE_FOCI_TOL = 1e-6


def _real(a):
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


def _index(a):
    a = np.atleast_1d(np.array(a, dtype=np.int64))
    a.flags.writeable = False
    return a


def _flags(a):
    a = np.atleast_1d(np.array(a, dtype=bool))
    a.flags.writeable = False
    return a


def _opt_real(a):
    return None if a is None else _real(a)


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True, kw_only=True, eq=False)
class Curve:
    """Base for parametric curves in R^2 or R^3.

    ``interval`` is the parametric domain [t0, t1]. ``transform`` is an
    optional 3x4 rigid transform [R | t] applied after evaluation; only
    3D curves may carry one.
    """

    kind: ClassVar[str] = "?"
    interval: np.ndarray
    transform: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "interval", _real(self.interval))
        object.__setattr__(self, "transform", _opt_real(self.transform))

    @property
    def shape_name(self) -> str:
        return self.kind

    @property
    def dimension(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True, kw_only=True, eq=False)
class Line(Curve):
    kind: ClassVar[str] = "Line"
    location: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "location", _real(self.location))
        object.__setattr__(self, "direction", _real(self.direction))

    @property
    def dimension(self):
        return self.location.shape[0]


@dataclass(frozen=True, kw_only=True, eq=False)
class Circle(Curve):
    kind: ClassVar[str] = "Circle"
    location: np.ndarray
    radius: float
    x_axis: np.ndarray
    y_axis: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "location", _real(self.location))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "x_axis", _real(self.x_axis))
        object.__setattr__(self, "y_axis", _real(self.y_axis))

    @property
    def dimension(self):
        return self.location.shape[0]


@dataclass(frozen=True, kw_only=True, eq=False)
class Ellipse(Curve):
    kind: ClassVar[str] = "Ellipse"
    focus1: np.ndarray
    focus2: np.ndarray
    maj_radius: float
    min_radius: float
    x_axis: np.ndarray
    y_axis: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        for name in ("focus1", "focus2", "x_axis", "y_axis"):
            object.__setattr__(self, name, _real(getattr(self, name)))
        object.__setattr__(self, "maj_radius", float(self.maj_radius))
        object.__setattr__(self, "min_radius", float(self.min_radius))

    @property
    def dimension(self):
        return self.focus1.shape[0]


@dataclass(frozen=True, kw_only=True, eq=False)
class BSplineCurve(Curve):
    kind: ClassVar[str] = "BSpline"
    poles: np.ndarray            # (n_poles, dim)
    knots: np.ndarray            # full repeated-knot vector, len = n_poles + degree + 1
    degree: int
    rational: bool = False
    weights: Optional[np.ndarray] = None   # (n_poles,) when rational
    periodic: bool = False
    closed: bool = False
    continuity: str = "C2"

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "poles", _real(self.poles))
        object.__setattr__(self, "knots", _real(self.knots))
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "rational", bool(self.rational))
        object.__setattr__(self, "weights", _opt_real(self.weights))
        object.__setattr__(self, "periodic", bool(self.periodic))
        object.__setattr__(self, "closed", bool(self.closed))

    @property
    def dimension(self):
        return self.poles.shape[1]

    @property
    def u_degree(self):
        return self.degree


@dataclass(frozen=True, kw_only=True, eq=False)
class OtherCurve(Curve):
    """Unrecognized curve kind, preserved opaquely.

    ``attributes`` maps dataset names to raw values; evaluable only
    through a registered fallback.
    """

    kind: ClassVar[str] = "Other"
    dim: int = 3
    attributes: dict = None

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "attributes", dict(self.attributes or {}))

    @property
    def dimension(self):
        return self.dim


@dataclass(frozen=True, kw_only=True, eq=False)
class Surface:
    """Base for parametric surfaces.

    ``trim_domain`` is a 2x2 array [[u0, v0], [u1, v1]] (min corner, max
    corner) bounding the parametric rectangle.
    """

    kind: ClassVar[str] = "?"
    trim_domain: np.ndarray
    transform: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "trim_domain", _real(self.trim_domain))
        object.__setattr__(self, "transform", _opt_real(self.transform))

    @property
    def shape_name(self) -> str:
        return self.kind

    @property
    def u_interval(self):
        d = self.trim_domain
        return float(d[0, 0]), float(d[1, 0])

    @property
    def v_interval(self):
        d = self.trim_domain
        return float(d[0, 1]), float(d[1, 1])


def _set_reals(obj, *names):
    for name in names:
        object.__setattr__(obj, name, _real(getattr(obj, name)))


@dataclass(frozen=True, kw_only=True, eq=False)
class PlaneSurface(Surface):
    kind: ClassVar[str] = "Plane"
    location: np.ndarray
    x_axis: np.ndarray
    y_axis: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        _set_reals(self, "location", "x_axis", "y_axis")


@dataclass(frozen=True, kw_only=True, eq=False)
class CylinderSurface(Surface):
    kind: ClassVar[str] = "Cylinder"
    location: np.ndarray
    radius: float
    x_axis: np.ndarray
    y_axis: np.ndarray
    z_axis: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        _set_reals(self, "location", "x_axis", "y_axis", "z_axis")
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True, kw_only=True, eq=False)
class ConeSurface(Surface):
    kind: ClassVar[str] = "Cone"
    location: np.ndarray
    radius: float
    angle: float                 # half-angle, radians, in (-pi/2, pi/2) \ {0}
    x_axis: np.ndarray
    y_axis: np.ndarray
    z_axis: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        _set_reals(self, "location", "x_axis", "y_axis", "z_axis")
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "angle", float(self.angle))


@dataclass(frozen=True, kw_only=True, eq=False)
class SphereSurface(Surface):
    kind: ClassVar[str] = "Sphere"
    location: np.ndarray
    radius: float
    x_axis: np.ndarray
    y_axis: np.ndarray
    z_axis: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        _set_reals(self, "location", "x_axis", "y_axis", "z_axis")
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True, kw_only=True, eq=False)
class TorusSurface(Surface):
    kind: ClassVar[str] = "Torus"
    location: np.ndarray
    max_radius: float
    min_radius: float
    x_axis: np.ndarray
    y_axis: np.ndarray
    z_axis: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        _set_reals(self, "location", "x_axis", "y_axis", "z_axis")
        object.__setattr__(self, "max_radius", float(self.max_radius))
        object.__setattr__(self, "min_radius", float(self.min_radius))


@dataclass(frozen=True, kw_only=True, eq=False)
class BSplineSurface(Surface):
    kind: ClassVar[str] = "BSpline"
    poles: np.ndarray            # (nu, nv, 3)
    u_knots: np.ndarray
    v_knots: np.ndarray
    u_degree: int
    v_degree: int
    u_rational: bool = False
    v_rational: bool = False
    weights: Optional[np.ndarray] = None   # (nu, nv)
    u_periodic: bool = False
    v_periodic: bool = False
    u_closed: bool = False
    v_closed: bool = False
    continuity: str = "C2"

    def __post_init__(self):
        super().__post_init__()
        _set_reals(self, "poles", "u_knots", "v_knots")
        object.__setattr__(self, "weights", _opt_real(self.weights))
        object.__setattr__(self, "u_degree", int(self.u_degree))
        object.__setattr__(self, "v_degree", int(self.v_degree))
        for name in ("u_rational", "v_rational", "u_periodic", "v_periodic",
                     "u_closed", "v_closed"):
            object.__setattr__(self, name, bool(getattr(self, name)))

    @property
    def rational(self):
        return self.u_rational or self.v_rational


@dataclass(frozen=True, kw_only=True, eq=False)
class ExtrusionSurface(Surface):
    kind: ClassVar[str] = "Extrusion"
    curve: Curve                 # 3D profile curve, parameter u
    direction: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        _set_reals(self, "direction")


@dataclass(frozen=True, kw_only=True, eq=False)
class RevolutionSurface(Surface):
    kind: ClassVar[str] = "Revolution"
    curve: Curve                 # 3D profile curve, parameter v
    location: np.ndarray
    z_axis: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        _set_reals(self, "location", "z_axis")


@dataclass(frozen=True, kw_only=True, eq=False)
class OffsetSurface(Surface):
    kind: ClassVar[str] = "Offset"
    surface: Surface             # base surface, any non-Other kind
    value: float                 # signed offset distance along the base normal

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True, kw_only=True, eq=False)
class OtherSurface(Surface):
    kind: ClassVar[str] = "Other"
    attributes: dict = None

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "attributes", dict(self.attributes or {}))


@dataclass(frozen=True, kw_only=True, eq=False)
class GeometryStore:
    curves2d: tuple
    curves3d: tuple
    surfaces: tuple
    vertices: np.ndarray         # (n, 3)
    bbox: np.ndarray             # (2, 3): [min corner, max corner]

    def __post_init__(self):
        object.__setattr__(self, "curves2d", tuple(self.curves2d))
        object.__setattr__(self, "curves3d", tuple(self.curves3d))
        object.__setattr__(self, "surfaces", tuple(self.surfaces))
        object.__setattr__(self, "vertices", _real(np.reshape(self.vertices, (-1, 3))))
        object.__setattr__(self, "bbox", _real(np.reshape(self.bbox, (2, 3))))

    @property
    def bbox_diagonal(self) -> float:
        return float(np.linalg.norm(self.bbox[1] - self.bbox[0]))


# ---------------------------------------------------------------------------
# Topology
# ---------------------------------------------------------------------------

@dataclass(frozen=True, kw_only=True, eq=False)
class Solid:
    shells: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "shells", _index(self.shells))


@dataclass(frozen=True, kw_only=True, eq=False)
class Shell:
    """Faces of the shell with one orientation flag per face use.

    ``orientation_wrt_solid[i]`` is False when face ``faces[i]``'s normal
    must be flipped to point out of the solid volume this shell bounds.
    """

    faces: np.ndarray
    orientation_wrt_solid: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "faces", _index(self.faces))
        object.__setattr__(self, "orientation_wrt_solid", _flags(self.orientation_wrt_solid))


@dataclass(frozen=True, kw_only=True, eq=False)
class Face:
    surface: int
    surface_orientation: bool
    loops: np.ndarray
    outer_loop: int
    exact_domain: np.ndarray     # (4,): [umin, vmin, umax, vmax]
    has_singularities: bool = False
    nr_singularities: int = 0
    singularities: np.ndarray = ()   # (k, 2) parametric points

    def __post_init__(self):
        object.__setattr__(self, "surface", int(self.surface))
        object.__setattr__(self, "surface_orientation", bool(self.surface_orientation))
        object.__setattr__(self, "loops", _index(self.loops))
        object.__setattr__(self, "outer_loop", int(self.outer_loop))
        object.__setattr__(self, "exact_domain", _real(np.reshape(self.exact_domain, (4,))))
        object.__setattr__(self, "has_singularities", bool(self.has_singularities))
        object.__setattr__(self, "nr_singularities", int(self.nr_singularities))
        object.__setattr__(self, "singularities", _real(np.reshape(self.singularities, (-1, 2))))


@dataclass(frozen=True, kw_only=True, eq=False)
class Loop:
    halfedges: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "halfedges", _index(self.halfedges))


@dataclass(frozen=True, kw_only=True, eq=False)
class Halfedge:
    """One directed use of an edge by a loop.

    ``curve2d`` indexes the geometric 2D pcurve in the owning face's UV
    space. ``mates`` lists the opposite half-edge(s) on the same edge;
    more than one mate means a non-manifold edge. When
    ``orientation_wrt_edge`` is False the 3D curve is traversed reversed.
    """

    curve2d: int
    edge: int
    mates: np.ndarray = ()
    orientation_wrt_edge: bool = True

    def __post_init__(self):
        object.__setattr__(self, "curve2d", int(self.curve2d))
        object.__setattr__(self, "edge", int(self.edge))
        object.__setattr__(self, "mates", _index(np.reshape(self.mates, (-1,))))
        object.__setattr__(self, "orientation_wrt_edge", bool(self.orientation_wrt_edge))


@dataclass(frozen=True, kw_only=True, eq=False)
class Edge:
    curve3d: int
    start_vertex: int
    end_vertex: int

    def __post_init__(self):
        object.__setattr__(self, "curve3d", int(self.curve3d))
        object.__setattr__(self, "start_vertex", int(self.start_vertex))
        object.__setattr__(self, "end_vertex", int(self.end_vertex))


@dataclass(frozen=True, kw_only=True, eq=False)
class TopologyStore:
    solids: tuple = ()
    shells: tuple = ()
    faces: tuple = ()
    loops: tuple = ()
    halfedges: tuple = ()
    edges: tuple = ()

    def __post_init__(self):
        for name in ("solids", "shells", "faces", "loops", "halfedges", "edges"):
            object.__setattr__(self, name, tuple(getattr(self, name)))


@dataclass(frozen=True, kw_only=True, eq=False)
class FaceMesh:
    """Triangle mesh of one face; empty arrays when meshing failed."""

    points: np.ndarray = ()      # (m, 3)
    triangles: np.ndarray = ()   # (k, 3) indices into points

    def __post_init__(self):
        object.__setattr__(self, "points", _real(np.reshape(self.points, (-1, 3))))
        tris = np.array(np.reshape(self.triangles, (-1, 3)), dtype=np.int64)
        tris.flags.writeable = False
        object.__setattr__(self, "triangles", tris)

    @property
    def is_empty(self) -> bool:
        return self.points.shape[0] == 0 and self.triangles.shape[0] == 0


EMPTY_MESH = FaceMesh()


@dataclass(frozen=True, kw_only=True, eq=False)
class Part:
    geometry: GeometryStore
    topology: TopologyStore
    meshes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "meshes", tuple(self.meshes))

    def num_faces(self):
        return len(self.topology.faces)

    def num_edges(self):
        return len(self.topology.edges)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    """One broken invariant, located by an entity path such as
    ``topology/faces/3/outer_loop``."""

    path: str
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.path}: {self.message}"


def _unit(v, tol=AXIS_TOL):
    return abs(np.linalg.norm(v) - 1.0) <= tol


def _check_transform(tr, path, out):
    tr = np.asarray(tr)
    if tr.shape != (3, 4):
        out.append(Violation(path, f"transform shape {tr.shape} != (3, 4)"))
        return
    r = tr[:, :3]
    if not np.allclose(r.T @ r, np.eye(3), atol=TRANSFORM_TOL):
        out.append(Violation(path, "transform rotation block is not orthonormal"))


def _check_curve(c, path, expect_dim, out, warnings):
    if c.dimension != expect_dim:
        out.append(Violation(path, f"dimension {c.dimension} != {expect_dim}"))
    if expect_dim == 2 and c.transform is not None:
        out.append(Violation(f"{path}/transform", "2D curve carries a transform"))
    if c.transform is not None:
        _check_transform(c.transform, f"{path}/transform", out)
    if c.interval.shape != (2,) or not c.interval[0] <= c.interval[1]:
        out.append(Violation(f"{path}/interval", "interval is not [t0, t1] with t0 <= t1"))

    if isinstance(c, Circle):
        if not c.radius > 0:
            out.append(Violation(f"{path}/radius", f"radius {c.radius} is not > 0"))
        _check_axis_pair(c.x_axis, c.y_axis, path, out)
    elif isinstance(c, Ellipse):
        if not c.min_radius > 0:
            out.append(Violation(f"{path}/min_radius", "min_radius is not > 0"))
        if not c.maj_radius >= c.min_radius:
            out.append(Violation(f"{path}/maj_radius", "maj_radius < min_radius"))
        _check_axis_pair(c.x_axis, c.y_axis, path, out)
        focal = 0.5 * np.linalg.norm(np.asarray(c.focus1) - np.asarray(c.focus2))
        expect = np.sqrt(max(c.maj_radius**2 - c.min_radius**2, 0.0))
        if abs(focal - expect) > ELLIPSE_FOCI_TOL:
            warnings.append(Violation(
                f"{path}/focus1", "foci separation inconsistent with radii",
                severity="warning"))
    elif isinstance(c, BSplineCurve):
        _check_bspline_1d(c.poles.shape[0], c.knots, c.degree, c.rational,
                          c.weights, path, out)


def _check_axis_pair(ax, ay, path, out):
    if not _unit(ax):
        out.append(Violation(f"{path}/x_axis", "axis is not unit length"))
    if not _unit(ay):
        out.append(Violation(f"{path}/y_axis", "axis is not unit length"))
    if abs(float(np.dot(ax, ay))) > AXIS_TOL:
        out.append(Violation(f"{path}/y_axis", "axes are not orthogonal"))


def _check_axis_triple(s, path, out):
    for name in ("x_axis", "y_axis", "z_axis"):
        if not _unit(getattr(s, name)):
            out.append(Violation(f"{path}/{name}", "axis is not unit length"))
    for a, b in (("x_axis", "y_axis"), ("y_axis", "z_axis"), ("x_axis", "z_axis")):
        if abs(float(np.dot(getattr(s, a), getattr(s, b)))) > AXIS_TOL:
            out.append(Violation(f"{path}/{b}", f"{a} and {b} are not orthogonal"))


def _check_bspline_1d(n_poles, knots, degree, rational, weights, path, out):
    if degree < 1:
        out.append(Violation(f"{path}/degree", f"degree {degree} is not >= 1"))
    if np.any(np.diff(knots) < 0):
        out.append(Violation(f"{path}/knots", "knot vector is not nondecreasing"))
    if knots.shape[0] != n_poles + degree + 1:
        out.append(Violation(
            f"{path}/knots",
            f"knot count {knots.shape[0]} != poles {n_poles} + degree {degree} + 1"))
    if rational:
        if weights is None:
            out.append(Violation(f"{path}/weights", "rational spline has no weights"))
        else:
            w = np.reshape(weights, (-1,))
            if w.shape[0] != n_poles:
                out.append(Violation(f"{path}/weights", "weight count != pole count"))
            if np.any(w <= 0):
                out.append(Violation(f"{path}/weights", "weights must all be > 0"))


def _check_surface(s, path, out, warnings, depth=0):
    if s.transform is not None:
        _check_transform(s.transform, f"{path}/transform", out)
    d = s.trim_domain
    if d.shape != (2, 2) or not (d[1, 0] > d[0, 0] and d[1, 1] > d[0, 1]):
        out.append(Violation(f"{path}/trim_domain", "degenerate trim domain"))

    if isinstance(s, (CylinderSurface, ConeSurface, SphereSurface, TorusSurface)):
        _check_axis_triple(s, path, out)
    if isinstance(s, (CylinderSurface, SphereSurface)) and not s.radius > 0:
        out.append(Violation(f"{path}/radius", f"radius {s.radius} is not > 0"))
    if isinstance(s, ConeSurface):
        if s.radius < 0:
            out.append(Violation(f"{path}/radius", "cone radius is negative"))
        if not (-np.pi / 2 < s.angle < np.pi / 2) or s.angle == 0:
            out.append(Violation(f"{path}/angle",
                                 "half-angle must be in (-pi/2, pi/2) and nonzero"))
    if isinstance(s, TorusSurface):
        if not s.min_radius > 0:
            out.append(Violation(f"{path}/min_radius", "min_radius is not > 0"))
        if not s.max_radius > s.min_radius:
            out.append(Violation(f"{path}/max_radius", "max_radius <= min_radius"))
    if isinstance(s, BSplineSurface):
        _check_bspline_1d(s.poles.shape[0], s.u_knots, s.u_degree,
                          s.u_rational, None, f"{path}/u", out)
        _check_bspline_1d(s.poles.shape[1], s.v_knots, s.v_degree,
                          s.v_rational, None, f"{path}/v", out)
        if s.rational:
            if s.weights is None:
                out.append(Violation(f"{path}/weights", "rational spline has no weights"))
            elif s.weights.shape != s.poles.shape[:2]:
                out.append(Violation(f"{path}/weights", "weights grid shape != poles grid"))
            elif np.any(s.weights <= 0):
                out.append(Violation(f"{path}/weights", "weights must all be > 0"))
    if isinstance(s, ExtrusionSurface):
        _check_curve(s.curve, f"{path}/curve", 3, out, warnings)
    if isinstance(s, RevolutionSurface):
        _check_curve(s.curve, f"{path}/curve", 3, out, warnings)
        if not _unit(s.z_axis, tol=1e-6):
            warnings.append(Violation(f"{path}/z_axis", "rotation axis is not unit length",
                                      severity="warning"))
    if isinstance(s, OffsetSurface):
        if depth >= 8:
            out.append(Violation(path, "offset nesting deeper than 8"))
        elif isinstance(s.surface, OtherSurface):
            out.append(Violation(f"{path}/surface", "offset base surface is Other"))
        else:
            _check_surface(s.surface, f"{path}/surface", out, warnings, depth + 1)


def validate_part(part: Part, include_warnings: bool = False) -> list:
    """Check every model invariant; return one :class:`Violation` per break.

    An empty list means the part is well-formed. With
    ``include_warnings``, advisory findings (inconsistent ellipse foci,
    non-manifold mate counts) are appended with severity ``"warning"``.
    """
    out, warnings = [], []
    g, t = part.geometry, part.topology

    for i, c in enumerate(g.curves2d):
        _check_curve(c, f"geometry/2dcurves/{i}", 2, out, warnings)
    for i, c in enumerate(g.curves3d):
        _check_curve(c, f"geometry/3dcurves/{i}", 3, out, warnings)
    for i, s in enumerate(g.surfaces):
        _check_surface(s, f"geometry/surfaces/{i}", out, warnings)

    diag = g.bbox_diagonal
    tol = VERTEX_BBOX_TOL * max(diag, 1.0)
    lo, hi = g.bbox[0], g.bbox[1]
    for i, v in enumerate(g.vertices):
        if np.any(v < lo - tol) or np.any(v > hi + tol):
            out.append(Violation(f"geometry/vertices/{i}", "vertex outside bounding box"))

    n_c2, n_c3 = len(g.curves2d), len(g.curves3d)
    n_srf, n_vtx = len(g.surfaces), g.vertices.shape[0]
    n_shell, n_face = len(t.shells), len(t.faces)
    n_loop, n_he, n_edge = len(t.loops), len(t.halfedges), len(t.edges)

    for i, solid in enumerate(t.solids):
        for j in solid.shells:
            if not 0 <= j < n_shell:
                out.append(Violation(f"topology/solids/{i}/shells",
                                     f"shell index {j} out of range"))
    for i, shell in enumerate(t.shells):
        if shell.orientation_wrt_solid.shape[0] != shell.faces.shape[0]:
            out.append(Violation(f"topology/shells/{i}/orientation_wrt_solid",
                                 "flag count != face count"))
        for j in shell.faces:
            if not 0 <= j < n_face:
                out.append(Violation(f"topology/shells/{i}/faces",
                                     f"face index {j} out of range"))
    for i, face in enumerate(t.faces):
        if not 0 <= face.surface < n_srf:
            out.append(Violation(f"topology/faces/{i}/surface",
                                 f"surface index {face.surface} out of range"))
        for j in face.loops:
            if not 0 <= j < n_loop:
                out.append(Violation(f"topology/faces/{i}/loops",
                                     f"loop index {j} out of range"))
        if face.outer_loop not in face.loops:
            out.append(Violation(f"topology/faces/{i}/outer_loop",
                                 f"outer loop {face.outer_loop} not among the face's loops"))
        if face.nr_singularities != face.singularities.shape[0]:
            out.append(Violation(f"topology/faces/{i}/nr_singularities",
                                 "count disagrees with the singularities list"))
        if face.has_singularities != (face.nr_singularities > 0):
            out.append(Violation(f"topology/faces/{i}/has_singularities",
                                 "flag disagrees with nr_singularities"))
    for i, loop in enumerate(t.loops):
        for j in loop.halfedges:
            if not 0 <= j < n_he:
                out.append(Violation(f"topology/loops/{i}/halfedges",
                                     f"half-edge index {j} out of range"))
    for i, he in enumerate(t.halfedges):
        if not 0 <= he.curve2d < n_c2:
            out.append(Violation(f"topology/halfedges/{i}/2dcurve",
                                 f"2D curve index {he.curve2d} out of range"))
        if not 0 <= he.edge < n_edge:
            out.append(Violation(f"topology/halfedges/{i}/edge",
                                 f"edge index {he.edge} out of range"))
        for m in he.mates:
            if not 0 <= m < n_he:
                out.append(Violation(f"topology/halfedges/{i}/mates",
                                     f"mate index {m} out of range"))
                continue
            if i not in t.halfedges[m].mates:
                out.append(Violation(f"topology/halfedges/{i}/mates",
                                     f"mates not symmetric: {m} does not list {i} back"))
            elif 0 <= he.edge < n_edge and t.halfedges[m].edge != he.edge:
                out.append(Violation(f"topology/halfedges/{i}/mates",
                                     f"mate {m} references a different edge"))
        if he.mates.shape[0] > 1:
            warnings.append(Violation(f"topology/halfedges/{i}/mates",
                                      f"{he.mates.shape[0]} mates (non-manifold edge)",
                                      severity="warning"))
    for i, e in enumerate(t.edges):
        if not 0 <= e.curve3d < n_c3:
            out.append(Violation(f"topology/edges/{i}/3dcurve",
                                 f"3D curve index {e.curve3d} out of range"))
        for name in ("start_vertex", "end_vertex"):
            v = getattr(e, name)
            if not 0 <= v < n_vtx:
                out.append(Violation(f"topology/edges/{i}/{name}",
                                     f"vertex index {v} out of range"))

    # Loop closure: consecutive half-edges must chain start/end vertices
    # under their orientation flags. Skip loops with broken references.
    for i, loop in enumerate(t.loops):
        hes = loop.halfedges
        if hes.shape[0] == 0:
            continue
        if np.any(hes < 0) or np.any(hes >= n_he):
            continue
        if any(not 0 <= t.halfedges[j].edge < n_edge for j in hes):
            continue
        ends = []
        ok = True
        for j in hes:
            he = t.halfedges[j]
            e = t.edges[he.edge]
            if not (0 <= e.start_vertex < n_vtx and 0 <= e.end_vertex < n_vtx):
                ok = False
                break
            if he.orientation_wrt_edge:
                ends.append((e.start_vertex, e.end_vertex))
            else:
                ends.append((e.end_vertex, e.start_vertex))
        if not ok:
            continue
        for k in range(len(ends)):
            nxt = (k + 1) % len(ends)
            if ends[k][1] != ends[nxt][0]:
                out.append(Violation(
                    f"topology/loops/{i}/halfedges",
                    f"loop does not close: half-edge {hes[k]} ends at vertex "
                    f"{ends[k][1]} but half-edge {hes[nxt]} starts at {ends[nxt][0]}"))

    if len(part.meshes) != n_face:
        out.append(Violation("mesh", f"{len(part.meshes)} mesh slots for {n_face} faces"))
    for i, m in enumerate(part.meshes):
        if m.triangles.shape[0] and (np.any(m.triangles < 0)
                                     or np.any(m.triangles >= m.points.shape[0])):
            out.append(Violation(f"mesh/{i}/triangles", "triangle index out of range"))

    if include_warnings:
        out = out + warnings
    return out


# ---------------------------------------------------------------------------
# Structural equality
# ---------------------------------------------------------------------------

def _values_equal(a, b):
    if type(a) is not type(b):
        # allow int/float promotion differences to fail loudly
        if not (isinstance(a, (int, float, bool)) and isinstance(b, (int, float, bool))):
            return False
    if isinstance(a, np.ndarray):
        return (a.shape == b.shape and a.dtype == b.dtype
                and a.tobytes() == b.tobytes())
    if is_dataclass(a):
        return all(_values_equal(getattr(a, f.name), getattr(b, f.name))
                   for f in fields(a))
    if isinstance(a, (tuple, list)):
        return len(a) == len(b) and all(_values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict):
        return (set(a) == set(b)
                and all(_values_equal(a[k], b[k]) for k in a))
    if isinstance(a, float):
        return np.float64(a).tobytes() == np.float64(b).tobytes()
    return a == b


def parts_equal(a: Part, b: Part) -> bool:
    """Deep structural equality with bit-exact floats."""
    return _values_equal(a, b)
