"""HDF5 reader/writer for the interchange layout.

On-disk shape: the root carries a string attribute ``version`` (expected
``"2.0"``) and one group ``parts`` whose children ``part_<n>`` each hold
``geometry``, ``topology``, and ``mesh`` groups. Entity lists are groups
of zero-padded numeric subgroups; indices in memory are 0-based and
``part_000``/``000`` is the first element.

Writes are deterministic: timestamp tracking is disabled on the file and
every object, so identical parts yield identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import h5py
import numpy as np

from .errors import FormatError, UnreadableFileError, ValidationError
from .model import (
    BSplineCurve,
    BSplineSurface,
    Circle,
    ConeSurface,
    Curve,
    CylinderSurface,
    Edge,
    Ellipse,
    ExtrusionSurface,
    Face,
    FaceMesh,
    GeometryStore,
    Halfedge,
    Line,
    Loop,
    OffsetSurface,
    OtherCurve,
    OtherSurface,
    Part,
    PlaneSurface,
    RevolutionSurface,
    Shell,
    Solid,
    SphereSurface,
    Surface,
    TopologyStore,
    TorusSurface,
    validate_part,
)

FORMAT_VERSION = "2.0"
_STR = h5py.string_dtype(encoding="utf-8")


@dataclass(frozen=True)
class FileHandle:
    path: str
    version: str
    part_count: int


# ---------------------------------------------------------------------------
# Low-level helpers
# ---------------------------------------------------------------------------

def _mkgroup(parent, name: str):
    # plain create_group records creation times, breaking byte determinism
    gcpl = h5py.h5p.create(h5py.h5p.GROUP_CREATE)
    gcpl.set_obj_track_times(False)
    gid = h5py.h5g.create(parent.id, name.encode("utf-8"), gcpl=gcpl)
    return h5py.Group(gid)


def _wds(grp, name: str, data, dtype=None):
    grp.create_dataset(name, data=data, dtype=dtype, track_times=False)


def _w_real(grp, name, value):
    _wds(grp, name, np.asarray(value, dtype=np.float64))


def _w_int(grp, name, value):
    _wds(grp, name, np.asarray(value, dtype=np.int64))


def _w_bool(grp, name, value):
    _wds(grp, name, np.asarray(value, dtype=np.int8))


def _w_str(grp, name, value: str):
    _wds(grp, name, np.array(value, dtype=object), dtype=_STR)


def _num_name(i: int, count: int) -> str:
    return str(i).zfill(max(3, len(str(max(count - 1, 0)))))


def _require(grp, name: str, path: str):
    if name not in grp:
        raise FormatError(f"missing required entry '{name}'", path=path)
    return grp[name]


def _r_array(grp, name, path, dtype=np.float64, shape=None):
    raw = np.asarray(_require(grp, name, path)[()], dtype=dtype)
    if shape is not None:
        try:
            raw = raw.reshape(shape)
        except ValueError:
            raise FormatError(
                f"dataset '{name}' has shape {raw.shape}, expected {shape}",
                path=path) from None
    return raw


def _r_scalar(grp, name, path, cast=float):
    v = np.asarray(_require(grp, name, path)[()])
    if v.size != 1:
        raise FormatError(f"dataset '{name}' is not a scalar", path=path)
    return cast(v.reshape(()))


def _r_str(grp, name, path) -> str:
    v = _require(grp, name, path)[()]
    if isinstance(v, bytes):
        return v.decode("utf-8")
    if isinstance(v, np.ndarray) and v.size == 1:
        v = v.reshape(())[()]
        if isinstance(v, bytes):
            return v.decode("utf-8")
    return str(v)


def _numeric_children(grp, path):
    """Child group names sorted by numeric value ('000', '001', ...)."""
    order = []
    for name in grp:
        try:
            order.append((int(name), name))
        except ValueError:
            raise FormatError(
                f"non-numeric child group '{name}'", path=path) from None
    order.sort()
    return [name for _, name in order]


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------

def _write_curve(parent, name: str, c: Curve):
    grp = _mkgroup(parent, name)
    _w_str(grp, "type",
           _other_kind_tag(c) if isinstance(c, OtherCurve) else c.kind)
    _w_real(grp, "interval", c.interval)
    if c.transform is not None:
        _w_real(grp, "transform", c.transform)
    if isinstance(c, Line):
        _w_real(grp, "location", c.location)
        _w_real(grp, "direction", c.direction)
    elif isinstance(c, Circle):
        _w_real(grp, "location", c.location)
        _w_real(grp, "radius", c.radius)
        _w_real(grp, "x_axis", c.x_axis)
        _w_real(grp, "y_axis", c.y_axis)
    elif isinstance(c, Ellipse):
        _w_real(grp, "focus1", c.focus1)
        _w_real(grp, "focus2", c.focus2)
        _w_real(grp, "maj_radius", c.maj_radius)
        _w_real(grp, "min_radius", c.min_radius)
        _w_real(grp, "x_axis", c.x_axis)
        _w_real(grp, "y_axis", c.y_axis)
    elif isinstance(c, BSplineCurve):
        _w_real(grp, "poles", c.poles)
        _w_real(grp, "knots", c.knots)
        _w_int(grp, "degree", c.degree)
        _w_bool(grp, "rational", c.rational)
        if c.weights is not None:
            _w_real(grp, "weights", c.weights)
        _w_bool(grp, "periodic", c.periodic)
        _w_bool(grp, "closed", c.closed)
        _w_str(grp, "continuity", c.continuity)
    elif isinstance(c, OtherCurve):
        _write_raw_attributes(grp, c.attributes)
    else:
        raise ValidationError([f"unwritable curve kind {type(c).__name__}"])


def _write_raw_attributes(grp, attributes: dict, skip=("type",)):
    for key in sorted(attributes):
        if key in skip:
            continue
        value = attributes[key]
        if isinstance(value, dict):
            _write_raw_attributes(_mkgroup(grp, key), value, skip=())
        elif isinstance(value, str):
            _w_str(grp, key, value)
        else:
            _wds(grp, key, np.asarray(value))


def _other_kind_tag(entity) -> str:
    """Original on-disk kind string of a preserved unknown entity."""
    tag = entity.attributes.get("type") if entity.attributes else None
    return tag if isinstance(tag, str) and tag else entity.kind


def _read_raw_attributes(grp, skip=()):
    out = {}
    for name in grp:
        if name in skip:
            continue
        node = grp[name]
        if isinstance(node, h5py.Group):
            out[name] = _read_raw_attributes(node)
            continue
        v = node[()]
        if isinstance(v, bytes):
            v = v.decode("utf-8")
        out[name] = v
    return out


def _read_curve(grp, path: str, expect_dim: int) -> Curve:
    kind = _r_str(grp, "type", path)
    interval = _r_array(grp, "interval", path, shape=(2,))
    transform = None
    if "transform" in grp:
        transform = _r_array(grp, "transform", path, shape=(3, 4))
    if kind == "Line":
        return Line(interval=interval, transform=transform,
                    location=_r_array(grp, "location", path),
                    direction=_r_array(grp, "direction", path))
    if kind == "Circle":
        return Circle(interval=interval, transform=transform,
                      location=_r_array(grp, "location", path),
                      radius=_r_scalar(grp, "radius", path),
                      x_axis=_r_array(grp, "x_axis", path),
                      y_axis=_r_array(grp, "y_axis", path))
    if kind == "Ellipse":
        return Ellipse(interval=interval, transform=transform,
                       focus1=_r_array(grp, "focus1", path),
                       focus2=_r_array(grp, "focus2", path),
                       maj_radius=_r_scalar(grp, "maj_radius", path),
                       min_radius=_r_scalar(grp, "min_radius", path),
                       x_axis=_r_array(grp, "x_axis", path),
                       y_axis=_r_array(grp, "y_axis", path))
    if kind == "BSpline":
        rational = bool(_r_scalar(grp, "rational", path, cast=int))
        weights = None
        if "weights" in grp:
            weights = _r_array(grp, "weights", path)
        return BSplineCurve(
            interval=interval, transform=transform,
            poles=_r_array(grp, "poles", path),
            knots=_r_array(grp, "knots", path),
            degree=_r_scalar(grp, "degree", path, cast=int),
            rational=rational, weights=weights,
            periodic=bool(_r_scalar(grp, "periodic", path, cast=int)),
            closed=bool(_r_scalar(grp, "closed", path, cast=int)),
            continuity=_r_str(grp, "continuity", path))
    attrs = _read_raw_attributes(grp, skip={"interval", "transform"})
    return OtherCurve(interval=interval, transform=transform,
                      dim=expect_dim, attributes=attrs)


# ---------------------------------------------------------------------------
# Surfaces
# ---------------------------------------------------------------------------

def _write_surface(parent, name: str, s: Surface):
    grp = _mkgroup(parent, name)
    _w_str(grp, "type",
           _other_kind_tag(s) if isinstance(s, OtherSurface) else s.kind)
    _w_real(grp, "trim_domain", s.trim_domain)
    if s.transform is not None:
        _w_real(grp, "transform", s.transform)
    if isinstance(s, PlaneSurface):
        _w_real(grp, "location", s.location)
        _w_real(grp, "x_axis", s.x_axis)
        _w_real(grp, "y_axis", s.y_axis)
    elif isinstance(s, (CylinderSurface, SphereSurface)):
        _w_real(grp, "location", s.location)
        _w_real(grp, "radius", s.radius)
        _w_real(grp, "x_axis", s.x_axis)
        _w_real(grp, "y_axis", s.y_axis)
        _w_real(grp, "z_axis", s.z_axis)
    elif isinstance(s, ConeSurface):
        _w_real(grp, "location", s.location)
        _w_real(grp, "radius", s.radius)
        _w_real(grp, "angle", s.angle)
        _w_real(grp, "x_axis", s.x_axis)
        _w_real(grp, "y_axis", s.y_axis)
        _w_real(grp, "z_axis", s.z_axis)
    elif isinstance(s, TorusSurface):
        _w_real(grp, "location", s.location)
        _w_real(grp, "max_radius", s.max_radius)
        _w_real(grp, "min_radius", s.min_radius)
        _w_real(grp, "x_axis", s.x_axis)
        _w_real(grp, "y_axis", s.y_axis)
        _w_real(grp, "z_axis", s.z_axis)
    elif isinstance(s, BSplineSurface):
        _w_real(grp, "poles", s.poles)
        _w_real(grp, "u_knots", s.u_knots)
        _w_real(grp, "v_knots", s.v_knots)
        _w_int(grp, "u_degree", s.u_degree)
        _w_int(grp, "v_degree", s.v_degree)
        _w_bool(grp, "u_rational", s.u_rational)
        _w_bool(grp, "v_rational", s.v_rational)
        if s.weights is not None:
            _w_real(grp, "weights", s.weights)
        _w_bool(grp, "u_periodic", s.u_periodic)
        _w_bool(grp, "v_periodic", s.v_periodic)
        _w_bool(grp, "u_closed", s.u_closed)
        _w_bool(grp, "v_closed", s.v_closed)
        _w_str(grp, "continuity", s.continuity)
    elif isinstance(s, ExtrusionSurface):
        _write_curve(grp, "curve", s.curve)
        _w_real(grp, "direction", s.direction)
    elif isinstance(s, RevolutionSurface):
        _write_curve(grp, "curve", s.curve)
        _w_real(grp, "location", s.location)
        _w_real(grp, "z_axis", s.z_axis)
    elif isinstance(s, OffsetSurface):
        _write_surface(grp, "surface", s.surface)
        _w_real(grp, "value", s.value)
    elif isinstance(s, OtherSurface):
        _write_raw_attributes(grp, s.attributes)
    else:
        raise ValidationError([f"unwritable surface kind {type(s).__name__}"])


def _read_surface(grp, path: str) -> Surface:
    kind = _r_str(grp, "type", path)
    trim = _r_array(grp, "trim_domain", path, shape=(2, 2))
    transform = None
    if "transform" in grp:
        transform = _r_array(grp, "transform", path, shape=(3, 4))
    common = dict(trim_domain=trim, transform=transform)
    if kind == "Plane":
        return PlaneSurface(**common,
                            location=_r_array(grp, "location", path, shape=(3,)),
                            x_axis=_r_array(grp, "x_axis", path, shape=(3,)),
                            y_axis=_r_array(grp, "y_axis", path, shape=(3,)))
    if kind in ("Cylinder", "Sphere"):
        cls = CylinderSurface if kind == "Cylinder" else SphereSurface
        return cls(**common,
                   location=_r_array(grp, "location", path, shape=(3,)),
                   radius=_r_scalar(grp, "radius", path),
                   x_axis=_r_array(grp, "x_axis", path, shape=(3,)),
                   y_axis=_r_array(grp, "y_axis", path, shape=(3,)),
                   z_axis=_r_array(grp, "z_axis", path, shape=(3,)))
    if kind == "Cone":
        return ConeSurface(**common,
                           location=_r_array(grp, "location", path, shape=(3,)),
                           radius=_r_scalar(grp, "radius", path),
                           angle=_r_scalar(grp, "angle", path),
                           x_axis=_r_array(grp, "x_axis", path, shape=(3,)),
                           y_axis=_r_array(grp, "y_axis", path, shape=(3,)),
                           z_axis=_r_array(grp, "z_axis", path, shape=(3,)))
    if kind == "Torus":
        return TorusSurface(**common,
                            location=_r_array(grp, "location", path, shape=(3,)),
                            max_radius=_r_scalar(grp, "max_radius", path),
                            min_radius=_r_scalar(grp, "min_radius", path),
                            x_axis=_r_array(grp, "x_axis", path, shape=(3,)),
                            y_axis=_r_array(grp, "y_axis", path, shape=(3,)),
                            z_axis=_r_array(grp, "z_axis", path, shape=(3,)))
    if kind == "BSpline":
        weights = None
        if "weights" in grp:
            weights = _r_array(grp, "weights", path)
        poles = _r_array(grp, "poles", path)
        if poles.ndim != 3 or poles.shape[2] != 3:
            raise FormatError(
                f"dataset 'poles' has shape {poles.shape}, expected (nu, nv, 3)",
                path=path)
        return BSplineSurface(
            **common, poles=poles,
            u_knots=_r_array(grp, "u_knots", path),
            v_knots=_r_array(grp, "v_knots", path),
            u_degree=_r_scalar(grp, "u_degree", path, cast=int),
            v_degree=_r_scalar(grp, "v_degree", path, cast=int),
            u_rational=bool(_r_scalar(grp, "u_rational", path, cast=int)),
            v_rational=bool(_r_scalar(grp, "v_rational", path, cast=int)),
            weights=weights,
            u_periodic=bool(_r_scalar(grp, "u_periodic", path, cast=int)),
            v_periodic=bool(_r_scalar(grp, "v_periodic", path, cast=int)),
            u_closed=bool(_r_scalar(grp, "u_closed", path, cast=int)),
            v_closed=bool(_r_scalar(grp, "v_closed", path, cast=int)),
            continuity=_r_str(grp, "continuity", path))
    if kind == "Extrusion":
        curve_grp = _require(grp, "curve", path)
        return ExtrusionSurface(
            **common,
            curve=_read_curve(curve_grp, f"{path}/curve", 3),
            direction=_r_array(grp, "direction", path, shape=(3,)))
    if kind == "Revolution":
        curve_grp = _require(grp, "curve", path)
        return RevolutionSurface(
            **common,
            curve=_read_curve(curve_grp, f"{path}/curve", 3),
            location=_r_array(grp, "location", path, shape=(3,)),
            z_axis=_r_array(grp, "z_axis", path, shape=(3,)))
    if kind == "Offset":
        srf_grp = _require(grp, "surface", path)
        return OffsetSurface(**common,
                             surface=_read_surface(srf_grp, f"{path}/surface"),
                             value=_r_scalar(grp, "value", path))
    attrs = _read_raw_attributes(grp, skip={"trim_domain", "transform"})
    return OtherSurface(**common, attributes=attrs)


# ---------------------------------------------------------------------------
# Topology
# ---------------------------------------------------------------------------

def _write_topology(parent, topo: TopologyStore):
    grp = _mkgroup(parent, "topology")
    solids = _mkgroup(grp, "solids")
    for i, solid in enumerate(topo.solids):
        g = _mkgroup(solids, _num_name(i, len(topo.solids)))
        _w_int(g, "shells", solid.shells)
    shells = _mkgroup(grp, "shells")
    for i, shell in enumerate(topo.shells):
        g = _mkgroup(shells, _num_name(i, len(topo.shells)))
        _w_int(g, "faces", shell.faces)
        _w_bool(g, "orientation_wrt_solid", shell.orientation_wrt_solid)
    faces = _mkgroup(grp, "faces")
    for i, face in enumerate(topo.faces):
        g = _mkgroup(faces, _num_name(i, len(topo.faces)))
        _w_real(g, "exact_domain", pack_exact_domain(face.exact_domain))
        _w_bool(g, "has_singularities", face.has_singularities)
        _w_int(g, "loops", face.loops)
        _w_int(g, "nr_singularities", face.nr_singularities)
        _w_int(g, "outer_loop", face.outer_loop)
        _w_real(g, "singularities", face.singularities)
        _w_int(g, "surface", face.surface)
        _w_bool(g, "surface_orientation", face.surface_orientation)
    loops = _mkgroup(grp, "loops")
    for i, loop in enumerate(topo.loops):
        g = _mkgroup(loops, _num_name(i, len(topo.loops)))
        _w_int(g, "halfedges", loop.halfedges)
    halfedges = _mkgroup(grp, "halfedges")
    for i, he in enumerate(topo.halfedges):
        g = _mkgroup(halfedges, _num_name(i, len(topo.halfedges)))
        _w_int(g, "2dcurve", he.curve2d)
        _w_int(g, "edge", he.edge)
        _w_int(g, "mates", he.mates)
        _w_bool(g, "orientation_wrt_edge", he.orientation_wrt_edge)
    edges = _mkgroup(grp, "edges")
    for i, e in enumerate(topo.edges):
        g = _mkgroup(edges, _num_name(i, len(topo.edges)))
        _w_int(g, "3dcurve", e.curve3d)
        _w_int(g, "start_vertex", e.start_vertex)
        _w_int(g, "end_vertex", e.end_vertex)


def pack_exact_domain(domain: np.ndarray) -> np.ndarray:
    """In-memory [umin, vmin, umax, vmax] to the on-disk layout.

    The layout is identical today; the round-trip pair exists so the
    ordering decision lives in exactly one place.
    """
    return np.asarray(domain, dtype=np.float64).reshape(4)


def unpack_exact_domain(raw) -> np.ndarray:
    return np.asarray(raw, dtype=np.float64).reshape(4)


def _read_topology(grp, path: str) -> TopologyStore:
    solids = []
    g = _require(grp, "solids", path)
    for name in _numeric_children(g, f"{path}/solids"):
        p = f"{path}/solids/{name}"
        solids.append(Solid(shells=_r_array(g[name], "shells", p, dtype=np.int64)))
    shells = []
    g = _require(grp, "shells", path)
    for name in _numeric_children(g, f"{path}/shells"):
        p = f"{path}/shells/{name}"
        shells.append(Shell(
            faces=_r_array(g[name], "faces", p, dtype=np.int64),
            orientation_wrt_solid=_r_array(
                g[name], "orientation_wrt_solid", p, dtype=np.int8).astype(bool)))
    faces = []
    g = _require(grp, "faces", path)
    for name in _numeric_children(g, f"{path}/faces"):
        p = f"{path}/faces/{name}"
        fg = g[name]
        faces.append(Face(
            exact_domain=unpack_exact_domain(_r_array(fg, "exact_domain", p)),
            has_singularities=bool(_r_scalar(fg, "has_singularities", p, cast=int)),
            loops=_r_array(fg, "loops", p, dtype=np.int64),
            nr_singularities=_r_scalar(fg, "nr_singularities", p, cast=int),
            outer_loop=_r_scalar(fg, "outer_loop", p, cast=int),
            singularities=_r_array(fg, "singularities", p).reshape(-1, 2),
            surface=_r_scalar(fg, "surface", p, cast=int),
            surface_orientation=bool(_r_scalar(fg, "surface_orientation", p, cast=int))))
    loops = []
    g = _require(grp, "loops", path)
    for name in _numeric_children(g, f"{path}/loops"):
        p = f"{path}/loops/{name}"
        loops.append(Loop(halfedges=_r_array(g[name], "halfedges", p, dtype=np.int64)))
    halfedges = []
    g = _require(grp, "halfedges", path)
    for name in _numeric_children(g, f"{path}/halfedges"):
        p = f"{path}/halfedges/{name}"
        hg = g[name]
        halfedges.append(Halfedge(
            curve2d=_r_scalar(hg, "2dcurve", p, cast=int),
            edge=_r_scalar(hg, "edge", p, cast=int),
            mates=_r_array(hg, "mates", p, dtype=np.int64),
            orientation_wrt_edge=bool(_r_scalar(hg, "orientation_wrt_edge", p, cast=int))))
    edges = []
    g = _require(grp, "edges", path)
    for name in _numeric_children(g, f"{path}/edges"):
        p = f"{path}/edges/{name}"
        eg = g[name]
        edges.append(Edge(
            curve3d=_r_scalar(eg, "3dcurve", p, cast=int),
            start_vertex=_r_scalar(eg, "start_vertex", p, cast=int),
            end_vertex=_r_scalar(eg, "end_vertex", p, cast=int)))
    return TopologyStore(solids=solids, shells=shells, faces=faces,
                         loops=loops, halfedges=halfedges, edges=edges)


# ---------------------------------------------------------------------------
# Parts
# ---------------------------------------------------------------------------

def _write_part(parent, name: str, part: Part):
    grp = _mkgroup(parent, name)
    geo = _mkgroup(grp, "geometry")
    g2 = _mkgroup(geo, "2dcurves")
    for i, c in enumerate(part.geometry.curves2d):
        _write_curve(g2, _num_name(i, len(part.geometry.curves2d)), c)
    g3 = _mkgroup(geo, "3dcurves")
    for i, c in enumerate(part.geometry.curves3d):
        _write_curve(g3, _num_name(i, len(part.geometry.curves3d)), c)
    gs = _mkgroup(geo, "surfaces")
    for i, s in enumerate(part.geometry.surfaces):
        _write_surface(gs, _num_name(i, len(part.geometry.surfaces)), s)
    _w_real(geo, "vertices", part.geometry.vertices)
    _w_real(geo, "bbox", part.geometry.bbox)

    _write_topology(grp, part.topology)

    mesh = _mkgroup(grp, "mesh")
    for i, fm in enumerate(part.meshes):
        g = _mkgroup(mesh, _num_name(i, len(part.meshes)))
        _w_real(g, "points", fm.points)
        _w_int(g, "triangles", fm.triangles)


def _read_part(grp, path: str) -> Part:
    geo_grp = _require(grp, "geometry", path)
    gp = f"{path}/geometry"
    curves2d = []
    g = _require(geo_grp, "2dcurves", gp)
    for name in _numeric_children(g, f"{gp}/2dcurves"):
        curves2d.append(_read_curve(g[name], f"{gp}/2dcurves/{name}", 2))
    curves3d = []
    g = _require(geo_grp, "3dcurves", gp)
    for name in _numeric_children(g, f"{gp}/3dcurves"):
        curves3d.append(_read_curve(g[name], f"{gp}/3dcurves/{name}", 3))
    surfaces = []
    g = _require(geo_grp, "surfaces", gp)
    for name in _numeric_children(g, f"{gp}/surfaces"):
        surfaces.append(_read_surface(g[name], f"{gp}/surfaces/{name}"))
    vertices = _r_array(geo_grp, "vertices", gp).reshape(-1, 3)
    bbox = _r_array(geo_grp, "bbox", gp, shape=(2, 3))
    geometry = GeometryStore(curves2d=curves2d, curves3d=curves3d,
                             surfaces=surfaces, vertices=vertices, bbox=bbox)

    topo = _read_topology(_require(grp, "topology", path), f"{path}/topology")

    mesh_grp = _require(grp, "mesh", path)
    meshes = []
    for name in _numeric_children(mesh_grp, f"{path}/mesh"):
        p = f"{path}/mesh/{name}"
        meshes.append(FaceMesh(
            points=_r_array(mesh_grp[name], "points", p).reshape(-1, 3),
            triangles=_r_array(mesh_grp[name], "triangles", p,
                               dtype=np.int64).reshape(-1, 3)))
    return Part(geometry=geometry, topology=topo, meshes=meshes)


def _open_readable(path):
    try:
        return h5py.File(path, "r")
    except (OSError, ValueError) as exc:
        raise UnreadableFileError(f"cannot open '{path}': {exc}") from exc


def _check_version(f, path):
    if "version" not in f.attrs:
        raise FormatError("missing root attribute 'version'", path="/")
    version = f.attrs["version"]
    if isinstance(version, bytes):
        version = version.decode("utf-8")
    if str(version) != FORMAT_VERSION:
        raise FormatError(
            f"unsupported version '{version}' (expected '{FORMAT_VERSION}')",
            path="/")
    return str(version)


def _part_groups(f):
    if "parts" not in f:
        raise FormatError("missing root group 'parts'", path="/")
    order = []
    for name in f["parts"]:
        if not name.startswith("part_"):
            raise FormatError(f"unexpected child '{name}'", path="/parts")
        try:
            order.append((int(name[5:]), name))
        except ValueError:
            raise FormatError(
                f"non-numeric part suffix in '{name}'", path="/parts") from None
    order.sort()
    return [name for _, name in order]


def read_parts(path) -> list:
    """All parts in the file, ordered by part number."""
    with _open_readable(path) as f:
        _check_version(f, path)
        return [_read_part(f["parts"][name], f"/parts/{name}")
                for name in _part_groups(f)]


def read_meshes(path) -> list:
    """Per part, the per-face list of meshes; failed faces give None."""
    out = []
    with _open_readable(path) as f:
        _check_version(f, path)
        for name in _part_groups(f):
            grp = _require(f["parts"][name], "mesh", f"/parts/{name}")
            per_face = []
            for sub in _numeric_children(grp, f"/parts/{name}/mesh"):
                p = f"/parts/{name}/mesh/{sub}"
                fm = FaceMesh(
                    points=_r_array(grp[sub], "points", p).reshape(-1, 3),
                    triangles=_r_array(grp[sub], "triangles", p,
                                       dtype=np.int64).reshape(-1, 3))
                per_face.append(None if fm.is_empty else fm)
            out.append(per_face)
    return out


def write_parts(parts, path, validate: bool = True) -> FileHandle:
    """Write parts to ``path``; every part must validate cleanly first.

    ``validate=False`` skips the model check; it exists to emit
    deliberately broken corpora for validator testing.
    """
    if validate:
        for i, part in enumerate(parts):
            violations = validate_part(part)
            if violations:
                raise ValidationError(
                    [f"part {i}: {v}" for v in violations])
    path = str(path)
    # track_times=False on the file creation plist covers the root group
    fcpl = h5py.h5p.create(h5py.h5p.FILE_CREATE)
    fcpl.set_obj_track_times(False)
    fid = h5py.h5f.create(Path(path).as_posix().encode("utf-8"),
                          h5py.h5f.ACC_TRUNC, fcpl=fcpl)
    with h5py.File(fid) as f:
        f.attrs["version"] = FORMAT_VERSION
        parts_grp = _mkgroup(f, "parts")
        for i, part in enumerate(parts):
            _write_part(parts_grp, f"part_{_num_name(i, len(parts))}", part)
    return FileHandle(path=path, version=FORMAT_VERSION, part_count=len(parts))


# ---------------------------------------------------------------------------
# File-level validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FileReport:
    path: str
    readable: bool
    version: str | None
    format_errors: tuple
    part_violations: tuple   # one tuple of Violation per part

    @property
    def clean(self) -> bool:
        return self.readable and not self.format_errors and not any(
            self.part_violations)

    @property
    def exit_code(self) -> int:
        if not self.readable or self.format_errors:
            return 2
        if any(self.part_violations):
            return 1
        return 0


def validate_file(path) -> FileReport:
    """Structural report: version, layout, and per-part model violations."""
    version = None
    try:
        with _open_readable(path) as f:
            version = _check_version(f, path)
            parts = [_read_part(f["parts"][name], f"/parts/{name}")
                     for name in _part_groups(f)]
    except UnreadableFileError as exc:
        return FileReport(path=str(path), readable=False, version=None,
                          format_errors=(str(exc),), part_violations=())
    except FormatError as exc:
        return FileReport(path=str(path), readable=True, version=version,
                          format_errors=(str(exc),), part_violations=())
    return FileReport(
        path=str(path), readable=True, version=version, format_errors=(),
        part_violations=tuple(tuple(validate_part(p)) for p in parts))
