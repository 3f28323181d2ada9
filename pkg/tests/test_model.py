from dataclasses import FrozenInstanceError, replace

import numpy as np
import pytest

from brepkit.model import (Circle, Edge, Ellipse, Face, FaceMesh, Halfedge,
                           Line, Loop, OffsetSurface, OtherSurface,
                           PlaneSurface, Shell, Solid, parts_equal,
                           validate_part)


def _geo(part, **kw):
    return replace(part, geometry=replace(part.geometry, **kw))


def _topo(part, **kw):
    return replace(part, topology=replace(part.topology, **kw))


def _swap(seq, i, item):
    out = list(seq)
    out[i] = item
    return tuple(out)


def _paths(part):
    return [v.path for v in validate_part(part)]


@pytest.fixture()
def box(fixture_parts):
    return fixture_parts["box"]


def test_clean_fixtures_have_no_violations(fixture_parts):
    for name, part in fixture_parts.items():
        assert validate_part(part) == [], name


def test_dataclasses_are_frozen(box):
    with pytest.raises(FrozenInstanceError):
        box.topology.faces[0].surface = 3
    with pytest.raises(ValueError):
        box.geometry.vertices[0, 0] = 99.0
    with pytest.raises(ValueError):
        box.topology.loops[0].halfedges[0] = 5


def test_curve_dimension_mismatch(box):
    line3d = Line(interval=(0.0, 1.0), location=(0.0, 0.0, 0.0),
                  direction=(1.0, 0.0, 0.0))
    bad = _geo(box, curves2d=_swap(box.geometry.curves2d, 0, line3d))
    assert "geometry/2dcurves/0" in _paths(bad)


def test_2d_curve_with_transform_flagged(box):
    c0 = box.geometry.curves2d[0]
    bad_curve = replace(c0, transform=np.eye(3, 4))
    bad = _geo(box, curves2d=_swap(box.geometry.curves2d, 0, bad_curve))
    assert any(p.startswith("geometry/2dcurves/0/transform")
               for p in _paths(bad))


def test_nonorthonormal_transform_flagged(box):
    s0 = box.geometry.surfaces[0]
    tr = np.eye(3, 4)
    tr[0, 1] = 0.5
    bad = _geo(box, surfaces=_swap(box.geometry.surfaces, 0,
                                   replace(s0, transform=tr)))
    assert "geometry/surfaces/0/transform" in _paths(bad)


def test_bad_interval_flagged(box):
    c0 = box.geometry.curves3d[0]
    bad = _geo(box, curves3d=_swap(box.geometry.curves3d, 0,
                                   replace(c0, interval=(1.0, 0.0))))
    assert "geometry/3dcurves/0/interval" in _paths(bad)


def test_nonunit_circle_axis_flagged():
    c = Circle(interval=(0.0, 1.0), location=(0.0, 0.0, 0.0), radius=1.0,
               x_axis=(2.0, 0.0, 0.0), y_axis=(0.0, 1.0, 0.0))
    out = []
    from brepkit.model import _check_curve
    _check_curve(c, "geometry/3dcurves/0", 3, out, [])
    assert any(v.path.endswith("x_axis") for v in out)


def test_nonpositive_radius_flagged(box):
    # box has no circles; build one directly
    c = Circle(interval=(0.0, 1.0), location=(0.0, 0.0, 0.0), radius=-2.0,
               x_axis=(1.0, 0.0, 0.0), y_axis=(0.0, 1.0, 0.0))
    out = []
    from brepkit.model import _check_curve
    _check_curve(c, "p", 3, out, [])
    assert any(v.path == "p/radius" for v in out)


def test_ellipse_foci_mismatch_is_warning(box):
    e = Ellipse(interval=(0.0, 1.0), focus1=(5.0, 0.0, 0.0),
                focus2=(-5.0, 0.0, 0.0), maj_radius=2.0, min_radius=1.0,
                x_axis=(1.0, 0.0, 0.0), y_axis=(0.0, 1.0, 0.0))
    bad = _geo(box, curves3d=box.geometry.curves3d + (e,))
    assert validate_part(bad) == []
    flagged = validate_part(bad, include_warnings=True)
    assert any(v.severity == "warning" and "foci" in v.message
               for v in flagged)


def test_bspline_knot_count_flagged(fixture_parts):
    patch = fixture_parts["spline_patch"]
    s = patch.geometry.surfaces[0]
    bad_s = replace(s, u_knots=s.u_knots[:-1])
    bad = _geo(patch, surfaces=_swap(patch.geometry.surfaces, 0, bad_s))
    assert any(p.startswith("geometry/surfaces/0/u/knots")
               for p in _paths(bad))


def test_vertex_outside_bbox_flagged(box):
    verts = np.array(box.geometry.vertices)
    verts[2] = [50.0, 0.0, 0.0]
    bad = _geo(box, vertices=verts)
    assert "geometry/vertices/2" in _paths(bad)


def test_solid_shell_index_range(box):
    bad = _topo(box, solids=(Solid(shells=[7]),))
    assert "topology/solids/0/shells" in _paths(bad)


def test_shell_face_index_and_flag_count(box):
    sh = box.topology.shells[0]
    bad = _topo(box, shells=(Shell(faces=[0, 99],
                                   orientation_wrt_solid=[True, True]),))
    assert "topology/shells/0/faces" in _paths(bad)
    bad2 = _topo(box, shells=(replace(sh, orientation_wrt_solid=[True]),))
    assert "topology/shells/0/orientation_wrt_solid" in _paths(bad2)


def test_face_surface_index_range(box):
    f = replace(box.topology.faces[1], surface=17)
    bad = _topo(box, faces=_swap(box.topology.faces, 1, f))
    assert "topology/faces/1/surface" in _paths(bad)


def test_face_outer_loop_membership(box):
    f = replace(box.topology.faces[0], outer_loop=3)
    bad = _topo(box, faces=_swap(box.topology.faces, 0, f))
    assert "topology/faces/0/outer_loop" in _paths(bad)


def test_face_singularity_bookkeeping(box):
    f = replace(box.topology.faces[0], nr_singularities=2,
                has_singularities=True)
    bad = _topo(box, faces=_swap(box.topology.faces, 0, f))
    assert "topology/faces/0/nr_singularities" in _paths(bad)
    f2 = replace(box.topology.faces[0], has_singularities=True)
    bad2 = _topo(box, faces=_swap(box.topology.faces, 0, f2))
    assert "topology/faces/0/has_singularities" in _paths(bad2)


def test_loop_halfedge_index_range(box):
    bad = _topo(box, loops=_swap(box.topology.loops, 0, Loop(halfedges=[0, 99])))
    assert "topology/loops/0/halfedges" in _paths(bad)


def test_halfedge_reference_ranges(box):
    he = box.topology.halfedges[0]
    for field, path in (("curve2d", "topology/halfedges/0/2dcurve"),
                        ("edge", "topology/halfedges/0/edge"),
                        ("mates", "topology/halfedges/0/mates")):
        bad_he = replace(he, **{field: 99})
        bad = _topo(box, halfedges=_swap(box.topology.halfedges, 0, bad_he))
        assert path in _paths(bad)


def test_mates_asymmetry_detected(box):
    he = box.topology.halfedges[0]
    mate = int(he.mates[0])
    stripped = replace(box.topology.halfedges[mate], mates=np.array([], np.int64))
    bad = _topo(box, halfedges=_swap(box.topology.halfedges, mate, stripped))
    assert any(p == "topology/halfedges/0/mates" for p in _paths(bad))


def test_mates_on_different_edges_detected(box):
    he0 = box.topology.halfedges[0]
    other_edge = (he0.edge + 1) % len(box.topology.edges)
    # move the mate to another edge while keeping the back-reference
    mate = int(he0.mates[0])
    moved = replace(box.topology.halfedges[mate], edge=other_edge)
    bad = _topo(box, halfedges=_swap(box.topology.halfedges, mate, moved))
    paths = _paths(bad)
    assert "topology/halfedges/0/mates" in paths


def test_edge_reference_ranges(box):
    e = box.topology.edges[0]
    bad = _topo(box, edges=_swap(box.topology.edges, 0, replace(e, curve3d=99)))
    assert "topology/edges/0/3dcurve" in _paths(bad)
    bad2 = _topo(box, edges=_swap(box.topology.edges, 0,
                                  replace(e, start_vertex=99)))
    assert "topology/edges/0/start_vertex" in _paths(bad2)


def test_open_loop_detected(box):
    he0 = box.topology.halfedges[0]
    flipped = replace(he0, orientation_wrt_edge=not he0.orientation_wrt_edge)
    bad = _topo(box, halfedges=_swap(box.topology.halfedges, 0, flipped))
    assert any(p.startswith("topology/loops/") for p in _paths(bad))


def test_mesh_slot_count_and_triangle_range(box):
    bad = replace(box, meshes=box.meshes[:-1])
    assert "mesh" in _paths(bad)
    m = box.meshes[0]
    broken = FaceMesh(points=m.points, triangles=np.array([[0, 1, 99]]))
    bad2 = replace(box, meshes=_swap(box.meshes, 0, broken))
    assert "mesh/0/triangles" in _paths(bad2)


def test_nonmanifold_mates_count_is_warning(fixture_parts):
    bricks = fixture_parts["nonmanifold"]
    assert validate_part(bricks) == []
    warned = validate_part(bricks, include_warnings=True)
    assert any(v.severity == "warning" and "non-manifold" in v.message
               for v in warned)


def test_offset_over_other_surface_flagged(box):
    other = OtherSurface(trim_domain=((0.0, 0.0), (1.0, 1.0)), attributes={})
    off = OffsetSurface(trim_domain=((0.0, 0.0), (1.0, 1.0)),
                        surface=other, value=0.1)
    bad = _geo(box, surfaces=box.geometry.surfaces + (off,))
    assert any(p.endswith("/surface") and p.startswith("geometry/surfaces/")
               for p in _paths(bad))


def test_parts_equal_roundtrip_identity(box):
    clone = replace(box)
    assert parts_equal(box, clone)


def test_parts_equal_detects_float_bit_changes(box):
    verts = np.array(box.geometry.vertices)
    verts[0, 0] = np.nextafter(verts[0, 0], 1.0)
    assert not parts_equal(box, _geo(box, vertices=verts))


def test_parts_equal_detects_flag_changes(box):
    he = box.topology.halfedges[3]
    flipped = replace(he, orientation_wrt_edge=not he.orientation_wrt_edge)
    tweaked = _topo(box, halfedges=_swap(box.topology.halfedges, 3, flipped))
    assert not parts_equal(box, tweaked)


def test_parts_equal_detects_missing_entities(box):
    assert not parts_equal(box, _topo(box, edges=box.topology.edges[:-1]))


def test_entity_counts(box):
    assert box.num_faces() == 6
    assert box.num_edges() == 12
    assert box.geometry.bbox_diagonal == pytest.approx(
        np.linalg.norm(box.geometry.bbox[1] - box.geometry.bbox[0]))
