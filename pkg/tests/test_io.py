import hashlib

import h5py
import numpy as np
import pytest

from brepkit.builders import corrupt, primitive_box, without_mesh
from brepkit.errors import (FormatError, UnreadableFileError,
                            ValidationError)
from brepkit.io_hdf5 import (FORMAT_VERSION, pack_exact_domain,
                             read_meshes, read_parts, unpack_exact_domain,
                             validate_file, write_parts)
from brepkit.model import OtherCurve, OtherSurface, parts_equal


def _digest(path):
    return hashlib.sha256(open(path, "rb").read()).hexdigest()


def test_every_fixture_roundtrips_identically(fixture_parts, tmp_path):
    for name, part in fixture_parts.items():
        p = tmp_path / f"{name}.hdf5"
        write_parts([part], p)
        back = read_parts(p)
        assert len(back) == 1
        assert parts_equal(part, back[0]), name


def test_write_is_byte_deterministic(fixture_parts, tmp_path):
    parts = [fixture_parts["box"], fixture_parts["fan"]]
    a, b = tmp_path / "a.hdf5", tmp_path / "b.hdf5"
    write_parts(parts, a)
    write_parts(parts, b)
    assert _digest(a) == _digest(b)


def test_rewrite_of_read_parts_is_byte_identical(fixture_parts, tmp_path):
    a, b = tmp_path / "a.hdf5", tmp_path / "b.hdf5"
    write_parts([fixture_parts["cylinder"]], a)
    write_parts(read_parts(a), b)
    assert _digest(a) == _digest(b)


def test_layout_uses_padded_numeric_groups(fixture_parts, tmp_path):
    p = tmp_path / "box.hdf5"
    write_parts([fixture_parts["box"]], p)
    with h5py.File(p, "r") as f:
        assert f.attrs["version"] in (FORMAT_VERSION,
                                      FORMAT_VERSION.encode())
        part = f["parts/part_000"]
        assert set(part) == {"geometry", "topology", "mesh"}
        geo = part["geometry"]
        assert set(geo) == {"2dcurves", "3dcurves", "surfaces",
                            "vertices", "bbox"}
        for child in geo["surfaces"]:
            assert len(child) == 3 and child.isdigit()
        s0 = geo["surfaces/000"]
        kind = s0["type"][()]
        kind = kind.decode() if isinstance(kind, bytes) else str(kind)
        assert kind == "Plane"
        topo = part["topology"]
        assert {"faces", "loops", "halfedges", "edges",
                "shells", "solids"} <= set(topo)


def test_multi_part_files_keep_order(fixture_parts, tmp_path):
    parts = [fixture_parts["box"], fixture_parts["torus"],
             fixture_parts["sphere"]]
    p = tmp_path / "three.hdf5"
    write_parts(parts, p)
    back = read_parts(p)
    assert [b.num_faces() for b in back] == [a.num_faces() for a in parts]
    for a, b in zip(parts, back):
        assert parts_equal(a, b)


def test_unknown_kinds_survive_roundtrip(tmp_path):
    box = primitive_box()
    helix = OtherCurve(interval=(0.0, 6.0), dim=3,
                       attributes={"type": "Helix", "radius": 1.5,
                                   "pitch": np.array([0.2])})
    swept = OtherSurface(trim_domain=((0.0, 0.0), (1.0, 1.0)),
                         attributes={"type": "Swept",
                                     "profile": {"type": "Arc",
                                                 "radius": 2.0}})
    from dataclasses import replace
    weird = replace(box, geometry=replace(
        box.geometry, curves3d=box.geometry.curves3d + (helix,),
        surfaces=box.geometry.surfaces + (swept,)))
    p = tmp_path / "weird.hdf5"
    write_parts([weird], p)
    with h5py.File(p, "r") as f:
        tag = f["parts/part_000/geometry/3dcurves/012/type"][()]
        tag = tag.decode() if isinstance(tag, bytes) else str(tag)
        assert tag == "Helix"
        tag = f["parts/part_000/geometry/surfaces/006/type"][()]
        tag = tag.decode() if isinstance(tag, bytes) else str(tag)
        assert tag == "Swept"
    back = read_parts(p)[0]
    kept = back.geometry.curves3d[-1]
    assert isinstance(kept, OtherCurve)
    assert kept.attributes["type"] == "Helix"
    assert float(np.asarray(kept.attributes["radius"])) == 1.5
    surf = back.geometry.surfaces[-1]
    assert surf.attributes["profile"]["type"] == "Arc"
    # a second write of the reread part is byte-identical
    q = tmp_path / "weird2.hdf5"
    write_parts([back], q)
    assert _digest(p) == _digest(q)


def test_write_refuses_invalid_parts(tmp_path):
    bad = corrupt(primitive_box(), "open_loop")
    with pytest.raises(ValidationError):
        write_parts([bad], tmp_path / "bad.hdf5")
    # explicit opt-out writes anyway, for corrupt-corpus generation
    write_parts([bad], tmp_path / "bad.hdf5", validate=False)
    report = validate_file(tmp_path / "bad.hdf5")
    assert report.exit_code == 1


def test_missing_file_is_unreadable(tmp_path):
    with pytest.raises(UnreadableFileError):
        read_parts(tmp_path / "nope.hdf5")


def test_garbage_file_is_unreadable(tmp_path):
    p = tmp_path / "junk.hdf5"
    p.write_bytes(b"this is not hdf5 at all")
    with pytest.raises(UnreadableFileError):
        read_parts(p)
    report = validate_file(p)
    assert not report.readable
    assert report.exit_code == 2


def test_missing_version_attribute(tmp_path):
    p = tmp_path / "nover.hdf5"
    with h5py.File(p, "w") as f:
        f.create_group("parts")
    with pytest.raises(FormatError):
        read_parts(p)


def test_wrong_version_rejected(fixture_dir, tmp_path):
    src = fixture_dir / "box.hdf5"
    dst = tmp_path / "wrongver.hdf5"
    dst.write_bytes(src.read_bytes())
    with h5py.File(dst, "a") as f:
        f.attrs["version"] = "9.9"
    with pytest.raises(FormatError) as err:
        read_parts(dst)
    assert "9.9" in str(err.value)


def test_missing_parts_group(tmp_path):
    p = tmp_path / "noparts.hdf5"
    with h5py.File(p, "w") as f:
        f.attrs["version"] = FORMAT_VERSION
    with pytest.raises(FormatError):
        read_parts(p)


def test_stray_child_under_parts(fixture_dir, tmp_path):
    dst = tmp_path / "stray.hdf5"
    dst.write_bytes((fixture_dir / "box.hdf5").read_bytes())
    with h5py.File(dst, "a") as f:
        f["parts"].create_group("extras")
    with pytest.raises(FormatError):
        read_parts(dst)


def test_missing_dataset_reports_entity_path(fixture_dir, tmp_path):
    dst = tmp_path / "gone.hdf5"
    dst.write_bytes((fixture_dir / "box.hdf5").read_bytes())
    with h5py.File(dst, "a") as f:
        del f["parts/part_000/geometry/surfaces/002/location"]
    with pytest.raises(FormatError) as err:
        read_parts(dst)
    assert "surfaces/002" in str(err.value)
    report = validate_file(dst)
    assert report.exit_code == 2
    assert any("surfaces/002" in e for e in report.format_errors)


def test_malformed_dataset_shape_rejected(fixture_dir, tmp_path):
    dst = tmp_path / "shape.hdf5"
    dst.write_bytes((fixture_dir / "box.hdf5").read_bytes())
    with h5py.File(dst, "a") as f:
        del f["parts/part_000/geometry/bbox"]
        f["parts/part_000/geometry"].create_dataset(
            "bbox", data=np.zeros(5))
    with pytest.raises(FormatError):
        read_parts(dst)


def test_validate_file_clean_and_violating(fixture_dir, tmp_path):
    clean = validate_file(fixture_dir / "box.hdf5")
    assert clean.readable and clean.clean
    assert clean.exit_code == 0
    assert clean.version == FORMAT_VERSION

    bad = corrupt(primitive_box(), "mates_asymmetry")
    p = tmp_path / "asym.hdf5"
    write_parts([bad], p, validate=False)
    report = validate_file(p)
    assert report.readable and not report.clean
    assert report.exit_code == 1
    flat = [str(v) for vs in report.part_violations for v in vs]
    assert any("mates" in s for s in flat)


def test_read_meshes_maps_empty_slots_to_none(tmp_path):
    part = without_mesh(primitive_box(), 2)
    p = tmp_path / "partial.hdf5"
    write_parts([part], p)
    meshes = read_meshes(p)
    assert len(meshes) == 1
    per_face = meshes[0]
    assert per_face[2] is None
    assert per_face[0] is not None
    assert per_face[0].points.shape[1] == 3


def test_exact_domain_packing_order():
    domain = np.array([0.25, -1.0, 2.5, 3.0])
    packed = pack_exact_domain(domain)
    assert np.allclose(unpack_exact_domain(packed), domain)


def test_file_handle_reports_count(fixture_parts, tmp_path):
    handle = write_parts([fixture_parts["box"], fixture_parts["fan"]],
                         tmp_path / "two.hdf5")
    assert handle.part_count == 2
    assert handle.version == FORMAT_VERSION
