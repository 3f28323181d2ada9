"""Client layer: kernel parity, handle lifetime, callback contract."""

import shutil

import h5py
import numpy as np
import pytest

import brepkit
import brepkit_client as client
from brepkit.cli import main
from brepkit_client import (CallbackError, ClientError, FormatError, Session,
                            SessionClosedError, UnreadableFileError)


def _fmt_rows(array):
    return ["%.17g %.17g %.17g" % tuple(row) for row in np.atleast_2d(array)]


def test_read_parts_matches_kernel(box_path):
    bound = client.read_parts(box_path)
    kernel = brepkit.read_parts(box_path)
    assert len(bound) == len(kernel) == 1
    assert bound[0].face_count == len(kernel[0].topology.faces)
    assert bound[0].edge_count == len(kernel[0].topology.edges)
    assert np.array_equal(bound[0].bbox, kernel[0].geometry.bbox)
    assert bound[0].surface(0).shape_name == \
        kernel[0].geometry.surfaces[kernel[0].topology.faces[0].surface].shape_name


def test_read_parts_bad_path(tmp_path):
    with pytest.raises(UnreadableFileError):
        client.read_parts(tmp_path / "absent.hdf5")


def test_version_mismatch_is_typed(box_path, tmp_path):
    stale = tmp_path / "stale.hdf5"
    shutil.copy(box_path, stale)
    with h5py.File(stale, "r+") as f:
        f.attrs["version"] = "9.9"
    with pytest.raises(FormatError, match="version"):
        client.read_parts(stale)


def test_sampling_matches_cli_bit_for_bit(box_path, tmp_path):
    cli_out = tmp_path / "cli.txt"
    assert main(["sample", str(box_path), "--samples", "400",
                 "--seed", "9", "--out", str(cli_out)]) == 0
    cli_rows = cli_out.read_text().splitlines()[1:]

    parts = client.read_parts(box_path)
    positions, payloads = client.sample_parts(
        parts, 400, client.builtin_callbacks()["points"],
        seed=9, include_edges=False)
    assert _fmt_rows(positions) == cli_rows
    assert np.array_equal(payloads, np.ones(400))


def test_edge_task_matches_cli_bit_for_bit(box_path, tmp_path):
    cli_out = tmp_path / "cli.txt"
    assert main(["sample", str(box_path), "--task", "feature_edge",
                 "--samples", "300", "--seed", "4",
                 "--out", str(cli_out)]) == 0
    cli_rows = cli_out.read_text().splitlines()[1:]

    parts = client.read_parts(box_path)
    positions, payloads = client.sample_parts(
        parts, 300, client.builtin_callbacks()["feature_edge"], seed=4)
    rows = ["%s %s" % (pos, "%.17g" % label)
            for pos, label in zip(_fmt_rows(positions), payloads)]
    assert rows == cli_rows


def test_same_seed_same_bytes(box_path):
    parts = client.read_parts(box_path)
    runs = [client.sample_parts(parts, 250,
                                client.builtin_callbacks()["points"],
                                seed=3, include_edges=False)[0]
            for _ in range(2)]
    assert runs[0].tobytes() == runs[1].tobytes()


def test_face_edge_labels(box_path):
    def compute_labels(part, topo, params):
        n = np.asarray(params).shape[0]
        return np.ones(n) if topo.is_face() else np.zeros(n)

    parts = client.read_parts(box_path)
    positions, labels = client.sample_parts(parts, 500, compute_labels, seed=1)
    assert positions.shape == (500, 3)
    assert positions.dtype == np.float64
    assert positions.flags["C_CONTIGUOUS"]
    assert labels.shape == (500,)
    assert set(np.unique(labels)) == {0.0, 1.0}


def test_skip_everything_yields_empty_arrays(box_path):
    parts = client.read_parts(box_path)
    positions, payloads = client.sample_parts(
        parts, 100, lambda part, topo, params: None, seed=0)
    assert positions.shape == (0, 3)
    assert payloads.size == 0


def test_callback_exception_names_entity(box_path):
    def flaky(part, topo, params):
        if topo.is_face() and topo.index == 2:
            raise RuntimeError("lookup exploded")
        return np.zeros(np.asarray(params).shape[0])

    parts = client.read_parts(box_path)
    with pytest.raises(CallbackError) as err:
        client.sample_parts(parts, 200, flaky, seed=0, include_edges=False)
    assert "part 0 face 2" in str(err.value)
    assert "lookup exploded" in str(err.value)
    causes = []
    exc = err.value.__cause__
    while exc is not None:
        causes.append(exc)
        exc = exc.__cause__
    assert any(isinstance(c, RuntimeError) for c in causes)


def test_handles_in_callback_expose_kernel_values(box_path, corpus_dir):
    seen = {"normals": [], "shapes": set(), "edge_normal": []}

    def probe(part, topo, params):
        n = np.asarray(params).shape[0]
        if topo.is_face():
            seen["shapes"].add(topo.surface.shape_name)
            seen["normals"].append(topo.normal(params))
            assert isinstance(part, client.BoundPart)
        else:
            seen["edge_normal"].append(topo.normal(params))
        return np.zeros(n)

    parts = client.read_parts(box_path)
    client.sample_parts(parts, 200, probe, seed=2)
    assert seen["shapes"] == {"Plane"}
    rows = np.concatenate(seen["normals"])
    assert np.allclose(np.linalg.norm(rows, axis=1), 1.0)
    assert all(n is None for n in seen["edge_normal"])
    assert seen["edge_normal"]

    patch = client.read_parts(corpus_dir / "spline_patch.hdf5")[0]
    surface = patch.surface(0)
    assert surface.shape_name == "BSpline"
    assert (surface.u_degree, surface.v_degree) == (3, 3)


def test_mesh_parity_with_cli(box_path, tmp_path):
    obj = tmp_path / "box.obj"
    assert main(["mesh", str(box_path), "--out", str(obj)]) == 0
    lines = obj.read_text().splitlines()
    v_count = sum(1 for l in lines if l.startswith("v "))
    f_count = sum(1 for l in lines if l.startswith("f "))

    meshes = client.read_meshes(box_path)
    parts = client.read_parts(box_path)
    vertices, triangles = client.get_mesh(meshes, parts=parts)
    assert vertices.shape == (v_count, 3)
    assert triangles.shape == (f_count, 3)


def test_mesh_indexing(box_path, corpus_dir):
    meshes = client.read_meshes(box_path)
    assert len(meshes) == 1
    assert len(meshes[0]) == 6
    face_mesh = meshes[0][2]
    assert face_mesh.points.shape[1] == 3
    assert not face_mesh.is_empty
    vertices, triangles = client.get_mesh(face_mesh)
    assert vertices.shape[0] == face_mesh.points.shape[0]

    bare = client.read_meshes(corpus_dir / "torus.hdf5")
    assert bare[0][0] is None
    vertices, triangles = client.get_mesh(bare)
    assert vertices.shape == (0, 3)
    assert triangles.shape == (0, 3)


def test_use_after_close(box_path):
    with Session() as session:
        parts = session.read_parts(box_path)
        meshes = session.read_meshes(box_path)
        assert parts[0].face_count == 6
    with pytest.raises(SessionClosedError):
        parts[0].face_count
    with pytest.raises(SessionClosedError):
        meshes[0]
    with pytest.raises(SessionClosedError):
        session.read_parts(box_path)
    with pytest.raises(SessionClosedError):
        client.sample_parts(parts, 10, lambda p, t, x: None)
    # the module-level default session is unaffected
    assert client.read_parts(box_path)[0].face_count == 6


def test_foreign_handles_rejected(box_path):
    parts = client.read_parts(box_path)
    other = Session()
    with pytest.raises(ClientError):
        other.sample_parts(parts, 10, lambda p, t, x: None)
    with pytest.raises(TypeError):
        other.sample_parts([brepkit.read_parts(box_path)[0]], 10,
                           lambda p, t, x: None)
