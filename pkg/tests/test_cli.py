"""Command-line interface: subcommands, exit codes, determinism."""

from dataclasses import replace

import numpy as np
import pytest

from brepkit.builders import corrupt, primitive_box, primitive_torus
from brepkit.cli import _default_threads, cmd_sample, main
from brepkit.io_hdf5 import write_parts
from brepkit.model import OtherSurface

FIXTURE_NAMES = {"box", "cylinder", "annulus", "fan", "torus", "sphere",
                 "spline_patch", "plate_pair", "nonmanifold"}


@pytest.fixture()
def box_file(tmp_path):
    path = tmp_path / "box.hdf5"
    write_parts([primitive_box()], path)
    return path


def test_fixtures_command(tmp_path, capsys):
    out = tmp_path / "corpus"
    assert main(["fixtures", str(out)]) == 0
    names = {p.stem for p in out.glob("*.hdf5")}
    assert names == FIXTURE_NAMES
    assert capsys.readouterr().out.count("wrote ") == 9


def test_fixtures_with_corrupt(tmp_path):
    out = tmp_path / "corpus"
    assert main(["fixtures", str(out), "--with-corrupt"]) == 0
    names = {p.stem for p in out.glob("*.hdf5")}
    corrupted = {n for n in names if n.startswith("corrupt_")}
    assert len(names) == 14
    assert corrupted == {"corrupt_index_overflow", "corrupt_mates_asymmetry",
                         "corrupt_open_loop", "corrupt_wrong_outer_loop",
                         "corrupt_nonunit_axis"}


def test_validate_clean(box_file, capsys):
    assert main(["validate", str(box_file)]) == 0
    assert "OK" in capsys.readouterr().out


def test_validate_violations(tmp_path, capsys):
    bad_path = tmp_path / "bad.hdf5"
    write_parts([corrupt(primitive_box(), "mates_asymmetry")], bad_path,
                validate=False)
    assert main(["validate", str(bad_path)]) == 1
    out = capsys.readouterr().out
    assert "part 0" in out


def test_validate_unreadable(tmp_path, capsys):
    junk = tmp_path / "junk.hdf5"
    junk.write_bytes(b"not hdf5")
    assert main(["validate", str(junk)]) == 2
    assert "format" in capsys.readouterr().out


def test_validate_worst_exit_code_wins(box_file, tmp_path):
    bad_path = tmp_path / "bad.hdf5"
    write_parts([corrupt(primitive_box(), "open_loop")], bad_path,
                validate=False)
    assert main(["validate", str(box_file), str(bad_path)]) == 1
    assert main(["validate", str(box_file), str(bad_path),
                 "--threads", "4"]) == 1


def test_validate_expands_directories(tmp_path, capsys):
    sub = tmp_path / "corpus"
    sub.mkdir()
    write_parts([primitive_box()], sub / "a.hdf5")
    write_parts([primitive_torus()], sub / "b.hdf5")
    assert main(["validate", str(tmp_path)]) == 0
    assert capsys.readouterr().out.count("OK") == 2


def test_validate_no_inputs(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "*.nope")]) == 2
    assert "no input" in capsys.readouterr().err


def test_sample_points_columns(box_file, tmp_path):
    out = tmp_path / "pts.txt"
    assert main(["sample", str(box_file), "--samples", "50",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x y z"
    assert len(lines) == 51
    assert all(len(line.split()) == 3 for line in lines[1:])


def test_sample_deterministic_across_runs_and_threads(box_file, tmp_path):
    outs = []
    for name, threads in (("a", "1"), ("b", "1"), ("c", "8")):
        out = tmp_path / f"{name}.txt"
        assert main(["sample", str(box_file), "--samples", "200",
                     "--seed", "7", "--threads", threads,
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_sample_seed_changes_output(box_file, tmp_path):
    texts = []
    for seed in ("1", "2"):
        out = tmp_path / f"s{seed}.txt"
        main(["sample", str(box_file), "--samples", "100",
              "--seed", seed, "--out", str(out)])
        texts.append(out.read_text())
    assert texts[0] != texts[1]


def test_sample_normals_task(box_file, tmp_path):
    out = tmp_path / "n.txt"
    assert main(["sample", str(box_file), "--task", "normals",
                 "--samples", "40", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x y z nx ny nz"
    rows = np.array([[float(v) for v in line.split()] for line in lines[1:]])
    assert np.allclose(np.linalg.norm(rows[:, 3:], axis=1), 1.0)


def test_sample_feature_edge_task(box_file, tmp_path):
    out = tmp_path / "fe.txt"
    assert main(["sample", str(box_file), "--task", "feature_edge",
                 "--samples", "100", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x y z feature_edge"
    labels = {line.split()[3] for line in lines[1:]}
    assert labels == {"0", "1"}


def test_sample_sigma_perturbs_deterministically(box_file, tmp_path):
    texts = {}
    for name, sigma in (("clean", "0"), ("n1", "0.01"), ("n2", "0.01")):
        out = tmp_path / f"{name}.txt"
        main(["sample", str(box_file), "--samples", "50", "--seed", "3",
              "--sigma", sigma, "--out", str(out)])
        texts[name] = out.read_text()
    assert texts["n1"] == texts["n2"]
    assert texts["n1"] != texts["clean"]


def test_sample_stdout(box_file, capsys):
    assert main(["sample", str(box_file), "--samples", "5"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("x y z\n")
    assert out.endswith("\n")


def test_sample_unknown_task_rejected(box_file, capsys):
    with pytest.raises(SystemExit):
        main(["sample", str(box_file), "--task", "warp"])
    assert cmd_sample(str(box_file), "warp", 10, 0.0, 0, "-") == 2
    assert "unknown task" in capsys.readouterr().err


def test_sample_unreadable_file(tmp_path, capsys):
    junk = tmp_path / "junk.hdf5"
    junk.write_bytes(b"zzz")
    assert main(["sample", str(junk)]) == 2
    assert capsys.readouterr().err


def test_sample_empty_result(tmp_path, capsys):
    box = primitive_box()
    other = OtherSurface(trim_domain=((0.0, 0.0), (1.0, 1.0)),
                         attributes={"type": "Mystery"})
    hollow = replace(box, geometry=replace(
        box.geometry, surfaces=(other,) * 6))
    path = tmp_path / "hollow.hdf5"
    write_parts([hollow], path, validate=False)
    assert main(["sample", str(path), "--samples", "20"]) == 1
    err = capsys.readouterr().err
    assert "no points produced" in err
    assert "warning" in err


def test_threads_env_default(monkeypatch):
    monkeypatch.setenv("BREPKIT_THREADS", "8")
    assert _default_threads() == 8
    monkeypatch.setenv("BREPKIT_THREADS", "soup")
    assert _default_threads() == 1
    monkeypatch.setenv("BREPKIT_THREADS", "-3")
    assert _default_threads() == 1
    monkeypatch.delenv("BREPKIT_THREADS")
    assert _default_threads() == 1


def test_stats_table_and_outputs(box_file, tmp_path, capsys):
    report = tmp_path / "report.jsonl"
    plot = tmp_path / "plot.dat"
    assert main(["stats", str(box_file), "--out", str(report),
                 "--plot-data", str(plot)]) == 0
    out = capsys.readouterr().out
    assert "corpus summary" in out and "Plane" in out
    assert len(report.read_text().splitlines()) == 2
    assert len(plot.read_text().splitlines()) == 16


def test_stats_warns_on_unreadable(box_file, tmp_path, capsys):
    junk = tmp_path / "junk.hdf5"
    junk.write_bytes(b"nope")
    assert main(["stats", str(box_file), str(junk)]) == 0
    captured = capsys.readouterr()
    assert "warning" in captured.err
    assert "files" in captured.out


def test_mesh_export(box_file, tmp_path):
    out = tmp_path / "box.obj"
    assert main(["mesh", str(box_file), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert sum(1 for l in lines if l.startswith("v ")) == 8
    assert sum(1 for l in lines if l.startswith("f ")) == 12


def test_mesh_stdout_and_empty_warning(tmp_path, capsys):
    bare = tmp_path / "torus.hdf5"
    write_parts([primitive_torus(meshed=False)], bare)
    assert main(["mesh", str(bare)]) == 0
    captured = capsys.readouterr()
    assert "no mesh data" in captured.err
    assert captured.out == ""

    junk = tmp_path / "junk.hdf5"
    junk.write_bytes(b"xx")
    assert main(["mesh", str(junk)]) == 2


def test_missing_subcommand_exits():
    with pytest.raises(SystemExit):
        main([])
