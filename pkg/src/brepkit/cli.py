"""Command-line front end: validate, sample, stats, mesh, fixtures.

Exit codes are a stable contract: 0 success, 1 domain violations or an
empty result, 2 unreadable input or format failure. Every subcommand is
deterministic given its flags and ``--seed``. ``--threads`` controls
file-level parallelism (and parameter generation in ``sample``) without
changing any output byte; the ``BREPKIT_THREADS`` environment variable
sets its default.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys
from pathlib import Path

import numpy as np

from . import builders
from .errors import BrepError
from .io_hdf5 import read_meshes, read_parts, validate_file, write_parts
from .meshing import export_mesh_text, get_mesh
from .sampling import (SampleReport, SamplerConfig, add_noise,
                       builtin_callbacks, sample_parts)
from .stats import corpus_stats, render_table, write_plot_data, write_report

# tasks whose payload depends on edge membership need edge samples
_EDGE_TASKS = {"feature_edge"}

_FIXTURES = (
    ("box", lambda: builders.primitive_box()),
    ("cylinder", lambda: builders.primitive_cylinder_capped()),
    ("annulus", lambda: builders.primitive_annulus_plate()),
    ("fan", lambda: builders.fan_fixture()),
    ("torus", lambda: builders.primitive_torus()),
    ("sphere", lambda: builders.primitive_sphere()),
    ("spline_patch", lambda: builders.bspline_patch()),
    ("plate_pair", lambda: builders.plate_pair()),
    ("nonmanifold", lambda: builders.nonmanifold_bricks()),
)

# mutation -> base fixture carrying the entity the mutation targets
_CORRUPT_BASES = {
    "index_overflow": "box",
    "mates_asymmetry": "box",
    "open_loop": "box",
    "wrong_outer_loop": "box",
    "nonunit_axis": "cylinder",
}


def _default_threads() -> int:
    raw = os.environ.get("BREPKIT_THREADS", "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def _expand_paths(patterns) -> list:
    out = []
    for pattern in patterns:
        if glob.has_magic(pattern):
            out.extend(sorted(glob.glob(pattern, recursive=True)))
        elif Path(pattern).is_dir():
            out.extend(sorted(str(p) for ext in ("*.hdf5", "*.h5")
                              for p in Path(pattern).rglob(ext)))
        else:
            out.append(pattern)
    return out


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def cmd_validate(paths, threads: int = 1) -> int:
    paths = _expand_paths(paths)
    if not paths:
        print("no input files", file=sys.stderr)
        return 2
    if threads > 1 and len(paths) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(validate_file, paths))
    else:
        reports = [validate_file(p) for p in paths]
    worst = 0
    for rep in reports:
        worst = max(worst, rep.exit_code)
        if rep.clean:
            print(f"{rep.path}: OK")
            continue
        for msg in rep.format_errors:
            print(f"{rep.path}: format: {msg}")
        for pi, violations in enumerate(rep.part_violations):
            for v in violations:
                print(f"{rep.path}: part {pi}: {v}")
    return worst


def _payload_header(task: str) -> list:
    # primitive_degree rows are ragged: some kinds carry a set of degree
    # pairs rather than a single pair
    return {
        "points": [],
        "normals": ["nx", "ny", "nz"],
        "feature_edge": ["feature_edge"],
        "primitive_degree": ["nx", "ny", "nz", "degrees..."],
    }[task]


def _payload_row(payload) -> list:
    if isinstance(payload, (tuple, list)):
        out = []
        for item in payload:
            out.extend(_payload_row(item))
        return out
    arr = np.asarray(payload, dtype=np.float64).reshape(-1)
    return [_fmt(v) for v in arr]


def cmd_sample(path: str, task: str, n: int, sigma: float, seed: int,
               out, threads: int = 1) -> int:
    callbacks = builtin_callbacks()
    if task not in callbacks:
        print(f"unknown task '{task}'; choose from "
              f"{', '.join(sorted(callbacks))}", file=sys.stderr)
        return 2
    try:
        parts = read_parts(path)
    except BrepError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return 2
    config = SamplerConfig(seed=seed, include_edges=task in _EDGE_TASKS,
                           threads=threads)
    report = SampleReport()
    positions, payloads = sample_parts(parts, n, callbacks[task],
                                       config=config, report=report)
    for part_index, kind, index, msg in report.unsupported:
        print(f"warning: part {part_index} {kind} {index}: {msg}",
              file=sys.stderr)
    for part_index, kind, index in report.skipped:
        print(f"warning: part {part_index} {kind} {index}: skipped",
              file=sys.stderr)
    if positions.shape[0] == 0:
        print("no points produced", file=sys.stderr)
        return 1
    if sigma > 0.0:
        lo = np.min([p.geometry.bbox[0] for p in parts], axis=0)
        hi = np.max([p.geometry.bbox[1] for p in parts], axis=0)
        diagonal = float(np.linalg.norm(hi - lo))
        positions = add_noise(positions, sigma, seed=seed, diagonal=diagonal)

    header = " ".join(["x", "y", "z"] + _payload_header(task))
    lines = [header]
    write_payload = task != "points"
    for pos, payload in zip(positions, payloads):
        row = [_fmt(v) for v in pos]
        if write_payload:
            row.extend(_payload_row(payload))
        lines.append(" ".join(row))
    text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
    return 0


def cmd_stats(paths, limit, seed: int, out, plot_data=None) -> int:
    paths = _expand_paths(paths)
    report = corpus_stats(paths, sample_limit=limit, seed=seed)
    sys.stdout.write(render_table(report))
    for path, message in report.errors:
        print(f"warning: {path}: {message}", file=sys.stderr)
    if out not in (None, "-"):
        write_report(report, out)
    if plot_data:
        write_plot_data(report, plot_data)
    return 0


def cmd_mesh(path: str, out) -> int:
    try:
        parts = read_parts(path)
        meshes = read_meshes(path)
    except BrepError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return 2
    points, triangles = get_mesh(meshes, parts=parts)
    if points.shape[0] == 0:
        print("warning: no mesh data in file", file=sys.stderr)
    if out in (None, "-"):
        export_mesh_text(points, triangles, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            export_mesh_text(points, triangles, fh)
    return 0


def cmd_fixtures(out_dir: str, with_corrupt: bool = False) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    built = {}
    for name, make in _FIXTURES:
        built[name] = make()
        write_parts([built[name]], out / f"{name}.hdf5")
        print(f"wrote {out / f'{name}.hdf5'}")
    if with_corrupt:
        for mutation, base in _CORRUPT_BASES.items():
            bad = builders.corrupt(built[base], mutation)
            target = out / f"corrupt_{mutation}.hdf5"
            write_parts([bad], target, validate=False)
            print(f"wrote {target}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brepkit",
        description="B-rep interchange toolkit: validate, sample, "
                    "stats, mesh, fixtures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check files and report violations")
    p.add_argument("paths", nargs="+")
    p.add_argument("--threads", type=int, default=_default_threads())

    p = sub.add_parser("sample", help="sample a labeled point cloud")
    p.add_argument("path")
    p.add_argument("--task", default="points",
                   choices=["points", "normals", "feature_edge",
                            "primitive_degree"])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--sigma", type=float, default=0.0,
                   help="noise std as a fraction of the bbox diagonal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", default="-")

    p = sub.add_parser("stats", help="corpus statistics report")
    p.add_argument("paths", nargs="+")
    p.add_argument("--limit", type=int, default=None,
                   help="subsample the corpus to this many files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="report file (JSON lines)")
    p.add_argument("--plot-data", default=None,
                   help="write bucket/count pairs for plotting")

    p = sub.add_parser("mesh", help="export the merged triangle mesh")
    p.add_argument("path")
    p.add_argument("--out", default="-")

    p = sub.add_parser("fixtures", help="emit the synthetic fixture corpus")
    p.add_argument("out_dir")
    p.add_argument("--with-corrupt", action="store_true",
                   help="also emit deliberately broken variants")
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args.paths, threads=args.threads)
    if args.command == "sample":
        return cmd_sample(args.path, args.task, args.samples, args.sigma,
                          args.seed, args.out, threads=args.threads)
    if args.command == "stats":
        return cmd_stats(args.paths, args.limit, args.seed, args.out,
                         plot_data=args.plot_data)
    if args.command == "mesh":
        return cmd_mesh(args.path, args.out)
    if args.command == "fixtures":
        return cmd_fixtures(args.out_dir, with_corrupt=args.with_corrupt)
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
