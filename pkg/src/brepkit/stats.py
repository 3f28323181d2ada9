"""Corpus statistics: entity counts, kind histograms, mesh coverage.

One pass per file produces a :class:`FileStats`; the corpus-level
:class:`CorpusReport` aggregates counts, turns them into shares, and
buckets faces-per-part on a log2 scale. Reports serialize as
line-delimited JSON (one object per file plus one aggregate line) with
an optional plain-text table and plot-data dump.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import BrepError
from .io_hdf5 import read_parts

# faces-per-part buckets: [2^b, 2^(b+1)) for b < 15, last bucket open-ended
BUCKET_EDGES = tuple(2 ** b for b in range(16))


@dataclass(frozen=True)
class FileStats:
    path: str
    part_count: int
    face_count: int
    edge_count: int
    face_kinds: dict          # surface kind -> face count
    curve_kinds: dict         # 3D curve kind -> edge count
    faces_per_part: tuple
    empty_mesh_faces: int

    @property
    def mesh_failure(self) -> float:
        if self.face_count == 0:
            return 0.0
        return self.empty_mesh_faces / self.face_count


@dataclass
class CorpusReport:
    files: list = field(default_factory=list)       # FileStats, readable only
    errors: list = field(default_factory=list)      # (path, message)
    selected: list = field(default_factory=list)    # paths after subsampling

    @property
    def part_count(self) -> int:
        return sum(f.part_count for f in self.files)

    @property
    def face_count(self) -> int:
        return sum(f.face_count for f in self.files)

    @property
    def edge_count(self) -> int:
        return sum(f.edge_count for f in self.files)

    def face_kind_counts(self) -> dict:
        return _merge_counts(f.face_kinds for f in self.files)

    def curve_kind_counts(self) -> dict:
        return _merge_counts(f.curve_kinds for f in self.files)

    def face_kind_shares(self) -> dict:
        return _shares(self.face_kind_counts())

    def curve_kind_shares(self) -> dict:
        return _shares(self.curve_kind_counts())

    def mean_faces_per_part(self) -> float:
        n = self.part_count
        return self.face_count / n if n else 0.0

    def mesh_failure(self) -> float:
        total = self.face_count
        if total == 0:
            return 0.0
        return sum(f.empty_mesh_faces for f in self.files) / total

    def face_count_buckets(self) -> list:
        """(lower edge, part count) pairs over log2 buckets."""
        counts = [0] * len(BUCKET_EDGES)
        for f in self.files:
            for n in f.faces_per_part:
                b = 0 if n < 1 else min(int(np.log2(n)), len(BUCKET_EDGES) - 1)
                counts[b] += 1
        return list(zip(BUCKET_EDGES, counts))


def _merge_counts(dicts) -> dict:
    out = {}
    for d in dicts:
        for k, v in d.items():
            out[k] = out.get(k, 0) + v
    return out


def _shares(counts: dict) -> dict:
    total = sum(counts.values())
    if total == 0:
        return {}
    return {k: v / total for k, v in sorted(counts.items())}


def file_stats(path: str) -> FileStats:
    parts = read_parts(path)
    face_kinds, curve_kinds = {}, {}
    faces = edges = empty = 0
    per_part = []
    for part in parts:
        g, t = part.geometry, part.topology
        per_part.append(len(t.faces))
        faces += len(t.faces)
        edges += len(t.edges)
        for f in t.faces:
            kind = g.surfaces[f.surface].shape_name
            face_kinds[kind] = face_kinds.get(kind, 0) + 1
        for e in t.edges:
            kind = g.curves3d[e.curve3d].shape_name
            curve_kinds[kind] = curve_kinds.get(kind, 0) + 1
        empty += sum(1 for m in part.meshes if m.is_empty)
    return FileStats(path=str(path), part_count=len(parts), face_count=faces,
                     edge_count=edges, face_kinds=face_kinds,
                     curve_kinds=curve_kinds, faces_per_part=tuple(per_part),
                     empty_mesh_faces=empty)


def corpus_stats(paths, sample_limit: int | None = None,
                 seed: int = 0) -> CorpusReport:
    """Statistics over a corpus of files.

    With ``sample_limit`` below the corpus size, a seeded random subset
    of that size is analyzed (original order preserved). Unreadable
    files are recorded under ``errors`` and skipped.
    """
    paths = [str(p) for p in paths]
    if sample_limit is not None and 0 <= sample_limit < len(paths):
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        chosen = rng.choice(len(paths), size=sample_limit, replace=False)
        paths = [paths[i] for i in sorted(chosen)]
    report = CorpusReport(selected=list(paths))
    for path in paths:
        try:
            report.files.append(file_stats(path))
        except (BrepError, OSError) as exc:
            report.errors.append((path, f"{type(exc).__name__}: {exc}"))
    return report


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def report_lines(report: CorpusReport) -> list:
    """Line-delimited JSON: one record per file, then one aggregate."""
    lines = []
    for f in report.files:
        lines.append(json.dumps({
            "record": "file", "path": f.path, "parts": f.part_count,
            "faces": f.face_count, "edges": f.edge_count,
            "face_kinds": dict(sorted(f.face_kinds.items())),
            "curve_kinds": dict(sorted(f.curve_kinds.items())),
            "mesh_failure": f.mesh_failure}, sort_keys=True))
    for path, message in report.errors:
        lines.append(json.dumps({"record": "error", "path": path,
                                 "message": message}, sort_keys=True))
    lines.append(json.dumps({
        "record": "aggregate", "files": len(report.files),
        "parts": report.part_count, "faces": report.face_count,
        "edges": report.edge_count,
        "mean_faces_per_part": report.mean_faces_per_part(),
        "face_kind_shares": report.face_kind_shares(),
        "curve_kind_shares": report.curve_kind_shares(),
        "mesh_failure": report.mesh_failure(),
        "face_count_buckets": report.face_count_buckets()}, sort_keys=True))
    return lines


def render_table(report: CorpusReport) -> str:
    """Human-readable summary table."""
    rows = [
        ("files", len(report.files)),
        ("unreadable", len(report.errors)),
        ("parts", report.part_count),
        ("faces", report.face_count),
        ("edges", report.edge_count),
        ("mean faces/part", f"{report.mean_faces_per_part():.2f}"),
        ("mesh failure", f"{report.mesh_failure():.4f}"),
    ]
    lines = ["corpus summary", "-" * 34]
    lines += [f"{name:<18}{value}" for name, value in rows]
    for title, shares in (("face kinds", report.face_kind_shares()),
                          ("curve kinds", report.curve_kind_shares())):
        lines.append("")
        lines.append(title)
        lines.append("-" * 34)
        for kind, share in shares.items():
            lines.append(f"{kind:<18}{share:8.4f}")
    return "\n".join(lines) + "\n"


def write_report(report: CorpusReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(report_lines(report)) + "\n")


def write_plot_data(report: CorpusReport, path) -> None:
    """Bucket/count pairs for external plotting of the faces-per-part
    distribution."""
    with open(path, "w", encoding="utf-8") as fh:
        for edge, count in report.face_count_buckets():
            fh.write(f"{edge} {count}\n")
