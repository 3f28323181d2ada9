"""
Mesh assembly and corpus statistics
===================================

Per-face meshes merge into one watertight vertex/triangle pair with
tolerance-based welding along shared boundaries. Corpus statistics
aggregate entity counts, kind histograms, and the fraction of faces
whose mesh slot is empty (the "mesh failure" rate of a dataset).
"""

import sys
import tempfile
from pathlib import Path

from brepkit import get_mesh, read_meshes, read_parts, write_parts
from brepkit.builders import (primitive_box, primitive_cylinder_capped,
                              without_mesh)
from brepkit.meshing import export_mesh_text, mesh_failure_rate
from brepkit.stats import corpus_stats, render_table

root = Path(tempfile.mkdtemp())
files = []
for name, part in (("box", primitive_box()),
                   ("cylinder", primitive_cylinder_capped()),
                   ("partial", without_mesh(primitive_box(), 2))):
    path = root / f"{name}.hdf5"
    write_parts([part], path)
    files.append(path)

# merge the box's six face meshes; welding fuses the 24 corner copies
meshes = read_meshes(files[0])
parts = read_parts(files[0])
vertices, triangles = get_mesh(meshes, parts=parts)
print("box mesh:", vertices.shape[0], "vertices,",
      len(triangles), "triangles")

# the merged mesh exports as plain text (vertex lines, then faces)
export_mesh_text(vertices[:2], triangles[:1], sys.stdout)

# one empty face out of six -> failure rate 1/6 for that file
failure = mesh_failure_rate(files)
for path, rate in failure.per_file.items():
    print(f"  {Path(path).name}: {rate:.3f} empty")
print(f"pooled failure rate: {failure.aggregate:.3f}")

# corpus statistics: kind histograms and per-part face counts
report = corpus_stats(files)
print()
print(render_table(report))
