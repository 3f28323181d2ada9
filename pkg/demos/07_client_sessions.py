"""
The client layer: sessions, handles, and kernel parity
======================================================

brepkit_client wraps the kernel's data-pipeline API in session-scoped
handles. Results are bit-identical to the kernel's; the client adds
lifetime safety (closed sessions invalidate every handle they issued)
and converts payload lists to host arrays.
"""

import tempfile
from pathlib import Path

import numpy as np

import brepkit_client as client
from brepkit.cli import main

# fixture files come from the kernel CLI, the same interface any other
# consumer would use
corpus = Path(tempfile.mkdtemp())
main(["fixtures", str(corpus)])
box = corpus / "box.hdf5"

# --- handles expose kernel values exactly ---
parts = client.read_parts(box)
print("faces:", parts[0].face_count, "edges:", parts[0].edge_count)
print("face 0 surface:", parts[0].surface(0).shape_name)

# --- sampling with a host callback; bound topo handles inside ---
def compute_labels(part, topo, params):
    n = np.asarray(params).shape[0]
    return np.ones(n) if topo.is_face() else np.zeros(n)

positions, labels = client.sample_parts(parts, 1000, compute_labels, seed=5)
print("cloud:", positions.shape, "face-labeled:", int(labels.sum()))

# identical seed -> identical bytes, the same as the kernel produces
again, _ = client.sample_parts(parts, 1000, compute_labels, seed=5)
print("deterministic:", positions.tobytes() == again.tobytes())

# --- meshes keep their part/face indexing ---
meshes = client.read_meshes(box)
print("mesh of face 2:", meshes[0][2].points.shape)
vertices, triangles = client.get_mesh(meshes, parts=parts)
print("merged:", vertices.shape[0], "vertices,", len(triangles), "triangles")

# --- session lifetime: closing invalidates every handle ---
with client.Session() as session:
    scoped = session.read_parts(box)
    print("inside the session:", scoped[0].face_count, "faces")
try:
    scoped[0].face_count
except client.SessionClosedError as exc:
    print("after close:", exc)
