"""
Walking topology and validating invariants
==========================================

Topology stores only top-down links (solid -> shell -> face -> loop ->
half-edge -> edge); the reverse directions come from a derived index.
The validator checks every structural invariant and reports violations
as entity paths, so a corrupt file names exactly what is wrong.
"""

from brepkit import validate_part
from brepkit.builders import corrupt, MUTATIONS, primitive_box
from brepkit.topology import (euler_characteristic, face_oriented_normal,
                              loop_halfedges_oriented, reverse_index)

box = primitive_box()

# V - E + F for a closed genus-0 shell
print("box Euler characteristic:", euler_characteristic(box))

# loops chain half-edges head to tail; the traversal also reports
# whether each 3D curve must be walked backwards
for he, flip in loop_halfedges_oriented(box, 0):
    edge = box.topology.halfedges[he].edge
    print(f"  loop 0 uses half-edge {he} (edge {edge}, reversed={flip})")

# the reverse index answers bottom-up questions: which faces use a
# surface, which loops use a half-edge, and so on
rev = reverse_index(box)
print("faces per surface:", [len(f) for f in rev.surface_faces])

# solid-context normals honor both the face flag and the shell's
# per-use orientation flag; for the box they all point outward
n = face_oriented_normal(box, 0, 0.5, 0.5, shell_use=0)
print("bottom face outward normal:", n)

# a clean part validates silently
print("violations in a fresh box:", validate_part(box))

# every mutation class is caught and located
for mutation in MUTATIONS:
    try:
        bad = corrupt(box, mutation)
    except ValueError:
        continue            # this part has no target for the mutation
    first = validate_part(bad)[0]
    print(f"{mutation:>18}: {first}")
