"""
Evaluating curves and surfaces
==============================

Every parametric kind evaluates to a jet: the point plus derivatives up
to a requested order. Surface jets feed normals, area density, and the
fundamental-form curvature pipeline; periodic parameters wrap; poles
and apexes are reported as singular instead of returning garbage.
"""

import numpy as np

from brepkit import curvature, curve_jet, eval_surface, surface_jet
from brepkit.errors import SingularJetError
from brepkit.model import Circle, SphereSurface, TorusSurface
from brepkit.surfaces import surface_normal

# --- a circle: jet rows are position, velocity, acceleration ---
circle = Circle(interval=(0.0, 2 * np.pi), location=(0.0, 0.0),
                radius=2.0, x_axis=(1.0, 0.0), y_axis=(0.0, 1.0))
jet = curve_jet(circle, np.pi / 3, 2)
print("circle point        ", jet[0])
print("circle velocity     ", jet[1])
print("circle acceleration ", jet[2], "(points back at the center)")

# periodic curves accept any parameter; t + 3 periods lands on t
same = curve_jet(circle, np.pi / 3 + 6 * np.pi, 2)
print("wraps periodically:", np.allclose(jet, same))

# --- a torus: curvature varies with the tube angle ---
x, y, z = np.eye(3)
torus = TorusSurface(trim_domain=((0.0, 0.0), (2 * np.pi, 2 * np.pi)),
                     location=np.zeros(3), max_radius=2.0, min_radius=0.5,
                     x_axis=x, y_axis=y, z_axis=z)
for v, where in ((0.0, "outer equator"), (np.pi, "inner equator")):
    info = curvature(torus, 0.3, v)
    print(f"torus K at {where}: {info.gaussian:+.4f}")

# eval_surface bundles the second-order jet; |Su x Sv| is the local
# area density that drives area-uniform sampling
sample = eval_surface(torus, 1.0, 1.0)
density = np.linalg.norm(np.cross(sample.su, sample.sv))
print("surface point:", np.round(sample.position, 4),
      " area density:", round(density, 4))
print("unit normal:", np.round(surface_normal(torus, 1.0, 1.0), 4))

# --- sphere poles are parametric singularities, not valid normals ---
sphere = SphereSurface(trim_domain=((0.0, -np.pi / 2), (2 * np.pi, np.pi / 2)),
                       location=np.zeros(3), radius=1.0,
                       x_axis=x, y_axis=y, z_axis=z)
try:
    surface_normal(sphere, 0.0, np.pi / 2)
except SingularJetError as exc:
    print("north pole:", exc)
print("just below the pole:",
      np.round(surface_normal(sphere, 0.0, np.pi / 2 - 1e-3), 4))

# jets of any order are available; derivatives beyond a polynomial's
# degree vanish identically
print("5th-order sphere jet shape:", surface_jet(sphere, 1.0, 0.3, 5).shape)
