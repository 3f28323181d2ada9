"""
Sampling labeled point clouds
=============================

The sampler spreads a budget across parts and faces in proportion to
surface area, draws area-uniform points inside each face's trim region,
and hands every batch to a user callback that labels it (or skips the
entity by returning None). Identical seeds give identical clouds, at
any thread count.
"""

import numpy as np

from brepkit import SamplerConfig, add_noise, builtin_callbacks, sample_parts
from brepkit.builders import plate_pair, primitive_box

# --- area weighting: two plates with a 1:3 area ratio ---
plates = plate_pair()

def face_index(part, topo, params):
    # payload can be anything; here it records which face a row hit
    return np.full(np.asarray(params).shape[0], topo.index)

positions, owners = sample_parts([plates], 4000, face_index,
                                 config=SamplerConfig(seed=0,
                                                      include_edges=False))
counts = np.bincount(np.asarray(owners, dtype=int))
print("per-face sample counts (areas 1 : 3):", counts)

# --- labels: built-in callbacks cover the common tasks ---
box = primitive_box()
feature = builtin_callbacks()["feature_edge"]
positions, labels = sample_parts([box], 1000, feature,
                                 config=SamplerConfig(seed=7))
labels = np.asarray(labels)
print("edge-labeled points:", int(labels.sum()), "of", labels.size)

# --- determinism: same seed, same bytes, even with 8 worker threads ---
serial, _ = sample_parts([box], 500, feature, config=SamplerConfig(seed=3))
threaded, _ = sample_parts([box], 500, feature,
                           config=SamplerConfig(seed=3, threads=8))
print("thread-count invariant:", serial.tobytes() == threaded.tobytes())

# --- noise: gaussian offsets scaled by the model's bbox diagonal ---
noisy = add_noise(serial, sigma=0.005, seed=3)
drift = np.linalg.norm(noisy - serial, axis=1)
print(f"mean perturbation {drift.mean():.5f} "
      f"(sigma 0.005 x diagonal {np.sqrt(3):.3f})")
