"""Steiner symmetrization drives a square towards the disk of equal area."""
import numpy as np

from harmonica.grid import GridSpec
from harmonica.symmetrize import VoxelSet, brunn_minkowski_holds, minkowski_sum, symmetrize_to_ball

spec = GridSpec(2, 64, 1.0)
m = np.zeros(spec.shape, bool)
m[10:42, 20:52] = True
S = VoxelSet(spec, m)
T, hist = symmetrize_to_ball(S)
for k, d in enumerate(hist, 1):
    if k in (1, 2, 5, 10, 20):
        print(f"step {k:2d}: |T Δ B| / |S| = {d / S.measure:.4f}")
print("cell count preserved:", T.count == S.count)

rng = np.random.default_rng(0)
A = VoxelSet(GridSpec(2, 12, 1.0), rng.random((12, 12)) < 0.3)
B = VoxelSet(GridSpec(2, 12, 1.0), rng.random((12, 12)) < 0.3)
C = minkowski_sum(A, B)
print(f"|A|={A.count} |B|={B.count} |A+B|={C.count} cells, Brunn-Minkowski:",
      brunn_minkowski_holds(A.count, B.count, C.count, 2))
