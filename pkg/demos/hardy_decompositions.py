"""Whitney balls, Calderon-Zygmund cubes and an atomic decomposition."""
import numpy as np

from harmonica.grid import GridSpec, SampledFunction
from harmonica.hardy import atomic_decompose, cz_decompose, h1_norm, whitney, whitney_checks
from harmonica.phantoms import mean_zero_bump
from harmonica.symmetrize import VoxelSet

spec = GridSpec(2, 64, 1.0)
O = VoxelSet(spec, spec.radius() < 0.7)
W = whitney(O)
chk = whitney_checks(O, W)
print(f"Whitney: {len(W)} balls, W1-W4 {[chk[k] for k in ('W1', 'W2', 'W3', 'W4')]}, "
      f"overlap {chk['max_overlap']} <= {chk['N']}")

s1 = GridSpec(1, 32, 2.0)
chi = SampledFunction.from_callable(s1, lambda x: ((x >= 0) & (x < 1)).astype(float))
cubes, avgs = cz_decompose(chi, 0.5, with_averages=True)
print("CZ cubes at alpha=1/2:", [(q.m, q.v, a) for q, a in zip(cubes, avgs)])

for N in (256, 512):
    f = mean_zero_bump(GridSpec(1, N, 4.0), 1.0)
    A = atomic_decompose(f)
    err = np.abs(A.reconstruct().values - f.values).max()
    print(f"N={N}: {len(A)} atoms, sum|lambda| {A.coefficient_sum:.3f}, "
          f"ratio to ||Mf||_1 {A.ratio:.2f}, reconstruction error {err:.1e}")
print("H1 norm proxy of the bump:", round(h1_norm(f), 4))
