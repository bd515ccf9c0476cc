"""Forward-project a Gaussian, invert, and watch the error fall with more directions."""
import numpy as np

from harmonica import phantoms
from harmonica.grid import GridSpec
from harmonica.radon import DirectionSet, invert, projection_slice_check, radon_forward, scaling_probe

spec = GridSpec(2, 128, 1.0)
f = phantoms.by_name("gauss", spec)

for D in (20, 45, 90, 180):
    g = radon_forward(f, DirectionSet.uniform(2, D), 256)
    rec = invert(g)
    err = np.linalg.norm(rec.values - f.values) / np.linalg.norm(f.values)
    print(f"directions {D:4d}  relative L2 error {err:.4f}")

res = projection_slice_check(phantoms.gaussian(GridSpec(2, 128, 4.0), 1.0), DirectionSet.uniform(2, 16))
print(f"projection-slice residual {res:.2e}")

# mixed-norm growth of the transform of small balls: slope n - 1 + 1/r
for r in (1.0, 2.0, np.inf):
    print(f"r={r}: ball slope {scaling_probe('ball', 2.0, r, [0.1, 0.15, 0.22, 0.33], N=256):.4f}")
