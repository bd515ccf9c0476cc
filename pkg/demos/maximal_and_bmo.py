"""Hardy-Littlewood maximal function of an indicator, weak-(1,1) and BMO."""
import numpy as np

from harmonica.grid import GridSpec, SampledFunction
from harmonica.maximal import bmo_norm, maximal_function, sharp_function, weak_type_constant

spec = GridSpec(1, 256, 4.0)
x, h = spec.axis, spec.h
chi = SampledFunction(spec, ((x >= 0) & (x < 1)).astype(float))
M = maximal_function(chi)

# cell convention: Mf = 1/(x + h) to the right of the interval, 1/(1 - x) to the left
right, left = x >= 1, x < 0
print("max error vs closed form:",
      max(np.abs(M.values[right] - 1 / (x[right] + h)).max(), np.abs(M.values[left] - 1 / (1 - x[left])).max()))
print("weak-(1,1) constant:", weak_type_constant(chi, M), "(at most 2 in 1D)")

print("bmo(chi):", bmo_norm(chi), " max sharp:", sharp_function(chi).values.max())
for N in (128, 256, 512):
    s = GridSpec(1, N, 1.0)
    lg = SampledFunction(s, np.log(np.maximum(np.abs(s.axis), s.h)))
    print(f"N={N}: bmo(log|x|) {bmo_norm(lg):.4f}")
