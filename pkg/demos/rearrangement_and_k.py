"""Decreasing rearrangement, Lorentz norms and the (L1, Linf) K-functional."""
import numpy as np

from harmonica.grid import GridSpec, SampledFunction, lp_norm
from harmonica.rearrange import (decreasing_rearrangement, fundamental_decomposition, j_functional,
                                 k_functional, lorentz_norm, lorentz_quasinorm, weak_norm)

spec = GridSpec(1, 512, 4.0)
x = spec.axis
f = SampledFunction(spec, np.exp(-x * x) * (1 + 0.5 * np.cos(7 * x)))
fs = decreasing_rearrangement(f)

print("p     Lp         L^{p,1}*   L^{p,inf}")
for p in (1.5, 2.0, 4.0):
    print(f"{p:<5} {lp_norm(f, p):.6f}  {lorentz_quasinorm(fs, (p, 1.0)):.6f}  {weak_norm(fs, p):.6f}")
print(f"L^{{2,2}} norm (K form) {lorentz_norm(fs, (2.0, 2.0)):.6f}")

print("\nt       K(f,t)    = int_0^t f*")
for t in (0.01, 0.1, 1.0, 10.0):
    print(f"{t:<7} {k_functional(fs, t):.6f}")

pieces = fundamental_decomposition(f)
worst = max(j_functional(p, 2.0 ** v) / k_functional(f, 2.0 ** v) for v, p in pieces)
print(f"\n{len(pieces)} dyadic pieces, max J/K {worst:.3f} (bound 3)")
print(f"pieces sum back to f: {np.max(np.abs(sum(p.values for _, p in pieces) - f.values)):.1e}")
