"""Hardy-Littlewood maximal function over grid-aligned cubes, the Vitali
selection, a finite-dictionary grand maximal function and BMO norms.

The cube search family consists of every axis cube whose faces lie on grid
lines and which fits in the box: ``k`` cells per side, ``k = 1..N``.  Cell
``i`` is ``[x_i, x_i + h)``, and a cube contains a grid point when it
contains that point's cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage, signal
from scipy.special import gamma as _gamma

from .errors import InvalidParameter
from .grid import GridSpec, SampledFunction

__all__ = [
    "CubeFamily",
    "BumpDictionary",
    "maximal_function",
    "vitali_subcover",
    "grand_maximal",
    "bmo_norm",
    "sharp_function",
    "mean_oscillation_windows",
    "weak_type_constant",
    "disk_maximum_filter",
    "ball_volume",
]


def ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / _gamma(n / 2 + 1)


def _window_sums(a: np.ndarray, k: int) -> np.ndarray:
    """Sums of ``a`` over every ``k^n`` block that fits, via summed areas."""
    s = a
    for ax in range(a.ndim):
        c = np.cumsum(s, axis=ax)
        pad = [(0, 0)] * a.ndim
        pad[ax] = (1, 0)
        c = np.pad(c, pad)
        hi = [slice(None)] * a.ndim
        lo = [slice(None)] * a.ndim
        hi[ax] = slice(k, None)
        lo[ax] = slice(0, -k)
        s = c[tuple(hi)] - c[tuple(lo)]
    return s


def _spread_max(w: np.ndarray, k: int, N: int) -> np.ndarray:
    """For each cell ``i`` the max of ``w[a]`` over block corners ``a`` with
    ``a <= i <= a + k - 1`` on every axis."""
    out = w
    for ax in range(w.ndim):
        pad = [(0, 0)] * out.ndim
        pad[ax] = (k - 1, 0)
        p = np.pad(out, pad, constant_values=-np.inf)
        # after padding, p[i .. i+k-1] are the corners covering cell i
        sl = [slice(None)] * out.ndim
        sl[ax] = slice(0, N)
        out = _forward_window_max(p, k, ax)[tuple(sl)]
    return out


def _forward_window_max(p: np.ndarray, k: int, ax: int) -> np.ndarray:
    """``out[i] = max(p[i], ..., p[i+k-1])`` along ``ax``."""
    # a centered filter of size k covers [i - k//2, i - k//2 + k - 1]
    shift = k // 2
    pad = [(0, 0)] * p.ndim
    pad[ax] = (0, shift)
    pp = np.pad(p, pad, constant_values=-np.inf)
    m = ndimage.maximum_filter1d(pp, size=k, axis=ax, mode="constant", cval=-np.inf)
    sl = [slice(None)] * p.ndim
    sl[ax] = slice(shift, None)
    return m[tuple(sl)]


def maximal_function(f: SampledFunction) -> SampledFunction:
    """Non-centered maximal function ``Mf(x) = sup_{Q containing x} avg_Q |f|``
    over the grid cube family."""
    spec = f.spec
    a = np.abs(f.values)
    N, n = spec.N, spec.n
    best = np.zeros(spec.shape)
    for k in range(1, N + 1):
        avg = _window_sums(a, k) / k ** n
        np.maximum(best, _spread_max(avg, k, N), out=best)
    return SampledFunction(spec, best)


def weak_type_constant(f: SampledFunction, Mf: SampledFunction | None = None) -> float:
    """``sup_s s |{Mf > s}| / ||f||_1``."""
    from .rearrange import weak_norm

    if Mf is None:
        Mf = maximal_function(f)
    l1 = float(np.abs(f.values).sum() * f.spec.cell_volume)
    if l1 == 0:
        return 0.0
    return weak_norm(Mf, 1.0) / l1


@dataclass(frozen=True, eq=False)
class CubeFamily:
    """Axis-parallel cubes given by centers ``(K, n)`` and edges ``(K,)``."""

    centers: np.ndarray
    edges: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.centers, dtype=float))
        e = np.asarray(self.edges, dtype=float).reshape(-1)
        if c.shape[0] != e.size and e.size:
            raise InvalidParameter("one edge per center is required")
        if e.size == 0:
            c = c.reshape(0, c.shape[-1] if c.size else 1)
        if np.any(e <= 0):
            raise InvalidParameter("edges must be positive")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "edges", e)

    def __len__(self):
        return self.edges.size

    def dilate(self, factor: float) -> "CubeFamily":
        return CubeFamily(self.centers, self.edges * factor)

    def contains(self, pts: np.ndarray, open_: bool = False) -> np.ndarray:
        """Membership matrix ``(len, npts)`` for points of shape ``(npts, n)``."""
        d = np.abs(pts[None, :, :] - self.centers[:, None, :]).max(axis=2)
        half = self.edges[:, None] / 2
        return d < half if open_ else d <= half


def vitali_subcover(F: CubeFamily) -> CubeFamily:
    """Greedy selection by decreasing edge: keep a cube when its interior
    misses every cube kept so far.  Kept cubes are pairwise disjoint and
    their 3-fold dilates already cover the union (so 5-fold ones do)."""
    if len(F) == 0:
        return F
    order = np.argsort(-F.edges, kind="stable")
    kept: list[int] = []
    for i in order:
        ok = True
        for j in kept:
            gap = np.abs(F.centers[i] - F.centers[j]).max()
            if gap < (F.edges[i] + F.edges[j]) / 2:
                ok = False
                break
        if ok:
            kept.append(int(i))
    kept.sort()
    return CubeFamily(F.centers[kept], F.edges[kept])


@dataclass(frozen=True)
class BumpDictionary:
    """Radial bumps ``A_k (1 - r^2)^{p_k}`` on ``B(0, 1)``, scaled so that
    ``sup |grad| = 1``, applied at the given scales with aperture ``b``."""

    powers: tuple = (2, 3, 4)
    scales: tuple = field(default_factory=tuple)
    b: float = 2.0

    def __post_init__(self):
        if not self.powers:
            raise InvalidParameter("dictionary needs at least one profile")
        if any(int(p) < 2 for p in self.powers):
            raise InvalidParameter("powers below 2 are not C^1 at the boundary")
        if not self.b > 1:
            raise InvalidParameter("aperture b must exceed 1")
        if any(t <= 0 for t in self.scales):
            raise InvalidParameter("scales must be positive")
        object.__setattr__(self, "powers", tuple(int(p) for p in self.powers))
        object.__setattr__(self, "scales", tuple(float(t) for t in self.scales))

    @classmethod
    def default(cls, spec: GridSpec, n_scales: int = 12, b: float = 2.0,
                powers=(2, 3, 4)) -> "BumpDictionary":
        scales = np.geomspace(spec.h, spec.L, n_scales)
        return cls(tuple(powers), tuple(scales), b)

    @staticmethod
    def amplitude(p: int) -> float:
        # |d/dr (1-r^2)^p| = 2p r (1-r^2)^{p-1}, largest at r^2 = 1/(2p-1)
        r2 = 1.0 / (2 * p - 1)
        return 1.0 / (2 * p * math.sqrt(r2) * (1 - r2) ** (p - 1))

    def profile(self, p: int, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < 1, self.amplitude(p) * np.clip(1 - r * r, 0, None) ** p, 0.0)

    @property
    def sup_norm(self) -> float:
        return max(self.amplitude(p) for p in self.powers)

    def gradient_bound(self, samples: int = 20001) -> float:
        """Largest sampled finite-difference slope over all profiles."""
        r = np.linspace(0, 1.2, samples)
        return max(float(np.max(np.abs(np.diff(self.profile(p, r))) / np.diff(r)))
                   for p in self.powers)


def disk_maximum_filter(a: np.ndarray, radius: float) -> np.ndarray:
    """``out[i] = max{a[j] : |j - i| < radius}`` in index units, computed as
    a union of rectangles with separable 1D filters (1D and 2D arrays;
    3D falls back to a footprint filter)."""
    R = int(math.ceil(radius)) - 1
    if radius <= 1 or R < 1:
        return a.copy()
    if a.ndim == 1:
        return ndimage.maximum_filter1d(a, 2 * R + 1, mode="constant", cval=-np.inf)
    if a.ndim == 2:
        widths = {}
        for dy in range(R + 1):
            w = math.isqrt(max(0, math.ceil(radius * radius) - 1 - dy * dy))
            while w * w + dy * dy >= radius * radius:
                w -= 1
            if w < 0:
                continue
            widths[w] = max(widths.get(w, -1), dy)
        # each width w spans rows |dy| <= widths[w]; narrower widths reach farther
        out = np.full(a.shape, -np.inf)
        for w, dy in widths.items():
            m = ndimage.maximum_filter1d(a, 2 * w + 1, axis=1, mode="constant", cval=-np.inf)
            m = ndimage.maximum_filter1d(m, 2 * dy + 1, axis=0, mode="constant", cval=-np.inf)
            np.maximum(out, m, out=out)
        return out
    g = np.indices((2 * R + 1,) * a.ndim) - R
    fp = (g ** 2).sum(axis=0) < radius * radius
    return ndimage.maximum_filter(a, footprint=fp, mode="constant", cval=-np.inf)


def grand_maximal(f: SampledFunction, bumps: BumpDictionary | None = None) -> SampledFunction:
    """Finite-dictionary grand maximal function.

    For every profile and scale ``t`` the convolution ``f * phi_t`` is taken
    by FFT on a grid padded to three times the extent, and its modulus is
    maximised over grid points ``y`` with ``|y - x| < b t``.
    """
    spec = f.spec
    if bumps is None:
        bumps = BumpDictionary.default(spec)
    if not bumps.scales:
        raise InvalidParameter("dictionary has no scales")
    n, N, h = spec.n, spec.N, spec.h
    if not np.any(f.values):
        return SampledFunction.zeros(spec)
    tmax = max(bumps.scales)
    margin = int(math.ceil((tmax * (1 + bumps.b)) / h)) + 1
    margin = min(margin, 2 * N)
    big = np.pad(f.values.astype(float), margin)
    best = np.zeros(big.shape)
    for t in bumps.scales:
        R = int(math.ceil(t / h))
        g = np.arange(-R, R + 1) * h
        rr = np.sqrt(sum(x * x for x in np.meshgrid(*([g] * n), indexing="ij")))
        for p in bumps.powers:
            ker = bumps.profile(p, rr / t) * (h / t) ** n
            conv = np.abs(signal.fftconvolve(big, ker, mode="same"))
            np.maximum(best, disk_maximum_filter(conv, bumps.b * t / h), out=best)
    core = tuple(slice(margin, margin + N) for _ in range(n))
    return SampledFunction(spec, best[core])


def mean_oscillation_windows(f: SampledFunction, k: int, q: float = 1.0) -> np.ndarray:
    """``mo_q(f, Q)`` for every grid cube of ``k`` cells per side, indexed by
    its lower corner."""
    a = f.values
    n = a.ndim
    if q == 2:
        s1 = _window_sums(a, k) / k ** n
        s2 = _window_sums(a * a, k) / k ** n
        return np.sqrt(np.maximum(s2 - s1 * s1, 0.0))
    win = np.lib.stride_tricks.sliding_window_view(a, (k,) * n)
    axes = tuple(range(n, 2 * n))
    mean = win.mean(axis=axes, keepdims=True)
    dev = np.abs(win - mean)
    if q == 1:
        return dev.mean(axis=axes)
    return (dev ** q).mean(axis=axes) ** (1.0 / q)


def bmo_norm(f: SampledFunction, q: float = 1.0) -> float:
    """``sup_Q mo_q(f, Q)`` over the grid cube family."""
    if not q >= 1:
        raise InvalidParameter(f"q must be >= 1, got {q}")
    best = 0.0
    for k in range(2, f.spec.N + 1):
        best = max(best, float(mean_oscillation_windows(f, k, q).max()))
    return best


def sharp_function(f: SampledFunction) -> SampledFunction:
    """``f#(x) = sup_{Q containing x} mo_1(f, Q)``."""
    spec = f.spec
    best = np.zeros(spec.shape)
    for k in range(2, spec.N + 1):
        mo = mean_oscillation_windows(f, k, 1.0)
        np.maximum(best, _spread_max(mo, k, spec.N), out=best)
    return SampledFunction(spec, best)
