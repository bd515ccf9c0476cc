"""Radon and X-ray transforms on sampled functions, the backprojection,
Riesz potentials as Fourier multipliers and the Riesz-potential inversion.

Sinogram offsets cover ``[-L sqrt(n), L sqrt(n))`` so no hyperplane meeting
the box is lost.  Direction weights sum to the surface measure of the full
sphere; in 2D the directions cover ``[0, pi)`` only and the weights absorb
the evenness ``Rf(-s, -t) = Rf(s, t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import ndimage
from scipy.special import gamma as _gamma

from .errors import (InvalidDirection, InvalidParameter, MeanNotZero,
                     ResolutionMismatch)
from .grid import (GridSpec, SampledFunction, Spectrum, dft, idft, interpolate,
                   orthonormal_complement, parallel_map, worker_count)

__all__ = [
    "DirectionSet",
    "Sinogram",
    "MixedNorm",
    "SupportResult",
    "radon_forward",
    "xray_forward",
    "adjoint",
    "riesz_potential",
    "invert",
    "invert_unscaled",
    "inversion_constant",
    "sphere_measure",
    "projection_slice_check",
    "support_predicate",
    "exponent_admissible",
    "mixed_norm",
    "scaling_probe",
    "probe_norms",
]


def sphere_measure(n: int) -> float:
    """Surface measure of the unit sphere in R^n."""
    return 2 * math.pi ** (n / 2) / _gamma(n / 2)


def inversion_constant(n: int) -> float:
    """``Gamma(n/2)^{-1} 2^{1-n} pi^{1-n/2}``; pairs with the normalised
    sphere measure in the backprojection."""
    return 1.0 / _gamma(n / 2) * 2.0 ** (1 - n) * math.pi ** (1 - n / 2)


@dataclass(frozen=True, eq=False)
class DirectionSet:
    n: int
    directions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        d = np.atleast_2d(np.asarray(self.directions, dtype=float))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if d.shape[1] != self.n or d.shape[0] != w.size:
            raise InvalidParameter("directions must be (D, n) with one weight each")
        if np.any(np.abs(np.linalg.norm(d, axis=1) - 1) > 1e-12):
            raise InvalidDirection("directions must be unit vectors to 1e-12")
        if np.any(w <= 0):
            raise InvalidParameter("weights must be positive")
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.size

    @classmethod
    def uniform(cls, n: int, D: int) -> "DirectionSet":
        """Equally spaced angles on ``[0, pi)`` (n=2) or a Fibonacci sphere
        (n=3), equal weights summing to the sphere measure."""
        if D < 1:
            raise InvalidParameter("need at least one direction")
        if n == 2:
            th = math.pi * np.arange(D) / D
            d = np.stack([np.cos(th), np.sin(th)], axis=1)
        elif n == 3:
            k = np.arange(D) + 0.5
            z = 1 - 2 * k / D
            phi = math.pi * (3 - math.sqrt(5)) * np.arange(D)
            rho = np.sqrt(1 - z * z)
            d = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
        else:
            raise InvalidParameter("direction sets exist for n = 2, 3")
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        return cls(n, d, np.full(D, sphere_measure(n) / D))


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Transform values on ``dirs x offsets``.

    ``kind="radon"``: values ``(D, T)`` for hyperplanes ``<s, x> = t``.
    ``kind="xray"``: values ``(D, T, T)`` for lines ``a u + b v + R s``, with
    ``(u, v)`` the orthonormal complement of ``s``.
    """

    dirs: DirectionSet
    t0: float
    ht: float
    values: np.ndarray
    spec: GridSpec
    kind: str = "radon"

    def __post_init__(self):
        v = np.asarray(self.values)
        D = len(self.dirs)
        if v.shape[0] != D:
            raise InvalidParameter("one sinogram row per direction is required")
        if not np.all(np.isfinite(v)):
            raise InvalidParameter("sinogram values must be finite")
        v = np.array(v, dtype=float, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_offsets(self) -> int:
        return self.values.shape[1]

    @property
    def offsets(self) -> np.ndarray:
        return self.t0 + self.ht * np.arange(self.n_offsets)

    def with_values(self, values) -> "Sinogram":
        return Sinogram(self.dirs, self.t0, self.ht, values, self.spec, self.kind)


@dataclass(frozen=True)
class MixedNorm:
    q: float
    r: float

    def __post_init__(self):
        if not (self.q >= 1 and self.r >= 1):
            raise InvalidParameter("mixed norm exponents must be >= 1")


def _offset_grid(spec: GridSpec, n_offsets: int):
    T = spec.L * math.sqrt(spec.n)
    return -T, 2 * T / n_offsets


def _nodes(span: float, h: float):
    m = int(math.floor(2 * span / h + 1e-9))
    s = -span + h * np.arange(m + 1)
    w = np.full(s.shape, h)
    w[0] = w[-1] = h / 2
    return s, w


def radon_forward(f: SampledFunction, dirs: DirectionSet, n_offsets: int) -> Sinogram:
    """Hyperplane integrals by trapezoid quadrature of the multilinear
    interpolant (line integrals in 2D, plane integrals in 3D)."""
    spec = f.spec
    if spec.n not in (2, 3) or dirs.n != spec.n:
        raise InvalidParameter("Radon transform needs n = 2 or 3 and matching directions")
    t0, ht = _offset_grid(spec, n_offsets)
    ts = t0 + ht * np.arange(n_offsets)
    span = spec.L * math.sqrt(spec.n)
    s, w = _nodes(span, spec.h)

    def row(k):
        sig = dirs.directions[k]
        perp = orthonormal_complement(sig)
        if spec.n == 2:
            pts = (sig[:, None, None] * ts[None, :, None]
                   + perp[0][:, None, None] * s[None, None, :])
            return interpolate(f, pts) @ w
        ww = np.outer(w, w)
        out = np.empty(n_offsets)
        for j, t in enumerate(ts):
            pts = (t * sig[:, None, None] + perp[0][:, None, None] * s[None, :, None]
                   + perp[1][:, None, None] * s[None, None, :])
            out[j] = np.sum(interpolate(f, pts) * ww)
        return out

    vals = np.array(parallel_map(row, range(len(dirs))))
    return Sinogram(dirs, t0, ht, vals, spec, "radon")


def xray_forward(f: SampledFunction, dirs: DirectionSet, n_offsets: int) -> Sinogram:
    """Line integrals in 3D over a ``T x T`` offset grid per direction."""
    spec = f.spec
    if spec.n != 3 or dirs.n != 3:
        raise InvalidParameter("X-ray transform is implemented for n = 3")
    t0, ht = _offset_grid(spec, n_offsets)
    ts = t0 + ht * np.arange(n_offsets)
    s, w = _nodes(spec.L * math.sqrt(3), spec.h)

    def row(k):
        sig = dirs.directions[k]
        u, v = orthonormal_complement(sig)
        out = np.empty((n_offsets, n_offsets))
        for i, a in enumerate(ts):
            pts = (a * u[:, None, None] + v[:, None, None] * ts[None, :, None]
                   + sig[:, None, None] * s[None, None, :])
            out[i] = interpolate(f, pts) @ w
        return out

    vals = np.array(parallel_map(row, range(len(dirs))))
    return Sinogram(dirs, t0, ht, vals, spec, "xray")


def adjoint(g: Sinogram, spec: GridSpec | None = None) -> SampledFunction:
    """Backprojection ``R*g(x) = sum_k w_k g(s_k, <s_k, x>)`` with linear
    interpolation in ``t`` (zero outside the offset range)."""
    if g.kind != "radon":
        raise InvalidParameter("adjoint is defined for hyperplane sinograms")
    spec = g.spec if spec is None else spec
    X = np.stack([x.reshape(-1) for x in spec.mesh()])
    ts = g.offsets

    def contrib(k):
        proj = g.dirs.directions[k] @ X
        return g.dirs.weights[k] * np.interp(proj, ts, g.values[k], left=0.0, right=0.0)

    out = np.zeros(X.shape[1])
    # batches of worker size keep at most a few full-grid arrays alive
    step = max(1, worker_count())
    for lo in range(0, len(g.dirs), step):
        for c in parallel_map(contrib, range(lo, min(lo + step, len(g.dirs)))):
            out += c
    return SampledFunction(spec, out.reshape(spec.shape))


def riesz_potential(f: SampledFunction, gamma: complex,
                    mean_tol: float = 1e-8) -> SampledFunction:
    """``I^gamma f`` with multiplier ``|xi|^{-gamma}`` and the zero frequency
    removed.

    Raises ``MeanNotZero`` when ``Re gamma > 0`` and
    ``|sum f h^n| > mean_tol * ||f||_1``.
    """
    gamma = complex(gamma)
    spec = f.spec
    if gamma.real > 0:
        mass = abs(np.sum(f.values)) * spec.cell_volume
        l1 = np.sum(np.abs(f.values)) * spec.cell_volume
        if mass > mean_tol * l1:
            raise MeanNotZero(f"mean {mass:.3e} exceeds {mean_tol} * ||f||_1")
    F = dft(f)
    xi = np.sqrt(sum(k * k for k in spec.freq_mesh()))
    mult = np.zeros(xi.shape, dtype=complex)
    nz = xi > 0
    mult[nz] = np.exp(-gamma * np.log(xi[nz]))
    real_out = gamma.imag == 0 and np.isrealobj(f.values)
    if gamma.imag == 0:
        mult = mult.real
    return idft(Spectrum(spec, F.coeffs * mult), real=real_out or None)


def _check_resolution(g: Sinogram, spec: GridSpec):
    if g.spec.n != spec.n:
        raise ResolutionMismatch("sinogram and grid dimensions differ")
    need = spec.L * math.sqrt(spec.n)
    if g.t0 > -need + 1e-9 or g.t0 + g.ht * g.n_offsets < need - 1e-9:
        raise ResolutionMismatch("offsets do not cover the target box")
    if g.ht > 2 * spec.h + 1e-12:
        raise ResolutionMismatch(f"offset step {g.ht:.4g} too coarse for grid step {spec.h:.4g}")


def invert_unscaled(g: Sinogram, spec: GridSpec | None = None, pad: int = 4) -> SampledFunction:
    """``I^{-(n-1)}`` of the normalised backprojection, before the constant.

    The backprojection is formed on a grid ``pad`` times larger with the
    same step; ``g`` vanishes for offsets beyond the box so this only adds
    the slowly decaying tail of ``R*g``.  The result is cropped back.
    """
    if g.kind != "radon":
        raise InvalidParameter("inversion needs a hyperplane sinogram")
    spec = g.spec if spec is None else spec
    _check_resolution(g, spec)
    n = spec.n
    big = GridSpec(n, spec.N * pad, spec.L * pad)
    bp = adjoint(g, big)
    bp = bp.with_values(bp.values / sphere_measure(n))
    rec = riesz_potential(bp, -(n - 1))
    lo = (spec.N * pad - spec.N) // 2
    core = tuple(slice(lo, lo + spec.N) for _ in range(n))
    return SampledFunction(spec, rec.values[core].real)


def invert(g: Sinogram, spec: GridSpec | None = None, pad: int = 4) -> SampledFunction:
    """``f = Gamma(n/2)^{-1} 2^{1-n} pi^{1-n/2} I^{-(n-1)} R* g`` with ``R*``
    taken over the normalised sphere measure."""
    rec = invert_unscaled(g, spec, pad)
    return rec * inversion_constant(rec.spec.n)


def projection_slice_check(f: SampledFunction, dirs: DirectionSet,
                           n_offsets: int | None = None, pad: int = 4,
                           band: float = 0.5) -> float:
    """Max over directions of the relative L2 gap between the 1D transform
    of each sinogram row and the 2D spectrum along the ray ``R s``.

    The 2D spectrum comes from an FFT zero-padded ``pad`` times, sampled on
    the ray by cubic interpolation.  Frequencies up to ``band`` times the
    grid Nyquist are compared.
    """
    spec = f.spec
    if spec.n != 2:
        raise InvalidParameter("projection-slice check is implemented for n = 2")
    if n_offsets is None:
        n_offsets = 2 * spec.N
    if not np.any(f.values):
        return 0.0
    sino = radon_forward(f, dirs, n_offsets)
    big = GridSpec(2, spec.N * pad, spec.L * pad)
    lo = (big.N - spec.N) // 2
    vals = np.zeros(big.shape)
    vals[lo:lo + spec.N, lo:lo + spec.N] = f.values
    F = dft(SampledFunction(big, vals)).coeffs
    dk = math.pi / big.L
    smax = band * math.pi / spec.h

    T = sino.n_offsets
    ds = 2 * math.pi / (T * sino.ht)
    kk = np.arange(-(T // 2), T - T // 2)
    svals = kk * ds
    keep = np.abs(svals) <= smax
    svals = svals[keep]
    ts = sino.offsets
    E = np.exp(-1j * np.outer(svals, ts)) * sino.ht
    worst = 0.0
    for k, sig in enumerate(dirs.directions):
        row_ft = E @ sino.values[k]
        xi = np.outer(sig, svals)
        idx = xi / dk + big.N // 2
        re = ndimage.map_coordinates(F.real, idx, order=3, mode="nearest")
        im = ndimage.map_coordinates(F.imag, idx, order=3, mode="nearest")
        ref = re + 1j * im
        den = np.linalg.norm(ref)
        if den == 0:
            continue
        worst = max(worst, float(np.linalg.norm(row_ft - ref) / den))
    return worst


@dataclass(frozen=True)
class SupportResult:
    holds: bool
    witness: tuple | None
    outside_max: float
    tail: float

    def __bool__(self):
        return self.holds


def support_predicate(g: Sinogram, R: float, margin: float, tol: float = 0.05,
                      f_inf: float | None = None, pad: int = 4) -> SupportResult:
    """Numerical probe of the support theorem.

    Reconstructs from ``g`` and checks that ``|f|`` outside
    ``B(0, R + margin)`` stays below ``tol * ||f||_inf`` (the reconstruction's
    own maximum unless ``f_inf`` is given).  ``tail`` reports
    ``max |g(s, t)|`` over ``|t| > R``.
    """
    spec = g.spec
    if margin < 3 * spec.h - 1e-12:
        raise InvalidParameter("margin must be at least three grid cells")
    ts = g.offsets
    out_t = np.abs(ts) > R
    tail = float(np.abs(g.values[:, out_t]).max()) if np.any(out_t) else 0.0
    if not np.any(g.values):
        return SupportResult(True, None, 0.0, tail)
    rec = invert(g, pad=pad)
    ref = float(np.abs(rec.values).max()) if f_inf is None else float(f_inf)
    outside = spec.radius() > R + margin
    vals = np.where(outside, np.abs(rec.values), 0.0)
    i = np.unravel_index(np.argmax(vals), vals.shape)
    worst = float(vals[i])
    if worst <= tol * ref:
        return SupportResult(True, None, worst, tail)
    witness = tuple(float(c[i]) for c in spec.mesh())
    return SupportResult(False, witness, worst, tail)


def exponent_admissible(p: float, q: float, r: float, n: int) -> bool:
    """``1 <= p < n/(n-1)``, ``q <= p'`` and ``n - 1 + 1/r = n/p``."""
    if not all(x >= 1 for x in (p, q, r)):
        return False
    if n < 2 or not p < n / (n - 1):
        return False
    pp = math.inf if p == 1 else p / (p - 1)
    if q > pp:
        return False
    inv_r = 0.0 if math.isinf(r) else 1.0 / r
    return abs(inv_r - (n / p - n + 1)) < 1e-12


def mixed_norm(g: Sinogram, q: float, r: float) -> float:
    """``(int_S (int |g(s, t)|^r dt)^{q/r} ds)^{1/q}``, offsets inner."""
    MixedNorm(q, r)
    a = np.abs(g.values).reshape(len(g.dirs), -1)
    cell = g.ht ** (g.values.ndim - 1)
    if math.isinf(r):
        inner = a.max(axis=1)
    else:
        inner = (np.sum(a ** r, axis=1) * cell) ** (1 / r)
    if math.isinf(q):
        return float(inner.max())
    return float(np.dot(g.dirs.weights, inner ** q) ** (1 / q))


def probe_norms(shape: str, q: float, r: float, radii: Sequence[float],
                N: int = 256, L: float | None = None, n_dirs: int | None = None):
    """Mixed norms of the Radon transforms of dilated indicators in 2D.

    ``ball``: disk of radius R.  ``cylinder``: rectangle ``|x1| <= 1,
    |x2| <= R``.
    """
    from .phantoms import ball, cylinder

    radii = [float(x) for x in radii]
    if len(radii) < 4:
        raise InvalidParameter("scaling probe needs at least four radii")
    if shape == "ball":
        L = 0.5 if L is None else L
        n_dirs = 8 if n_dirs is None else n_dirs
        make = lambda spec, R: ball(spec, R)
    elif shape == "cylinder":
        L = 1.25 * max(radii) if L is None else L
        n_dirs = 180 if n_dirs is None else n_dirs
        make = lambda spec, R: cylinder(spec, 1.0, R)
    else:
        raise InvalidParameter(f"unknown shape {shape!r}")
    spec = GridSpec(2, N, L)
    if max(radii) >= L:
        raise InvalidParameter("radii must lie inside the box")
    dirs = DirectionSet.uniform(2, n_dirs)
    norms = []
    for R in radii:
        sino = radon_forward(make(spec, R), dirs, N)
        norms.append(mixed_norm(sino, q, r))
    return np.array(radii), np.array(norms)


def scaling_probe(shape: str, q: float, r: float, radii: Sequence[float], **kw) -> float:
    """Least-squares slope of ``log ||R chi_R||_{q,r}`` against ``log R``."""
    R, nrm = probe_norms(shape, q, r, radii, **kw)
    slope, _ = np.polyfit(np.log(R), np.log(nrm), 1)
    return float(slope)
