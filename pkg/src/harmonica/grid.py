"""Uniform grids over boxes in R^n, quadrature, interpolation and the
continuum-scaled discrete Fourier transform.

Sample ``i`` along an axis sits at ``x_i = -L + i*h`` with ``h = 2L/N``; the
origin is sample ``N//2``.  Functions are taken to vanish outside the box.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import ndimage

from .errors import InvalidDirection, InvalidExponent, InvalidParameter

__all__ = [
    "GridSpec",
    "SampledFunction",
    "Spectrum",
    "dft",
    "idft",
    "line_integral",
    "plane_integral",
    "lp_norm",
    "interpolate",
    "worker_count",
]

UNIT_TOL = 1e-12


def worker_count() -> int:
    """Thread cap taken from ``HARMONICA_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("HARMONICA_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(func, items):
    items = list(items)
    nw = min(worker_count(), len(items))
    if nw <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=nw) as ex:
        return list(ex.map(func, items))


@dataclass(frozen=True)
class GridSpec:
    """Isotropic grid on the box ``[-L, L)^n`` with ``N`` samples per axis."""

    n: int
    N: int
    L: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise InvalidParameter(f"dimension must be 1, 2 or 3, got {self.n}")
        if self.N < 2 or self.N % 2:
            raise InvalidParameter(f"N must be even and >= 2, got {self.N}")
        if not self.L > 0:
            raise InvalidParameter(f"L must be positive, got {self.L}")
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def cell_volume(self) -> float:
        return self.h ** self.n

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.n

    @property
    def origin_index(self) -> int:
        return self.N // 2

    @property
    def axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)

    def mesh(self) -> list[np.ndarray]:
        """Coordinate arrays, one per axis, each of shape ``self.shape``."""
        return np.meshgrid(*([self.axis] * self.n), indexing="ij")

    def radius(self) -> np.ndarray:
        return np.sqrt(sum(x * x for x in self.mesh()))

    @property
    def freq_axis(self) -> np.ndarray:
        """Dual lattice ``(pi/L) * {-N/2, ..., N/2-1}``."""
        return (np.pi / self.L) * np.arange(-self.N // 2, self.N // 2)

    def freq_mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.freq_axis] * self.n), indexing="ij")

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.n, self.N * factor, self.L)

    def padded(self, factor: int) -> "GridSpec":
        """Same step, extent multiplied by ``factor``."""
        return GridSpec(self.n, self.N * factor, self.L * factor)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function on the grid of ``spec`` (axis order ``ij``)."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.dtype.kind not in "fc":
            v = v.astype(float)
        if v.size != self.spec.N ** self.spec.n:
            raise InvalidParameter(
                f"expected {self.spec.N ** self.spec.n} values, got {v.size}")
        v = np.array(v.reshape(self.spec.shape), copy=True)
        if not np.all(np.isfinite(v)):
            raise InvalidParameter("sampled values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, spec: GridSpec, func: Callable) -> "SampledFunction":
        """Sample ``func(*coords)`` where each coord is an array over the grid."""
        return cls(spec, func(*spec.mesh()))

    @classmethod
    def zeros(cls, spec: GridSpec) -> "SampledFunction":
        return cls(spec, np.zeros(spec.shape))

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.spec, values)

    def integral(self) -> float:
        return float(np.sum(self.values) * self.spec.cell_volume)

    def __add__(self, other):
        if isinstance(other, SampledFunction):
            _check_same(self, other)
            return self.with_values(self.values + other.values)
        return self.with_values(self.values + other)

    def __sub__(self, other):
        if isinstance(other, SampledFunction):
            _check_same(self, other)
            return self.with_values(self.values - other.values)
        return self.with_values(self.values - other)

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)


def _check_same(a: SampledFunction, b: SampledFunction) -> None:
    if a.spec != b.spec:
        raise InvalidParameter("functions live on different grids")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients on the dual lattice, centered frequency order."""

    spec: GridSpec
    coeffs: np.ndarray

    @property
    def dual_cell_volume(self) -> float:
        return (np.pi / self.spec.L) ** self.spec.n


def _phase(spec: GridSpec) -> np.ndarray:
    # exp(i*xi*L) with xi = k*pi/L gives (-1)^k per axis
    k = np.arange(-spec.N // 2, spec.N // 2)
    s = np.where(k % 2 == 0, 1.0, -1.0)
    out = s
    for _ in range(spec.n - 1):
        out = np.multiply.outer(out, s)
    return out


def dft(f: SampledFunction) -> Spectrum:
    """Riemann-sum Fourier transform ``F(xi) = sum f(x) exp(-i<xi,x>) h^n``."""
    spec = f.spec
    raw = np.fft.fftshift(np.fft.fftn(f.values))
    return Spectrum(spec, raw * _phase(spec) * spec.cell_volume)


def idft(F: Spectrum, real: bool | None = None) -> SampledFunction:
    """Inverse of :func:`dft`.  ``real=None`` drops the imaginary part when
    it is at round-off level."""
    spec = F.spec
    raw = F.coeffs / (_phase(spec) * spec.cell_volume)
    vals = np.fft.ifftn(np.fft.ifftshift(raw))
    if real is None:
        real = np.max(np.abs(vals.imag), initial=0.0) <= 1e-9 * max(
            np.max(np.abs(vals.real), initial=0.0), 1e-300)
    return SampledFunction(spec, vals.real if real else vals)


def interpolate(f: SampledFunction, points: np.ndarray) -> np.ndarray:
    """Multilinear interpolation at ``points`` (shape ``(n, ...)``); zero
    outside the sampled region, decaying linearly over the last cell."""
    spec = f.spec
    idx = (np.asarray(points, dtype=float) + spec.L) / spec.h
    flat = idx.reshape(spec.n, -1)
    vals = ndimage.map_coordinates(f.values, flat, order=1,
                                   mode="grid-constant", cval=0.0)
    return vals.reshape(idx.shape[1:])


def _unit(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != n:
        raise InvalidDirection(f"direction must have {n} components")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise InvalidDirection(f"direction {v} is not a unit vector")
    return v


def _trapezoid_nodes(span: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    m = int(np.floor(2 * span / h + 1e-9))
    s = -span + h * np.arange(m + 1)
    w = np.full(s.shape, h)
    w[0] = w[-1] = h / 2
    return s, w


def line_integral(f: SampledFunction, direction: Sequence[float],
                  offset_point: Sequence[float], span: float | None = None) -> float:
    """Trapezoid rule along ``offset_point + s*direction``, ``|s| <= span``."""
    spec = f.spec
    sigma = _unit(direction, spec.n)
    p = np.asarray(offset_point, dtype=float).reshape(spec.n)
    if span is None:
        span = spec.L * np.sqrt(spec.n)
    s, w = _trapezoid_nodes(span, spec.h)
    pts = p[:, None] + sigma[:, None] * s[None, :]
    return float(np.dot(interpolate(f, pts), w))


def orthonormal_complement(normal: np.ndarray) -> np.ndarray:
    """Rows spanning the orthogonal complement of a unit vector."""
    n = normal.size
    # Householder-free: QR of [normal | I]
    q, _ = np.linalg.qr(np.column_stack([normal, np.eye(n)]))
    return q[:, 1:n].T


def plane_integral(f: SampledFunction, normal: Sequence[float], t: float,
                   span: float | None = None) -> float:
    """2D trapezoid rule over the plane ``<normal, x> = t`` (3D grids)."""
    spec = f.spec
    if spec.n != 3:
        raise InvalidParameter("plane_integral needs a 3D grid")
    nu = _unit(normal, 3)
    if span is None:
        span = spec.L * np.sqrt(3)
    u, v = orthonormal_complement(nu)
    s, w = _trapezoid_nodes(span, spec.h)
    a, b = np.meshgrid(s, s, indexing="ij")
    pts = (t * nu[:, None, None] + u[:, None, None] * a[None]
           + v[:, None, None] * b[None])
    return float(np.sum(interpolate(f, pts) * np.outer(w, w)))


def lp_norm(f: SampledFunction, p: float) -> float:
    """Discrete ``L^p`` norm with cell volume weights."""
    if not p >= 1:
        raise InvalidExponent(f"p must be >= 1, got {p}")
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max(initial=0.0))
    return float((np.sum(a ** p) * f.spec.cell_volume) ** (1.0 / p))
