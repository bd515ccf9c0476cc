"""Steiner symmetrization of voxel sets, Minkowski sums of cell unions and
the Brascamp-Lieb-Luttinger rearrangement inequality.

Directions are primitive integer vectors.  The lattice points on a line
parallel to ``d`` are exactly ``p + j*d`` for integer ``j``, so symmetrizing
along ``d`` permutes whole grid points and never resamples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence

import numpy as np
from scipy import signal

from .errors import InvalidDirection, InvalidKernel, InvalidParameter, NeedsLargerBox
from .grid import GridSpec

__all__ = [
    "VoxelSet",
    "Step1D",
    "steiner",
    "symmetrize_to_ball",
    "default_schedule",
    "ball_of_equal_measure",
    "minkowski_sum",
    "brunn_minkowski_holds",
    "bll_check",
    "exact_interval_bll",
]


@dataclass(frozen=True, eq=False)
class VoxelSet:
    """Union of the grid cells flagged in ``mask``."""

    spec: GridSpec
    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask)
        if m.size != self.spec.N ** self.spec.n:
            raise InvalidParameter("mask size does not match the grid")
        m = np.array(m.reshape(self.spec.shape), dtype=bool, copy=True)
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @property
    def count(self) -> int:
        return int(self.mask.sum())

    @property
    def measure(self) -> float:
        return self.count * self.spec.cell_volume

    def __eq__(self, other):
        return (isinstance(other, VoxelSet) and self.spec == other.spec
                and np.array_equal(self.mask, other.mask))

    __hash__ = None


def _lattice_direction(direction, n: int) -> np.ndarray:
    v = np.asarray(direction, dtype=float).reshape(-1)
    if v.size != n or not np.any(v):
        raise InvalidDirection(f"need a nonzero {n}-vector, got {direction}")
    nz = np.abs(v[v != 0]).min()
    u = v / nz
    for k in range(1, 13):
        w = k * u
        r = np.round(w)
        if np.all(np.abs(w - r) < 1e-9) and np.abs(r).max() <= 12:
            d = r.astype(np.int64)
            g = reduce(math.gcd, (abs(int(x)) for x in d))
            return d // g
    raise InvalidDirection(f"direction {direction} is not a small rational direction")


def _line_geometry(spec: GridSpec, d: np.ndarray):
    """Line id, position ``j`` along the line, per grid point."""
    n, N = spec.n, spec.N
    idx = np.indices(spec.shape).reshape(n, -1).astype(np.int64) - N // 2
    D = int(d @ d)
    P = d @ idx
    r = np.mod(P, D)
    j = (P - r) // D
    # base point p - j*d is the same for every point on one line
    base = idx - np.outer(d, j)
    span = 2 * N * (np.abs(d).max() + 1) + 1
    key = np.zeros(idx.shape[1], dtype=np.int64)
    for a in range(n):
        key = key * (2 * span + 1) + (base[a] + span)
    return key, j, r, D


def steiner(S: VoxelSet, direction) -> VoxelSet:
    """Steiner symmetrization along a lattice direction.

    Each line parallel to ``direction`` keeps its cell count ``c``; the
    cells become the run of ``c`` consecutive lattice points closest to the
    foot of the perpendicular from the origin, ties going to the
    nonnegative side, and shifted back inside the box if needed.
    """
    spec = S.spec
    d = _lattice_direction(direction, spec.n)
    key, j, r, D = _line_geometry(spec, d)
    uniq, inv = np.unique(key, return_inverse=True)
    flat = S.mask.reshape(-1)
    c = np.bincount(inv, weights=flat, minlength=uniq.size).astype(np.int64)
    jmin = np.full(uniq.size, np.iinfo(np.int64).max)
    jmax = np.full(uniq.size, np.iinfo(np.int64).min)
    np.minimum.at(jmin, inv, j)
    np.maximum.at(jmax, inv, j)
    rl = np.zeros(uniq.size, dtype=np.int64)
    rl[inv] = r
    # run start: round(-(c-1)/2 - r/D) with halves rounded up
    s = np.floor_divide(D * (2 - c) - 2 * rl, 2 * D)
    s = np.minimum(np.maximum(s, jmin), jmax - c + 1)
    si, ci = s[inv], c[inv]
    out = (j >= si) & (j < si + ci)
    return VoxelSet(spec, out.reshape(spec.shape))


def ball_of_equal_measure(spec: GridSpec, count: int) -> VoxelSet:
    """The ``count`` grid points nearest the origin (ties by index)."""
    r2 = sum(x * x for x in np.indices(spec.shape) - spec.N // 2).reshape(-1)
    order = np.argsort(r2, kind="stable")
    m = np.zeros(r2.size, dtype=bool)
    m[order[:count]] = True
    return VoxelSet(spec, m.reshape(spec.shape))


def default_schedule(n: int, steps: int = 20) -> list[tuple]:
    """Axes and diagonals, then the (1, 2)-type directions, cycled."""
    if n == 1:
        base = [(1,)]
    elif n == 2:
        base = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, -1), (2, 1), (1, -2)]
    else:
        base = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, -1, 0), (0, 1, 1),
                (0, 1, -1), (1, 0, 1), (-1, 0, 1), (1, 1, 1), (1, -1, 1), (1, 1, -1),
                (-1, 1, 1)]
    return [base[i % len(base)] for i in range(steps)]


def symmetrize_to_ball(S: VoxelSet, schedule: Sequence | None = None):
    """Apply ``steiner`` along ``schedule``; return the final set and the
    symmetric-difference measure to the ball of equal measure after each
    step."""
    if schedule is None:
        schedule = default_schedule(S.spec.n)
    if S.count == 0:
        return S, []
    ball = ball_of_equal_measure(S.spec, S.count)
    hist = []
    cur = S
    for u in schedule:
        cur = steiner(cur, u)
        hist.append(int(np.sum(cur.mask ^ ball.mask)) * S.spec.cell_volume)
    return cur, hist


def minkowski_sum(A: VoxelSet, B: VoxelSet, spec_out: GridSpec | None = None) -> VoxelSet:
    """Exact Minkowski sum of two cell unions.

    Cells ``[x_i, x_i + h)`` and ``[x_j, x_j + h)`` sum to the side-``2h``
    cube at ``x_i + x_j``, which is cells ``i+j`` and ``i+j+1`` per axis of
    the output grid (same step, extent ``2L``).
    """
    if A.spec != B.spec:
        raise InvalidParameter("sets live on different grids")
    spec = A.spec
    if spec_out is None:
        spec_out = GridSpec(spec.n, 2 * spec.N, 2 * spec.L)
    if not math.isclose(spec_out.h, spec.h) or spec_out.L < 2 * spec.L - 1e-12:
        raise NeedsLargerBox("output grid must keep the step and cover twice the extent")
    if A.count == 0 or B.count == 0:
        return VoxelSet(spec_out, np.zeros(spec_out.shape, dtype=bool))
    s = signal.fftconvolve(A.mask.astype(float), B.mask.astype(float)) > 0.5
    s = np.pad(s, [(0, 1)] * spec.n)
    grown = s.copy()
    for ax in range(spec.n):
        grown |= np.roll(grown, 1, axis=ax)
    # index sum i+j lives at x = -2L + (i+j) h on the output grid
    shift = int(round((spec_out.L - 2 * spec.L) / spec.h))
    out = np.zeros(spec_out.shape, dtype=bool)
    sl = tuple(slice(shift, shift + grown.shape[0]) for _ in range(spec.n))
    if shift + grown.shape[0] > spec_out.N:
        raise NeedsLargerBox("Minkowski sum does not fit the output grid")
    out[sl] = grown
    return VoxelSet(spec_out, out)


def brunn_minkowski_holds(cA: int, cB: int, cC: int, n: int) -> bool:
    """Exact integer test of ``cC^{1/n} >= cA^{1/n} + cB^{1/n}``."""
    cA, cB, cC = int(cA), int(cB), int(cC)
    X = cC - cA - cB
    if X < 0:
        return False
    if cA == 0 or cB == 0 or n == 1:
        return True
    ab = cA * cB
    if n == 2:
        return X * X >= 4 * ab
    if n == 3:
        # W = (ab)^{1/3}(a^{1/3}+b^{1/3}) solves W^3 - 3abW - ab(a+b) = 0,
        # increasing past its only positive critical point; need W <= X/3
        return X ** 3 - 27 * ab * X - 27 * ab * (cA + cB) >= 0
    raise InvalidParameter("dimension must be 1, 2 or 3")


@dataclass(frozen=True, eq=False)
class Step1D:
    """Nonnegative step function on R: ``values[k]`` on ``[breaks[k], breaks[k+1])``."""

    breaks: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breaks, dtype=float).reshape(-1)
        c = np.asarray(self.values, dtype=float).reshape(-1)
        if b.size != c.size + 1 or np.any(np.diff(b) <= 0) or np.any(c < 0):
            raise InvalidParameter("need increasing breaks and nonnegative values")
        object.__setattr__(self, "breaks", b)
        object.__setattr__(self, "values", c)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.searchsorted(self.breaks, x, side="right") - 1
        vals = np.r_[self.values, 0.0]
        k = np.where((k < 0) | (k >= self.values.size), self.values.size, k)
        return vals[k]

    def symmetric_decreasing(self) -> "Step1D":
        """``f**``: value ``v_k`` on ``|x| < M_k/2``, ``M`` the cumulative
        measure of the sorted steps."""
        w = np.diff(self.breaks)
        keep = self.values > 0
        v, w = self.values[keep], w[keep]
        if v.size == 0:
            return Step1D([0.0, 1.0], [0.0])
        uv = np.unique(v)[::-1]
        m = np.array([w[v == x].sum() for x in uv])
        half = np.cumsum(m) / 2
        br = np.r_[-half[::-1], half]
        vals = np.r_[uv[::-1], uv[1:]]
        return Step1D(br, vals)


def _midpoint_grid(m: int, extent: float, cells: int):
    hq = 2 * extent / cells
    ax = -extent + hq * (np.arange(cells) + 0.5)
    z = np.stack(np.meshgrid(*([ax] * m), indexing="ij")).reshape(m, -1)
    return z, hq ** m


def bll_check(f_list: Sequence[Step1D], l_list, K: Callable, extent: float,
              rel_tol: float = 1e-3, start_cells: int = 64, max_cells: int = 1 << 14,
              max_points: int = 1 << 22):
    """Both sides of ``int prod f_j(l_j z) K(z) dz <= int prod f_j**(l_j z) K(z) dz``.

    ``l_list`` holds one row vector per ``f_j`` (the map ``z -> <l_j, z>``),
    ``K`` is the indicator of a balanced convex set inside ``[-extent, extent]^m``
    evaluated on arrays of shape ``(m, npts)``.  The midpoint rule is refined
    by doubling until both sides change by less than ``rel_tol``, or until
    ``max_cells`` per axis or ``max_points`` in total is reached.
    """
    Lm = np.atleast_2d(np.asarray(l_list, dtype=float))
    if len(f_list) != Lm.shape[0]:
        raise InvalidParameter("one linear map per function is required")
    m = Lm.shape[1]
    if m > 3:
        raise InvalidParameter("at most three integration variables")
    fss = [f.symmetric_decreasing() for f in f_list]

    def evaluate(cells):
        z, dv = _midpoint_grid(m, extent, cells)
        k = np.asarray(K(z), dtype=bool)
        if not np.array_equal(k, np.asarray(K(-z), dtype=bool)):
            raise InvalidKernel("kernel is not balanced: K(z) != K(-z)")
        lin = Lm @ z[:, k]
        lhs = np.prod([f(lin[i]) for i, f in enumerate(f_list)], axis=0).sum() * dv
        rhs = np.prod([f(lin[i]) for i, f in enumerate(fss)], axis=0).sum() * dv
        return float(lhs), float(rhs)

    max_cells = min(max_cells, int(round(max_points ** (1.0 / m))))
    cells = min(start_cells, max_cells)
    prev = evaluate(cells)
    while True:
        cells *= 2
        cur = evaluate(cells)
        done = all(abs(c - p) <= rel_tol * max(abs(c), 1e-300) or c == p
                   for c, p in zip(cur, prev))
        if done or 2 * cells > max_cells:
            return cur
        prev = cur


def exact_interval_bll(I1, I2, kernel_half: float = 1.0) -> tuple[Fraction, Fraction]:
    """Closed form for two indicators of intervals, ``l_j = id``, ``m = 1``,
    ``K = chi_[-k, k]``: overlap lengths in exact rational arithmetic."""
    a = max(Fraction(I1[0]), Fraction(I2[0]), Fraction(-kernel_half))
    b = min(Fraction(I1[1]), Fraction(I2[1]), Fraction(kernel_half))
    lhs = max(b - a, Fraction(0))
    w = min(Fraction(I1[1]) - Fraction(I1[0]), Fraction(I2[1]) - Fraction(I2[0]),
            2 * Fraction(kernel_half))
    return lhs, w
