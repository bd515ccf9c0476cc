"""Whitney ball families, dyadic Calderon-Zygmund cubes, atom validation and
the two-stage atomic decomposition driven by the grand maximal function.

Open sets are voxel sets on the grid; distances to the complement are
Euclidean distances to the nearest grid point outside the set.  The box is
the whole space here, so a set filling the box has empty complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage, sparse

from .errors import ComplementEmpty, InvalidParameter, NeedsWiderWindow
from .grid import GridSpec, SampledFunction
from .maximal import BumpDictionary, ball_volume, grand_maximal
from .symmetrize import VoxelSet

__all__ = [
    "WhitneyBall",
    "WhitneyFamily",
    "whitney",
    "whitney_checks",
    "comparability_holds",
    "intersection_bound",
    "DyadicCube",
    "cz_decompose",
    "AtomReport",
    "validate_atom",
    "AtomicDecomposition",
    "atomic_decompose",
    "h1_norm",
    "plateau",
]


def _check_constants(c, c1, c2):
    if not (c > 0 and c + 2 * c / c1 <= 1 + 1e-15 and 0 < c1 < c2 < 1):
        raise InvalidParameter(
            f"need c + 2c/c' <= 1 and c' < c'' < 1, got ({c}, {c1}, {c2})")


def intersection_bound(n: int, c: float, c2: float) -> int:
    """``floor(((c + c'')/c ((1 + c'')/(1 - c''))^2)^n)``."""
    return int(math.floor(((c + c2) / c * ((1 + c2) / (1 - c2)) ** 2) ** n))


@dataclass(frozen=True)
class WhitneyBall:
    center: tuple
    d: float


@dataclass(frozen=True, eq=False)
class WhitneyFamily:
    """Selected centres (grid indices and coordinates), their distances to
    the complement and the constants ``(c, c', c'')``."""

    spec: GridSpec
    index: np.ndarray
    centers: np.ndarray
    d: np.ndarray
    c: float = 0.2
    c1: float = 0.6
    c2: float = 0.8

    def __len__(self):
        return self.d.size

    @property
    def balls(self) -> list[WhitneyBall]:
        return [WhitneyBall(tuple(x), float(r)) for x, r in zip(self.centers, self.d)]


def _distance_to_complement(O: VoxelSet) -> np.ndarray:
    if O.mask.all():
        raise ComplementEmpty("complement empty: the set fills the whole box")
    return ndimage.distance_transform_edt(O.mask, sampling=O.spec.h)


def whitney(O: VoxelSet, c: float = 0.2, c1: float = 0.6, c2: float = 0.8) -> WhitneyFamily:
    """Greedy maximal family of points with pairwise disjoint balls
    ``B(x_j, c d_j)``, visiting grid points by decreasing ``d`` with ties in
    lexicographic index order."""
    _check_constants(c, c1, c2)
    spec = O.spec
    if O.count == 0:
        raise InvalidParameter("the open set is empty")
    dist = _distance_to_complement(O)
    flat = np.flatnonzero(O.mask.reshape(-1))
    dv = dist.reshape(-1)[flat]
    order = np.lexsort((flat, -dv))
    cand = flat[order]
    coords = np.stack([x.reshape(-1) for x in spec.mesh()], axis=1)
    sel_x = np.empty((cand.size, spec.n))
    sel_d = np.empty(cand.size)
    sel_i = []
    k = 0
    for p in cand:
        x = coords[p]
        dp = dist.reshape(-1)[p]
        if k:
            gap = np.sqrt(((sel_x[:k] - x) ** 2).sum(axis=1))
            if np.any(gap < c * (dp + sel_d[:k])):
                continue
        sel_x[k] = x
        sel_d[k] = dp
        sel_i.append(p)
        k += 1
    idx = np.array(np.unravel_index(np.array(sel_i), spec.shape)).T
    return WhitneyFamily(spec, idx, sel_x[:k].copy(), sel_d[:k].copy(), c, c1, c2)


def _ball_counts(spec: GridSpec, centers, radii) -> np.ndarray:
    """Number of open balls containing each grid point."""
    counts = np.zeros(spec.shape, dtype=np.int64)
    axis = spec.axis
    for x, r in zip(centers, radii):
        sl = []
        for a in range(spec.n):
            lo = np.searchsorted(axis, x[a] - r, side="left")
            hi = np.searchsorted(axis, x[a] + r, side="right")
            sl.append(slice(lo, hi))
        sub = np.meshgrid(*[axis[s] for s in sl], indexing="ij")
        inside = sum((g - xa) ** 2 for g, xa in zip(sub, x)) < r * r
        counts[tuple(sl)] += inside
    return counts


def comparability_holds(A: WhitneyFamily, B: WhitneyFamily) -> bool:
    """``d_k^B < (1+c'')/(1-c'') d_j^A`` whenever the ``c''`` balls meet;
    ``B`` is the family of the smaller set."""
    ratio = (1 + A.c2) / (1 - A.c2)
    if len(A) == 0 or len(B) == 0:
        return True
    gap = np.sqrt(((A.centers[:, None, :] - B.centers[None, :, :]) ** 2).sum(axis=2))
    meet = gap < A.c2 * (A.d[:, None] + B.d[None, :])
    bad = meet & ~(B.d[None, :] < ratio * A.d[:, None])
    return not bool(bad.any())


def whitney_checks(O: VoxelSet, W: WhitneyFamily) -> dict:
    """Rasterized W1-W4 on the grid points of ``O``."""
    inner = _ball_counts(O.spec, W.centers, W.c * W.d)
    cover = _ball_counts(O.spec, W.centers, W.c1 * W.d)
    overlap = _ball_counts(O.spec, W.centers, W.c2 * W.d)
    if len(W) > 1:
        gap = np.sqrt(((W.centers[:, None] - W.centers[None]) ** 2).sum(axis=2))
        np.fill_diagonal(gap, np.inf)
        pair_ok = bool(np.all(gap >= W.c * (W.d[:, None] + W.d[None, :]) - 1e-12))
    else:
        pair_ok = True
    bound = intersection_bound(O.spec.n, W.c, W.c2)
    max_overlap = int(overlap[O.mask].max(initial=0))
    return {
        "W1": bool(inner.max(initial=0) <= 1) and pair_ok,
        "W2": bool(np.all(cover[O.mask] >= 1)),
        "W3": comparability_holds(W, W),
        "W4": max_overlap <= bound,
        "max_overlap": max_overlap,
        "N": bound,
    }


@dataclass(frozen=True, order=True)
class DyadicCube:
    """``2^m ([0, 1)^n + v)``."""

    m: int
    v: tuple

    @property
    def side(self) -> float:
        return 2.0 ** self.m

    @property
    def corner(self) -> np.ndarray:
        return self.side * np.asarray(self.v, dtype=float)

    def contains_cube(self, other: "DyadicCube") -> bool:
        if other.m > self.m:
            return False
        k = 2 ** (self.m - other.m)
        return all(o // k == s for o, s in zip(other.v, self.v))

    def mask(self, spec: GridSpec) -> np.ndarray:
        lo = self.corner
        X = spec.mesh()
        m = np.ones(spec.shape, dtype=bool)
        for x, a in zip(X, lo):
            m &= (x >= a - 1e-12) & (x < a + self.side - 1e-12)
        return m


def _log2_exact(x: float) -> int:
    k = round(math.log2(x))
    if 2.0 ** k != x:
        raise InvalidParameter(f"grid step {x} is not a power of two")
    return k


def cz_decompose(f: SampledFunction, alpha: float, with_averages: bool = False):
    """Maximal dyadic cubes with ``avg_Q |f| > alpha``.

    The grid step must be a power of two so that dyadic cubes of side at
    least ``h`` are unions of cells.  Cubes may extend past the box, where
    ``f`` is zero.  Returns a list of ``DyadicCube`` (and their averages
    when ``with_averages``).
    """
    if not alpha > 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")
    spec = f.spec
    n, N = spec.n, spec.N
    m0 = _log2_exact(spec.h)
    a = np.abs(f.values)
    total = float(a.sum() * spec.cell_volume)
    out, avgs = [], []
    if total == 0:
        return (out, avgs) if with_averages else out
    # smallest m with ||f||_1 / 2^{mn} <= alpha: no cube at that size qualifies
    m_top = max(m0, math.ceil(math.log2(total / alpha) / n))
    while total / 2.0 ** (m_top * n) > alpha:
        m_top += 1
    while m_top > m0 and total / 2.0 ** ((m_top - 1) * n) <= alpha:
        m_top -= 1
    B = 2 ** (m_top - m0)
    o = N // 2
    left = (-o) % B
    # pad so the origin sits on a multiple of B and the length divides by B
    length = left + N
    right = (-length) % B
    pad = np.pad(a, [(left, right)] * n)
    base = -(o + left) // 1  # cell index (relative to origin) of padded index 0
    selected = np.zeros(pad.shape, dtype=bool)  # cells already inside a cube
    for m in range(m_top - 1, m0 - 1, -1):
        k = 2 ** (m - m0)
        shp = []
        for s in pad.shape:
            shp += [s // k, k]
        sums = pad.reshape(shp).sum(axis=tuple(range(1, 2 * n, 2)))
        taken = selected.reshape(shp).any(axis=tuple(range(1, 2 * n, 2)))
        avg = sums * spec.cell_volume / 2.0 ** (m * n)
        hit = (avg > alpha) & ~taken
        for blk in np.argwhere(hit):
            v = tuple(int((base + b * k) // k) for b in blk)
            out.append(DyadicCube(m, v))
            avgs.append(float(avg[tuple(blk)]))
            sl = tuple(slice(b * k, (b + 1) * k) for b in blk)
            selected[sl] = True
    return (out, avgs) if with_averages else out


@dataclass(frozen=True)
class AtomReport:
    valid: bool
    support: bool
    size: bool
    mean: bool
    norm: float
    bound: float
    mean_value: float

    def __bool__(self):
        return self.valid

    def failures(self) -> list[str]:
        return [k for k in ("support", "size", "mean") if not getattr(self, k)]


def validate_atom(a: SampledFunction, ball, q: float = math.inf,
                  mean_tol: float = 1e-10, size_tol: float = 1e-12) -> AtomReport:
    """Check ``supp a`` inside the closed ball, ``||a||_q <= |B|^{-1+1/q}``
    and ``sum a h^n = 0`` within ``mean_tol * ||a||_1``."""
    center, radius = ball
    spec = a.spec
    c = np.atleast_1d(np.asarray(center, dtype=float))
    r2 = sum((x - ci) ** 2 for x, ci in zip(spec.mesh(), c))
    nz = a.values != 0
    support = bool(np.all(r2[nz] <= radius * radius * (1 + 1e-12) + 1e-300))
    vol = ball_volume(spec.n) * radius ** spec.n
    av = np.abs(a.values)
    if math.isinf(q):
        norm = float(av.max(initial=0.0))
        bound = 1.0 / vol
    else:
        norm = float((np.sum(av ** q) * spec.cell_volume) ** (1 / q))
        bound = vol ** (-1 + 1 / q)
    size = norm <= bound * (1 + size_tol)
    l1 = float(av.sum() * spec.cell_volume)
    mv = float(np.sum(a.values) * spec.cell_volume)
    mean = abs(mv) <= mean_tol * l1 or l1 == 0
    return AtomReport(support and size and mean, support, size, mean, norm, bound, mv)


def plateau(r, c1: float, c2: float):
    """C^1 cut-off: 1 on ``r <= c1``, 0 on ``r >= c2``, smoothstep between."""
    s = np.clip((c2 - np.asarray(r, dtype=float)) / (c2 - c1), 0.0, 1.0)
    return s * s * (3 - 2 * s)


@dataclass
class _Level:
    m: int
    full: bool
    family: WhitneyFamily | None
    psi: sparse.csr_matrix  # rows: pieces, cols: grid points
    c: np.ndarray
    d: np.ndarray           # Whitney distances (degenerate level: box radius / c_s)
    centers: np.ndarray


@dataclass(eq=False)
class AtomicDecomposition:
    """``f = sum lambda_j a_j + residual`` with per-term metadata.

    Atom values are stored as sparse rows over the flattened grid and
    materialised on request.
    """

    spec: GridSpec
    lambdas: np.ndarray
    levels: np.ndarray
    centers: np.ndarray
    radii: np.ndarray
    atoms_sparse: sparse.csr_matrix
    residual: SampledFunction
    C_prime: float = 0.0
    mf_l1: float = 0.0
    overlap: dict = field(default_factory=dict)
    window: tuple = (0, 0)

    def __len__(self):
        return self.lambdas.size

    @property
    def coefficient_sum(self) -> float:
        return float(np.abs(self.lambdas).sum())

    @property
    def ratio(self) -> float:
        """``sum |lambda| / ||Mf||_1``."""
        return self.coefficient_sum / self.mf_l1 if self.mf_l1 else 0.0

    def atom(self, i: int) -> SampledFunction:
        row = self.atoms_sparse.getrow(i).toarray().reshape(self.spec.shape)
        return SampledFunction(self.spec, row)

    @property
    def terms(self):
        for i in range(len(self)):
            yield (float(self.lambdas[i]), self.atom(i), int(self.levels[i]))

    def reconstruct(self) -> SampledFunction:
        v = np.asarray(self.atoms_sparse.T @ self.lambdas).reshape(self.spec.shape)
        return SampledFunction(self.spec, v + self.residual.values)

    def manifest(self) -> str:
        lines = ["lambda,m,radius," + ",".join(f"x{i+1}" for i in range(self.spec.n))]
        for lam, m, r, c in zip(self.lambdas, self.levels, self.radii, self.centers):
            lines.append(f"{float(lam)!r},{int(m)},{float(r)!r}," + ",".join(repr(float(x)) for x in c))
        return "\n".join(lines) + "\n"


def _level(f_flat, mf, m, spec, coords, consts) -> _Level:
    c, c1, c2, cs = consts
    mask = mf > 2.0 ** m
    P = mf.size
    if not mask.any():
        return _Level(m, False, None, sparse.csr_matrix((0, P)), np.zeros(0),
                      np.zeros(0), np.zeros((0, spec.n)))
    if mask.all():
        psi = sparse.csr_matrix(np.ones((1, P)))
        cj = np.array([f_flat.mean()])
        R = spec.L * math.sqrt(spec.n)
        return _Level(m, True, None, psi, cj, np.array([R / cs]), np.zeros((1, spec.n)))
    O = VoxelSet(spec, mask.reshape(spec.shape))
    W = whitney(O, c, c1, c2)
    rows, cols, vals = [], [], []
    for j, (x, dj) in enumerate(zip(W.centers, W.d)):
        r = np.sqrt(((coords - x) ** 2).sum(axis=1)) / dj
        near = np.flatnonzero(r < c2)
        v = plateau(r[near], c1, c2)
        keep = v > 0
        rows.append(np.full(keep.sum(), j))
        cols.append(near[keep])
        vals.append(v[keep])
    tilde = sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                              shape=(len(W), P))
    Psi = np.asarray(tilde.sum(axis=0)).reshape(-1)
    inv = np.zeros(P)
    inv[mask] = 1.0 / Psi[mask]
    psi = (tilde @ sparse.diags(inv)).tocsr()
    cj = np.asarray(psi @ f_flat).reshape(-1) / np.asarray(psi.sum(axis=1)).reshape(-1)
    return _Level(m, False, W, psi, cj, W.d.copy(), W.centers.copy())


def atomic_decompose(f: SampledFunction, bumps: BumpDictionary | None = None,
                     window: tuple | None = None, c: float = 0.2, c1: float = 0.6,
                     c2: float = 0.8, residual_tol: float = 1e-6) -> AtomicDecomposition:
    """Atomic decomposition over the level sets ``O_m = {Mf > 2^m}``.

    For each level a Whitney family gives cut-offs ``psi_j`` (a partition of
    unity on ``O_m``) and weighted means ``c_j``; consecutive levels are
    joined through the means ``d_jk`` so that every piece

        b_j = (f - c_j) psi_j - sum_k ((f - c_k^+) psi_j - d_jk) psi_k^+

    has mean zero and is supported in ``B(x_j, c_s d_j)``,
    ``c_s = c''(1 + 2(1+c'')/(1-c''))``.  The default window runs from the
    largest ``m`` with ``O_m`` the whole box (one piece, ``psi = 1``) to the
    first empty level.  The residual is ``g`` at the bottom level, which is
    the mean of ``f`` there; it must be below ``residual_tol * ||f||_inf``.

    Coefficients are ``lambda_j = C' 2^m d_j^n`` with ``C'`` the smallest
    constant that makes every ``b_j / lambda_j`` a ``(1, inf)``-atom.
    """
    _check_constants(c, c1, c2)
    spec = f.spec
    n = spec.n
    cs = c2 * (1 + 2 * (1 + c2) / (1 - c2))
    consts = (c, c1, c2, cs)
    P = spec.N ** n
    empty = sparse.csr_matrix((0, P))
    if not np.any(f.values):
        return AtomicDecomposition(spec, np.zeros(0), np.zeros(0, int), np.zeros((0, n)),
                                   np.zeros(0), empty, SampledFunction.zeros(spec))
    if bumps is None:
        bumps = BumpDictionary.default(spec)
    Mf = grand_maximal(f, bumps)
    mf = Mf.values.reshape(-1)
    mf_l1 = float(mf.sum() * spec.cell_volume)
    if window is None:
        m_hi = math.floor(math.log2(mf.max())) + 1
        while mf.max() > 2.0 ** m_hi:
            m_hi += 1
        lo_val = mf.min()
        if lo_val <= 0:
            raise NeedsWiderWindow("grand maximal function vanishes somewhere in the box")
        m_lo = math.ceil(math.log2(lo_val)) - 1
        while not (mf > 2.0 ** m_lo).all():
            m_lo -= 1
    else:
        m_lo, m_hi = int(window[0]), int(window[1])
        if (mf > 2.0 ** m_hi).any():
            raise NeedsWiderWindow(f"level set at m_hi={m_hi} is not empty")
    coords = np.stack([x.reshape(-1) for x in spec.mesh()], axis=1)
    fv = f.values.reshape(-1).astype(float)

    levels = [_level(fv, mf, m, spec, coords, consts) for m in range(m_lo, m_hi + 1)]

    bot = levels[0]
    g_lo = fv * (1 - np.asarray(bot.psi.sum(axis=0)).reshape(-1)) + np.asarray(bot.psi.T @ bot.c).reshape(-1)
    fmax = float(np.abs(fv).max())
    if np.abs(g_lo).max() > residual_tol * fmax:
        raise NeedsWiderWindow(
            f"bottom residual {np.abs(g_lo).max():.3e} exceeds {residual_tol} * ||f||_inf")

    pieces, meta = [], []
    overlap = {}
    for lv, up in zip(levels[:-1], levels[1:]):
        if lv.psi.shape[0] == 0:
            continue
        # G = sum_k (f - c_k^+) psi_k^+
        if up.psi.shape[0]:
            G = np.asarray(up.psi.multiply(fv[None, :]).sum(axis=0)).reshape(-1) \
                - np.asarray(up.psi.T @ up.c).reshape(-1)
            s_up = np.asarray(up.psi.sum(axis=1)).reshape(-1)
            cross = lv.psi @ sparse.diags(fv) @ up.psi.T
            prod = lv.psi @ up.psi.T
            Dm = (cross - prod @ sparse.diags(up.c)) @ sparse.diags(1.0 / s_up)
            Dm = sparse.csr_matrix(Dm)
        else:
            G = np.zeros(P)
            Dm = sparse.csr_matrix((lv.psi.shape[0], 0))
        Bm = lv.psi.multiply((fv - G)[None, :]) - sparse.diags(lv.c) @ lv.psi
        if up.psi.shape[0]:
            Bm = Bm + Dm @ up.psi
        Bm = sparse.csr_matrix(Bm)
        Bm.eliminate_zeros()
        support_count = np.diff(sparse.csc_matrix(Bm).indptr)
        overlap[lv.m] = int(support_count.max(initial=0))
        for j in range(Bm.shape[0]):
            pieces.append(Bm.getrow(j))
            meta.append((lv.m, lv.d[j], lv.centers[j]))

    if not pieces:
        return AtomicDecomposition(spec, np.zeros(0), np.zeros(0, int), np.zeros((0, n)),
                                   np.zeros(0), empty, SampledFunction(spec, g_lo.reshape(spec.shape)),
                                   0.0, mf_l1, overlap, (m_lo, m_hi))
    Bmat = sparse.vstack(pieces).tocsr()
    ms = np.array([m for m, _, _ in meta])
    ds = np.array([d for _, d, _ in meta])
    cen = np.array([x for _, _, x in meta])
    sup = np.asarray(abs(Bmat).max(axis=1).todense()).reshape(-1)
    omega = ball_volume(n)
    C_prime = float(np.max(omega * cs ** n * sup / 2.0 ** ms))
    lam = C_prime * 2.0 ** ms * ds ** n
    atoms = sparse.diags(1.0 / lam) @ Bmat
    return AtomicDecomposition(spec, lam, ms, cen, cs * ds, sparse.csr_matrix(atoms),
                               SampledFunction(spec, g_lo.reshape(spec.shape)),
                               C_prime, mf_l1, overlap, (m_lo, m_hi))


def h1_norm(f: SampledFunction, bumps: BumpDictionary | None = None) -> float:
    """``||Mf||_1`` of the discrete grand maximal function."""
    Mf = grand_maximal(f, bumps)
    return float(np.abs(Mf.values).sum() * f.spec.cell_volume)
