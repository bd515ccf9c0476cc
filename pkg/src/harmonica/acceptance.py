"""The acceptance suite: each criterion returns rows of
``(criterion, value, bound, passed)``.

Randomised rows draw from ``numpy.random.default_rng([seed, criterion])`` so
a given seed reproduces every row bit for bit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
from scipy import ndimage

from . import phantoms
from .grid import GridSpec, SampledFunction, lp_norm
from .hardy import (atomic_decompose, cz_decompose, intersection_bound, validate_atom, whitney,
                    whitney_checks)
from .maximal import (CubeFamily, bmo_norm, maximal_function, sharp_function, vitali_subcover,
                      weak_type_constant)
from .radon import (DirectionSet, inversion_constant, invert_unscaled, projection_slice_check,
                    radon_forward, riesz_potential, scaling_probe, xray_forward)
from .rearrange import (StepFunction, decreasing_rearrangement, fundamental_decomposition, hardy_inequality_check,
                        j_functional, k_functional, lorentz_norm, lorentz_quasinorm, weak_norm_pair)
from .symmetrize import (Step1D, VoxelSet, bll_check, brunn_minkowski_holds, exact_interval_bll,
                         minkowski_sum, steiner, symmetrize_to_ball)

__all__ = ["Row", "CRITERIA", "GROUPS", "run", "to_csv"]


@dataclass(frozen=True)
class Row:
    criterion: str
    value: float
    bound: float
    passed: bool

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.criterion}: value={self.value:.6g} bound={self.bound:.6g}"


def _rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng([seed, k])


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def _indicator(spec: GridSpec, lo: float, hi: float) -> SampledFunction:
    return SampledFunction.from_callable(spec, lambda x: ((x >= lo) & (x < hi)).astype(float))


def _sparse_random(spec, rng, density=0.3):
    v = rng.standard_normal(spec.shape) * (rng.random(spec.shape) < density)
    return SampledFunction(spec, v)


# 1-5, 18: tomography --------------------------------------------------------

def c01_radon_disk(seed):
    t = time.perf_counter()
    spec = GridSpec(2, 256, 1.0)
    R = 0.5
    g = radon_forward(phantoms.ball(spec, R), DirectionSet.uniform(2, 32), 256)
    ts = g.offsets
    sel = np.abs(ts) <= 0.9 * R
    exact = 2 * np.sqrt(R * R - ts[sel] ** 2)
    err = float(np.max(np.abs(g.values[:, sel] - exact) / exact))
    dt = float(math.ceil(time.perf_counter() - t))  # whole seconds keep the CSV reproducible
    return [Row("1 disk Radon max relative error", err, 0.01, err < 0.01),
            Row("1 disk Radon runtime [s]", dt, 5.0, dt < 5.0)]


def c02_inversion(seed):
    t = time.perf_counter()
    spec = GridSpec(2, 128, 1.0)
    f = phantoms.by_name("gauss", spec)
    g = radon_forward(f, DirectionSet.uniform(2, 180), 256)
    U = invert_unscaled(g)
    rec = U * inversion_constant(2)
    err = float(np.linalg.norm(rec.values - f.values) / np.linalg.norm(f.values))
    c_fit = float(np.vdot(U.values, f.values) / np.vdot(U.values, U.values))
    dev = abs(c_fit / inversion_constant(2) - 1)
    dt = float(math.ceil(time.perf_counter() - t))  # whole seconds keep the CSV reproducible
    return [Row("2 inversion relative L2 error", err, 0.05, err < 0.05),
            Row("2 fitted constant relative deviation", dev, 0.02, dev < 0.02),
            Row("2 inversion runtime [s]", dt, 10.0, dt < 10.0)]


def c03_projection_slice(seed):
    rng = _rng(seed, 3)
    dirs = DirectionSet.uniform(2, 16)
    r1 = projection_slice_check(phantoms.gaussian(GridSpec(2, 128, 4.0), 1.0), dirs)
    r2 = projection_slice_check(phantoms.bandlimited(GridSpec(2, 128, 4.0), rng), dirs)
    return [Row("3 projection-slice residual (Gaussian)", r1, 2e-2, r1 < 2e-2),
            Row("3 projection-slice residual (band-limited)", r2, 2e-2, r2 < 2e-2)]


def c04_scaling(seed):
    rows = []
    radii = [0.1, 0.15, 0.22, 0.33]
    for r in (1.0, 2.0, math.inf):
        target = 1 + (0.0 if math.isinf(r) else 1 / r)
        s = scaling_probe("ball", 2.0, r, radii)
        dev = abs(s / target - 1)
        rows.append(Row(f"4 ball slope r={r:g} (target {target:g}) relative deviation", dev, 0.03, dev < 0.03))
    for q in (2.0, math.inf):
        target = 1 - (0.0 if math.isinf(q) else 1 / q)
        s = scaling_probe("cylinder", q, 2.0, [2.0, 3.0, 4.5, 6.75])
        rows.append(Row(f"4 cylinder slope q={q:g} (lower bound)", s, target - 0.03, s >= target - 0.03))
    return rows


def c05_riesz(seed):
    spec = GridSpec(2, 128, 8.0)
    f = SampledFunction.from_callable(spec, lambda x, y: x * np.exp(-(x * x + y * y) / 2))
    a, b = 0.7, 0.5
    lhs = riesz_potential(riesz_potential(f, a), b)
    rhs = riesz_potential(f, a + b)
    semi = float(np.linalg.norm(lhs.values - rhs.values) / np.linalg.norm(f.values))
    lap = riesz_potential(f, -2)
    h = spec.h
    v = f.values
    fd = -(np.roll(v, 1, 0) + np.roll(v, -1, 0) + np.roll(v, 1, 1) + np.roll(v, -1, 1) - 4 * v) / h ** 2
    lerr = float(np.linalg.norm(lap.values - fd) / np.linalg.norm(fd))
    return [Row("5 Riesz semigroup relative error", semi, 1e-10, semi < 1e-10),
            Row("5 I^-2 versus finite-difference Laplacian", lerr, 1e-2, lerr < 1e-2)]


def c18_xray_mass(seed):
    spec = GridSpec(3, 48, 1.0)
    f = phantoms.ball(spec, 0.5, ss=3)
    g = xray_forward(f, DirectionSet.uniform(3, 6), 84)
    mass = g.values.reshape(len(g.dirs), -1).sum(axis=1) * g.ht ** 2
    total = f.integral()
    err = float(np.max(np.abs(mass - total)) / abs(total))
    return [Row("18 X-ray per-direction mass relative error", err, 1e-3, err < 1e-3)]


# 6-10: rearrangement and interpolation ------------------------------------

def _random_profile_function(rng, n_cells=64):
    spec = GridSpec(1, n_cells, 2.0)
    v = rng.exponential(size=spec.shape) * (rng.random(spec.shape) < 0.6)
    v[rng.integers(n_cells)] += 0.5
    v *= np.where(rng.random(spec.shape) < 0.5, -1, 1)
    return SampledFunction(spec, v)


def c06_k_functional(seed):
    rng = _rng(seed, 6)
    spec = GridSpec(1, 64, 2.0)
    chi = _indicator(spec, 0.0, 1.0)
    ts = np.geomspace(1e-3, 1e3, 50)
    err = max(abs(k_functional(chi, t) - min(t, 1.0)) for t in ts)
    worst = 0.0
    for _ in range(20):
        f = _random_profile_function(rng)
        a = np.abs(f.values)
        levels = np.r_[0.0, np.unique(a)]
        h = spec.h
        for t in rng.uniform(0.01, 5.0, 5):
            brute = min(np.maximum(a - lv, 0).sum() * h + t * lv for lv in levels)
            worst = max(worst, abs(k_functional(f, t) - brute) / max(brute, 1e-300))
    return [Row("6 K(chi_[0,1], t) = min(t, 1) max error", err, 1e-12, err <= 1e-12),
            Row("6 K versus brute-force truncation minimum", worst, 1e-10, worst <= 1e-10)]


def c07_lorentz(seed):
    rng = _rng(seed, 7)
    spec = GridSpec(2, 32, 1.0)
    e1 = 0.0
    for _ in range(10):
        m = rng.random(spec.shape) < rng.uniform(0.05, 0.9)
        m[0, 0] = True
        chi = SampledFunction(spec, m.astype(float))
        p = rng.uniform(1.0, 6.0)
        E = m.sum() * spec.cell_volume
        e1 = max(e1, abs(lorentz_quasinorm(chi, (p, 1.0)) / E ** (1 / p) - 1))
    e2 = 0.0
    for p in (1.0, 1.5, 2.0, 3.0, 7.5):
        f = _sparse_random(spec, rng)
        e2 = max(e2, abs(lorentz_quasinorm(f, (p, p)) / lp_norm(f, p) - 1))
    slack = 1e-12
    worst = -math.inf
    for _ in range(50):
        f = _sparse_random(GridSpec(1, 64, 1.0), rng, 0.5)
        p = rng.uniform(1.1, 6.0)
        q = math.inf if rng.random() < 0.2 else float(rng.choice([1.0, rng.uniform(1.0, 8.0)]))
        theta = 1 - 1 / p
        low = 1.0 if math.isinf(q) else (q / p) ** (-1 / q)
        up = low / theta
        ratio = lorentz_norm(f, (p, q)) / lorentz_quasinorm(f, (p, q))
        # signed distance outside [low, up], relative
        worst = max(worst, (low - ratio) / low, (ratio - up) / up)
    return [Row("7 ||chi_E||*_{p,1} = |E|^{1/p} relative error", e1, 1e-12, e1 <= 1e-12),
            Row("7 L^{p,p} quasinorm versus L^p relative error", e2, 1e-12, e2 <= 1e-12),
            Row("7 norm/quasinorm ratio: worst excursion outside constant interval", worst, slack, worst <= slack)]


def c08_weak_norm(seed):
    rng = _rng(seed, 8)
    worst = 0.0
    for _ in range(100):
        f = _random_profile_function(rng)
        p = float(rng.choice([1.0, rng.uniform(1.0, 8.0), math.inf]))
        a, b = weak_norm_pair(f, p)
        worst = max(worst, abs(a - b) / max(abs(a), 1e-300))
    return [Row("8 weak-norm formulas relative disagreement", worst, 1e-12, worst <= 1e-12)]


def c09_fundamental(seed):
    rng = _rng(seed, 9)
    eps = 0.01
    worst_ratio, worst_rec = 0.0, 0.0
    for _ in range(20):
        f = _random_profile_function(rng)
        pieces = fundamental_decomposition(f, eps)
        fs = decreasing_rearrangement(f)
        for v, fv in pieces:
            worst_ratio = max(worst_ratio, j_functional(fv, 2.0 ** v) / k_functional(fs, 2.0 ** v))
        total = sum(fv.values for _, fv in pieces)
        worst_rec = max(worst_rec, _rel(total, f.values))
    bound = 3 * (1 + eps)
    return [Row("9 max J(f_v, 2^v) / K(f, 2^v)", worst_ratio, bound, worst_ratio <= bound),
            Row("9 reconstruction relative error (round-off)", worst_rec, 1e-12, worst_rec <= 1e-12)]


def c10_hardy_inequality(seed):
    rng = _rng(seed, 10)
    violations = 0
    worst = 0.0
    for _ in range(200):
        k = int(rng.integers(1, 6))
        br = np.sort(rng.uniform(0.01, 10.0, k + 1))
        while np.any(np.diff(br) <= 0):
            br = np.sort(rng.uniform(0.01, 10.0, k + 1))
        vals = rng.exponential(size=k) * (rng.random(k) < 0.9)
        prof = StepFunction(br, vals)
        for lam in (0.25, 1.0, 2.0):
            for q in (1.0, 2.0, 3.5):
                for form in ("outer", "inner"):
                    lhs, rhs = hardy_inequality_check(prof, lam, q, form)
                    if rhs > 0:
                        worst = max(worst, lhs / (rhs / lam))
                    if lhs > rhs / lam * (1 + 1e-12):
                        violations += 1
    return [Row("10 Hardy inequality violations", violations, 0, violations == 0),
            Row("10 Hardy worst lhs/(rhs/lambda)", worst, 1.0, worst <= 1 + 1e-12)]


# 11, 12, 16: maximal functions and BMO -------------------------------------

def c11_maximal(seed):
    rng = _rng(seed, 11)
    spec = GridSpec(1, 128, 4.0)
    chi = _indicator(spec, 0.0, 1.0)
    Mf = maximal_function(chi)
    x, h = spec.axis, spec.h
    # cell [x, x+h) must meet the interval, so the right tail is 1/(x+h)
    closed = np.ones_like(x)
    closed[x >= 1] = 1 / (x[x >= 1] + h)
    closed[x < 0] = 1 / (1 - x[x < 0])
    err = float(np.max(np.abs(Mf.values - closed)))
    w1 = weak_type_constant(chi, Mf)
    Cn = 10.0 ** 2
    C_strong = 2 * Cn
    wmax, smax = 0.0, 0.0
    spec2 = GridSpec(2, 32, 1.0)
    for _ in range(100):
        f = SampledFunction(spec2, np.abs(_sparse_random(spec2, rng, 0.2).values))
        M = maximal_function(f)
        wmax = max(wmax, weak_type_constant(f, M))
        for p in (1.5, 2.0, 4.0):
            pp = p / (p - 1)
            smax = max(smax, lp_norm(M, p) / lp_norm(f, p) / pp)
    return [Row("11 1D indicator maximal function versus closed form", err, 1e-10, err <= 1e-10),
            Row("11 weak-(1,1) constant, 1D indicator", w1, 2.0, w1 <= 2.0),
            Row("11 weak-(1,1) constant, random 2D", wmax, Cn, wmax <= Cn),
            Row("11 max ||Mf||_p / (p' ||f||_p), random 2D", smax, C_strong, smax <= C_strong)]


def c12_vitali(seed):
    rng = _rng(seed, 12)
    ax = np.linspace(-1.5, 1.5, 151)
    pts = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    bad = 0
    for _ in range(100):
        K = int(rng.integers(1, 40))
        F = CubeFamily(rng.uniform(-1, 1, (K, 2)), rng.uniform(0.05, 0.6, K))
        S = vitali_subcover(F)
        inside = S.contains(pts, open_=True).sum(axis=0)
        union = F.contains(pts).any(axis=0)
        covered = S.dilate(5.0).contains(pts).any(axis=0)
        if inside.max(initial=0) > 1 or np.any(union & ~covered):
            bad += 1
    return [Row("12 Vitali families failing disjointness or 5x cover", bad, 0, bad == 0)]


def c16_bmo(seed):
    rng = _rng(seed, 16)
    spec = GridSpec(1, 64, 2.0)
    chi = _indicator(spec, 0.0, 1.0)
    a = chi.values
    brute = 0.0
    for i in range(a.size):
        for j in range(i + 2, a.size + 1):
            seg = a[i:j]
            brute = max(brute, float(np.abs(seg - seg.mean()).mean()))
    b = bmo_norm(chi)
    rows = [Row("16 bmo(chi_[0,1]) deviation from 1/2", abs(b - 0.5), 1e-3, abs(b - 0.5) <= 1e-3),
            Row("16 bmo(chi_[0,1]) versus interval brute force", abs(b - brute), 1e-12, abs(b - brute) <= 1e-12)]
    inv, contr, sharp = 0.0, -math.inf, 0.0
    for i in range(50):
        sp = GridSpec(1 + i % 2, 48 if i % 2 == 0 else 16, 1.0)
        f = _sparse_random(sp, rng, 0.5)
        base = bmo_norm(f)
        c = float(rng.uniform(-3, 3))
        s = float(rng.uniform(0.2, 5.0)) * (1 if rng.random() < 0.5 else -1)
        inv = max(inv, abs(bmo_norm(f.with_values(f.values + c)) - base) / base,
                  abs(bmo_norm(f * s) - abs(s) * base) / (abs(s) * base))
        cap = float(rng.uniform(0.1, 1.0))
        clipped = f.with_values(np.clip(f.values, -cap, cap))
        contr = max(contr, bmo_norm(clipped) / base - 2.0)
        sharp = max(sharp, abs(float(sharp_function(f).values.max()) - base) / base)
    rows += [Row("16 constant-shift and scaling invariance (round-off)", inv, 1e-12, inv <= 1e-12),
             Row("16 contraction: max bmo(P f)/bmo(f) - 2", contr, 0.0, contr <= 0.0),
             Row("16 max f# versus bmo_norm (round-off)", sharp, 1e-12, sharp <= 1e-12)]
    return rows


# 13-15: Whitney, Calderon-Zygmund, atoms -----------------------------------

def _random_open_set(rng):
    n = 1 + int(rng.integers(0, 2))
    N = 64 if n == 1 else 32
    spec = GridSpec(n, N, 1.0)
    while True:
        noise = ndimage.gaussian_filter(rng.standard_normal(spec.shape), rng.uniform(1.0, 3.0))
        m = noise > rng.uniform(-0.3, 0.3) * noise.std()
        if 0 < m.sum() < m.size:
            return VoxelSet(spec, m)


def c13_whitney(seed):
    rng = _rng(seed, 13)
    bad, worst = 0, 0
    for _ in range(100):
        O = _random_open_set(rng)
        chk = whitney_checks(O, whitney(O))
        worst = max(worst, chk["max_overlap"])
        if not all(chk[k] for k in ("W1", "W2", "W3", "W4")):
            bad += 1
    return [Row("13 random open sets failing W1-W4", bad, 0, bad == 0),
            Row("13 max overlap of c''-balls (2D bound)", worst, intersection_bound(2, 0.2, 0.8),
                worst <= intersection_bound(2, 0.2, 0.8))]


def c14_cz(seed):
    rng = _rng(seed, 14)
    spec = GridSpec(1, 32, 2.0)
    cubes, avgs = cz_decompose(_indicator(spec, 0.0, 1.0), 0.5, with_averages=True)
    hand = len(cubes) == 1 and cubes[0].m == 0 and cubes[0].v == (0,) and avgs[0] == 1.0
    bad = 0
    for _ in range(50):
        n = 1 + int(rng.integers(0, 2))
        sp = GridSpec(n, 64 if n == 1 else 32, 1.0)
        f = _sparse_random(sp, rng, 0.3)
        fmax = float(np.abs(f.values).max())
        prev = None
        for frac in np.arange(1, 9) / 10:
            alpha = frac * fmax
            cs, av = cz_decompose(f, alpha, with_averages=True)
            cover = np.zeros(sp.shape, dtype=bool)
            for q in cs:
                cover |= q.mask(sp)
            ok = all(alpha < a <= 2 ** n * alpha * (1 + 1e-12) for a in av)
            ok &= bool(np.all(np.abs(f.values[~cover]) <= alpha))
            if prev is not None:
                ok &= all(any(p.contains_cube(q) for p in prev) for q in cs)
            bad += not ok
            prev = cs
    return [Row("14 hand trace chi_[0,1), alpha=1/2 gives the single cube [0,1)", float(hand), 1.0, hand),
            Row("14 (f, alpha) cases failing bounds, pointwise or nesting", bad, 0, bad == 0)]


def c15_atomic(seed):
    ratios, rows = [], []
    worst_rec, invalid, over, bound = 0.0, 0, 0, intersection_bound(1, 0.2, 0.8)
    for N in (256, 512):
        spec = GridSpec(1, N, 4.0)
        f = phantoms.mean_zero_bump(spec, 1.0)
        A = atomic_decompose(f)
        worst_rec = max(worst_rec, _rel(A.reconstruct().values, f.values))
        invalid += sum(not validate_atom(A.atom(i), (A.centers[i], A.radii[i])).valid for i in range(len(A)))
        over = max(over, max(A.overlap.values()))
        ratios.append(A.ratio)
    drift = abs(ratios[1] / ratios[0] - 1)
    return [Row("15 atomic reconstruction relative error (round-off)", worst_rec, 1e-12, worst_rec <= 1e-12),
            Row("15 emitted atoms failing validation", invalid, 0, invalid == 0),
            Row("15 sum|lambda|/||Mf||_1 drift under grid doubling", drift, 0.10, drift <= 0.10),
            Row("15 per-level support overlap", over, bound, over <= bound)]


# 17: symmetrization ---------------------------------------------------------

def c17_symmetrization(seed):
    rng = _rng(seed, 17)
    bad = 0
    for i in range(200):
        n = 2 if i % 4 else 3
        sp = GridSpec(n, 24 if n == 2 else 10, 1.0)
        S = VoxelSet(sp, rng.random(sp.shape) < rng.uniform(0.05, 0.6))
        d = tuple(int(x) for x in rng.integers(-2, 3, n))
        if not any(d):
            d = (1,) + (0,) * (n - 1)
        bad += steiner(S, d).count != S.count
    sp = GridSpec(2, 64, 1.0)
    sq = np.zeros(sp.shape, dtype=bool)
    sq[16:48, 16:48] = True
    S = VoxelSet(sp, sq)
    _, hist = symmetrize_to_ball(S)
    rel = hist[-1] / S.measure
    bm_bad = 0
    for _ in range(200):
        n = 2 if rng.random() < 0.7 else 3
        sp = GridSpec(n, 12 if n == 2 else 6, 1.0)
        A = VoxelSet(sp, rng.random(sp.shape) < rng.uniform(0.05, 0.5))
        B = VoxelSet(sp, rng.random(sp.shape) < rng.uniform(0.05, 0.5))
        if A.count == 0 or B.count == 0:
            continue
        C = minkowski_sum(A, B)
        bm_bad += not brunn_minkowski_holds(A.count, B.count, C.count, n)
    bll_bad, bll_err = 0, 0.0
    ends = [Fraction(k, 4) - 2 for k in range(17)]
    intervals = [(a, b) for a, b in combinations_with_replacement(ends, 2) if a < b]
    K = lambda z: np.abs(z[0]) <= 1.0
    for I1 in intervals:
        f1 = Step1D([float(I1[0]), float(I1[1])], [1.0])
        for I2 in intervals:
            f2 = Step1D([float(I2[0]), float(I2[1])], [1.0])
            lhs, rhs = bll_check([f1, f2], [[1.0], [1.0]], K, 2.0)
            el, er = exact_interval_bll(I1, I2)
            bll_err = max(bll_err, abs(lhs - float(el)), abs(rhs - float(er)))
            bll_bad += not (el <= er and lhs <= rhs * (1 + 1e-12))
    return [Row("17 Steiner count changes on random masks", bad, 0, bad == 0),
            Row("17 square-to-ball relative symmetric difference after 20 steps", rel, 0.05, rel < 0.05),
            Row("17 Brunn-Minkowski violations (exact integers)", bm_bad, 0, bm_bad == 0),
            Row(f"17 BLL violations over {len(intervals) ** 2} interval pairs", bll_bad, 0, bll_bad == 0),
            Row("17 BLL quadrature versus exact oracle", bll_err, 1e-12, bll_err <= 1e-12)]


CRITERIA = {
    1: c01_radon_disk, 2: c02_inversion, 3: c03_projection_slice, 4: c04_scaling,
    5: c05_riesz, 6: c06_k_functional, 7: c07_lorentz, 8: c08_weak_norm,
    9: c09_fundamental, 10: c10_hardy_inequality, 11: c11_maximal, 12: c12_vitali,
    13: c13_whitney, 14: c14_cz, 15: c15_atomic, 16: c16_bmo,
    17: c17_symmetrization, 18: c18_xray_mass,
}

GROUPS = {
    "radon": (1, 2, 3, 4, 5, 18),
    "rearrange": (6, 7, 8, 9, 10),
    "maximal": (11, 12, 16),
    "hardy": (13, 14, 15),
    "symmetrize": (17,),
}


def select(only=None) -> list[int]:
    """Criterion numbers for a group name, a number or a comma list of either."""
    if not only:
        return sorted(CRITERIA)
    out = []
    for tok in str(only).split(","):
        tok = tok.strip()
        if tok in GROUPS:
            out += GROUPS[tok]
        elif tok.isdigit() and int(tok) in CRITERIA:
            out.append(int(tok))
        else:
            raise KeyError(f"unknown criterion or group {tok!r}")
    return sorted(set(out))


def run(only=None, seed: int = 0, echo=None) -> list[Row]:
    rows = []
    for k in select(only):
        for r in CRITERIA[k](seed):
            rows.append(r)
            if echo is not None:
                echo(r.line())
    return rows


def to_csv(rows) -> str:
    out = ["criterion,value,bound,pass"]
    for r in rows:
        out.append(f'"{r.criterion}",{float(r.value)!r},{float(r.bound)!r},{int(r.passed)}')
    return "\n".join(out) + "\n"
