import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import ndimage

from harmonica.errors import ComplementEmpty, InvalidParameter, NeedsWiderWindow
from harmonica.grid import GridSpec, SampledFunction
from harmonica.hardy import (DyadicCube, atomic_decompose, comparability_holds, cz_decompose, h1_norm,
                             intersection_bound, plateau, validate_atom, whitney, whitney_checks)
from harmonica.phantoms import bump, mean_zero_bump
from harmonica.symmetrize import VoxelSet


def test_intersection_bound_closed_form():
    assert intersection_bound(1, 0.2, 0.8) == 405
    assert intersection_bound(2, 0.2, 0.8) == 405 ** 2


def test_whitney_single_cell_and_interval():
    s = GridSpec(1, 32, 2.0)
    m = np.zeros(32, bool)
    m[10] = True
    W = whitney(VoxelSet(s, m))
    assert len(W) == 1
    O = VoxelSet(s, (s.axis > 0) & (s.axis < 1))
    chk = whitney_checks(O, whitney(O, 0.2, 0.6, 0.8))
    assert chk["W1"] and chk["W2"] and chk["W3"] and chk["W4"]


def test_whitney_errors():
    s = GridSpec(2, 8, 1.0)
    with pytest.raises(ComplementEmpty):
        whitney(VoxelSet(s, np.ones(s.shape, bool)))
    half = VoxelSet(s, np.arange(64).reshape(8, 8) < 32)
    with pytest.raises(InvalidParameter):
        whitney(half, 0.5, 0.6, 0.8)
    with pytest.raises(InvalidParameter):
        whitney(half, 0.2, 0.9, 0.8)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_whitney_random_sets(seed):
    rng = np.random.default_rng(seed)
    s = GridSpec(2, 24, 1.0)
    noise = ndimage.gaussian_filter(rng.standard_normal(s.shape), 2.0)
    m = noise > 0
    if not 0 < m.sum() < m.size:
        return
    O = VoxelSet(s, m)
    W = whitney(O)
    chk = whitney_checks(O, W)
    assert all(chk[k] for k in ("W1", "W2", "W3", "W4"))
    assert np.all(O.mask[tuple(W.index.T)])
    assert np.all(W.d > 0)


def test_comparability_across_nested_sets():
    s = GridSpec(2, 32, 1.0)
    r = s.radius()
    A = whitney(VoxelSet(s, r < 0.8))
    B = whitney(VoxelSet(s, r < 0.5))
    assert comparability_holds(A, B)


def test_plateau_profile():
    r = np.linspace(0, 1, 101)
    v = plateau(r, 0.6, 0.8)
    assert np.all(v[r <= 0.6] == 1)
    assert np.all(v[r >= 0.8] == 0)
    assert np.all(np.diff(v) <= 0)


def test_cz_hand_trace():
    s = GridSpec(1, 32, 2.0)
    f = SampledFunction.from_callable(s, lambda x: ((x >= 0) & (x < 1)).astype(float))
    cubes, avgs = cz_decompose(f, 0.5, with_averages=True)
    assert cubes == [DyadicCube(0, (0,))]
    assert avgs == [1.0]
    assert cz_decompose(f, 1.5) == []


def test_cz_requires_dyadic_step_and_positive_alpha():
    f = SampledFunction.zeros(GridSpec(1, 6, 1.0))
    with pytest.raises(InvalidParameter):
        cz_decompose(SampledFunction(f.spec, np.ones(6)), 0.5)
    with pytest.raises(InvalidParameter):
        cz_decompose(f, 0.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from([1, 2]))
def test_cz_random(seed, n):
    rng = np.random.default_rng(seed)
    s = GridSpec(n, 64 if n == 1 else 16, 1.0)
    f = SampledFunction(s, rng.standard_normal(s.shape) * (rng.random(s.shape) < 0.3))
    fmax = np.abs(f.values).max()
    prev = None
    for frac in (0.2, 0.5, 0.8):
        alpha = frac * fmax if fmax else 1.0
        cubes, avgs = cz_decompose(f, alpha, with_averages=True)
        cover = np.zeros(s.shape, int)
        for q in cubes:
            cover += q.mask(s)
        assert cover.max(initial=0) <= 1
        assert np.all(np.abs(f.values[cover == 0]) <= alpha)
        assert all(alpha < a <= 2 ** n * alpha * (1 + 1e-12) for a in avgs)
        l1 = np.abs(f.values).sum() * s.cell_volume
        assert sum(q.side ** n for q in cubes) <= l1 / alpha * (1 + 1e-12)
        if prev is not None:
            assert all(any(p.contains_cube(q) for p in prev) for q in cubes)
        prev = cubes


def test_validate_atom_examples():
    s = GridSpec(1, 64, 2.0)
    x = s.axis
    a = SampledFunction(s, np.where((x >= 0) & (x < 0.5), 1.0, 0.0) - np.where((x >= 0.5) & (x < 1), 1.0, 0.0))
    assert validate_atom(a, (0.5, 0.5), math.inf).valid
    one = SampledFunction(s, ((x >= 0) & (x <= 1)).astype(float))
    rep = validate_atom(one, (0.5, 0.5), math.inf)
    assert not rep.valid and rep.failures() == ["mean"]
    rep = validate_atom(a * 3.0, (0.5, 0.5), math.inf)
    assert rep.failures() == ["size"]
    rep = validate_atom(a, (0.0, 0.5), math.inf)
    assert "support" in rep.failures()
    assert validate_atom(a, (0.5, 0.5), 2.0).valid


def test_atomic_decomposition_1d():
    ratios = []
    for N in (256, 512):
        s = GridSpec(1, N, 4.0)
        f = mean_zero_bump(s, 1.0)
        A = atomic_decompose(f)
        assert np.max(np.abs(A.reconstruct().values - f.values)) < 1e-12
        for i in range(len(A)):
            atom = A.atom(i)
            assert validate_atom(atom, (A.centers[i], A.radii[i])).valid
            assert abs(atom.values.sum()) * s.h <= 1e-8 * np.abs(atom.values).sum() * s.h
        assert max(A.overlap.values()) <= intersection_bound(1, 0.2, 0.8)
        ratios.append(A.ratio)
    assert abs(ratios[1] / ratios[0] - 1) < 0.1
    assert "lambda,m,radius,x1" in A.manifest()


def test_atomic_decomposition_2d():
    s = GridSpec(2, 32, 4.0)
    f = mean_zero_bump(s, 1.5)
    A = atomic_decompose(f)
    assert np.max(np.abs(A.reconstruct().values - f.values)) < 1e-12
    assert all(validate_atom(A.atom(i), (A.centers[i], A.radii[i])).valid for i in range(len(A)))


def test_atomic_zero_and_nonzero_mean():
    s = GridSpec(1, 64, 2.0)
    A = atomic_decompose(SampledFunction.zeros(s))
    assert len(A) == 0 and A.coefficient_sum == 0.0
    with pytest.raises(NeedsWiderWindow):
        atomic_decompose(bump(s, 0.5))


def test_atom_family_coefficients_bounded():
    # (1, inf)-atoms of several radii: sum |lambda| and ||Ma||_1 stay bounded
    s = GridSpec(1, 512, 4.0)
    sums, norms = [], []
    for R in (0.1, 0.2, 0.4, 0.8):
        a = mean_zero_bump(s, R)
        a = a * (1 / (2 * R * np.abs(a.values).max()))
        A = atomic_decompose(a)
        sums.append(A.coefficient_sum)
        norms.append(h1_norm(a))
    assert max(sums) / min(sums) < 2.0
    assert max(norms) / min(norms) < 2.0


def test_h1_norm_grows_for_nonzero_mean():
    vals = []
    for L in (1.0, 2.0, 4.0, 8.0):
        s = GridSpec(1, int(64 * L), L)
        vals.append(h1_norm(bump(s, 0.5)))
    assert h1_norm(SampledFunction.zeros(GridSpec(1, 16, 1.0))) == 0.0
    d = np.diff(vals)
    # roughly constant increments per doubling of L: logarithmic growth
    assert np.all(d > 0)
    assert d.max() / d.min() < 2.0
