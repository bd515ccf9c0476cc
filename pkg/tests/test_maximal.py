import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonica.grid import GridSpec, SampledFunction, lp_norm
from harmonica.maximal import (BumpDictionary, CubeFamily, bmo_norm, disk_maximum_filter, grand_maximal,
                               maximal_function, sharp_function, vitali_subcover, weak_type_constant)
from harmonica.phantoms import mean_zero_bump


def brute_maximal(a):
    """Sup over every window of cells containing each index (1D or 2D)."""
    n = a.ndim
    N = a.shape[0]
    out = np.zeros_like(a, dtype=float)
    for k in range(1, N + 1):
        for lo in itertools.product(range(N - k + 1), repeat=n):
            sl = tuple(slice(l, l + k) for l in lo)
            out[sl] = np.maximum(out[sl], np.abs(a[sl]).mean())
    return out


def chi01(N=64, L=2.0):
    s = GridSpec(1, N, L)
    return SampledFunction.from_callable(s, lambda x: ((x >= 0) & (x < 1)).astype(float))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from([1, 2]))
def test_maximal_matches_brute_force(seed, n):
    s = GridSpec(n, 16 if n == 1 else 8, 1.0)
    f = SampledFunction(s, np.random.default_rng(seed).standard_normal(s.shape))
    assert np.allclose(maximal_function(f).values, brute_maximal(f.values), rtol=1e-12, atol=1e-14)


def test_maximal_constant_and_bounds():
    s = GridSpec(2, 8, 1.0)
    M = maximal_function(SampledFunction(s, np.full(s.shape, -2.5)))
    assert np.allclose(M.values, 2.5)
    f = SampledFunction(s, np.random.default_rng(0).random(s.shape))
    M = maximal_function(f)
    assert np.all(M.values >= np.abs(f.values) - 1e-15)
    assert M.values.max() <= np.abs(f.values).max() + 1e-15


def test_indicator_closed_form_and_weak_bound():
    f = chi01(128, 4.0)
    M = maximal_function(f)
    x, h = f.spec.axis, f.spec.h
    right, left = x >= 1, x < 0
    assert np.allclose(M.values[right], 1 / (x[right] + h), rtol=0, atol=1e-14)
    assert np.allclose(M.values[left], 1 / (1 - x[left]), rtol=0, atol=1e-14)
    assert weak_type_constant(f, M) <= 2.0


def test_subadditivity():
    rng = np.random.default_rng(3)
    s = GridSpec(2, 16, 1.0)
    f = SampledFunction(s, rng.standard_normal(s.shape))
    g = SampledFunction(s, rng.standard_normal(s.shape))
    assert np.all(maximal_function(f + g).values <= (maximal_function(f) + maximal_function(g)).values + 1e-12)


def test_strong_type_ratio_is_moderate():
    rng = np.random.default_rng(4)
    s = GridSpec(2, 32, 1.0)
    f = SampledFunction(s, np.abs(rng.standard_normal(s.shape)) * (rng.random(s.shape) < 0.2))
    M = maximal_function(f)
    for p in (1.5, 2.0, 4.0):
        assert lp_norm(M, p) / lp_norm(f, p) <= 2 * 100 * p / (p - 1)


def test_vitali_simple_cases():
    one = CubeFamily([[0.0, 0.0]], [1.0])
    assert len(vitali_subcover(one)) == 1
    two = CubeFamily([[0.0, 0.0], [3.0, 0.0]], [1.0, 1.0])
    assert len(vitali_subcover(two)) == 2
    assert len(vitali_subcover(CubeFamily(np.zeros((0, 2)), []))) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_vitali_random_family(seed):
    rng = np.random.default_rng(seed)
    K = int(rng.integers(1, 25))
    F = CubeFamily(rng.uniform(-1, 1, (K, 2)), rng.uniform(0.05, 0.6, K))
    S = vitali_subcover(F)
    ax = np.linspace(-1.5, 1.5, 121)
    pts = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    assert S.contains(pts, open_=True).sum(axis=0).max() <= 1
    union = F.contains(pts).any(axis=0)
    assert np.all(S.dilate(5.0).contains(pts).any(axis=0)[union])


def test_disk_filter_matches_footprint():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((20, 20))
    r = 3.7
    from scipy import ndimage
    k = int(np.floor(r))
    yy, xx = np.mgrid[-k:k + 1, -k:k + 1]
    ref = ndimage.maximum_filter(a, footprint=(xx ** 2 + yy ** 2 < r * r), mode="constant", cval=-np.inf)
    assert np.array_equal(disk_maximum_filter(a, r), ref)


def test_grand_maximal_basics():
    s = GridSpec(2, 32, 1.0)
    assert np.all(grand_maximal(SampledFunction.zeros(s)).values == 0)
    f = mean_zero_bump(s, 0.4)
    small = BumpDictionary(powers=(2,), scales=BumpDictionary.default(s).scales)
    big = BumpDictionary.default(s)
    assert np.all(grand_maximal(f, big).values >= grand_maximal(f, small).values - 1e-15)
    Mf = maximal_function(f)
    G = grand_maximal(f, big)
    bound = big.sup_norm * (2 * (1 + big.b) + 3) ** 2
    assert np.all(G.values <= bound * Mf.values + 1e-12)


def test_bmo_of_indicator_and_sharp():
    f = chi01()
    assert bmo_norm(f) == pytest.approx(0.5, abs=1e-12)
    assert sharp_function(f).values.max() == pytest.approx(0.5, abs=1e-12)
    s = GridSpec(1, 16, 1.0)
    assert bmo_norm(SampledFunction(s, np.full(16, 3.0))) == 0.0


def test_bmo_of_log_is_stable():
    vals = []
    for N in (128, 256):
        s = GridSpec(1, N, 1.0)
        x = np.abs(s.axis)
        vals.append(bmo_norm(SampledFunction(s, np.log(np.maximum(x, s.h)))))
    assert abs(vals[1] / vals[0] - 1) < 0.1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(-5, 5), st.floats(0.1, 4))
def test_bmo_invariances(seed, c, scale):
    s = GridSpec(1, 32, 1.0)
    f = SampledFunction(s, np.random.default_rng(seed).standard_normal(32))
    b = bmo_norm(f)
    assert bmo_norm(f.with_values(f.values + c)) == pytest.approx(b, rel=1e-12)
    assert bmo_norm(f * scale) == pytest.approx(scale * b, rel=1e-12)
    assert bmo_norm(f.with_values(np.clip(f.values, -0.5, 0.5))) <= 2 * b
    S = sharp_function(f)
    assert S.values.max() == pytest.approx(b, rel=1e-12)
    assert np.all(S.values <= 2 * maximal_function(f).values + 1e-12)
