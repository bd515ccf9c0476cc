import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonica.errors import InvalidDirection, InvalidExponent, InvalidParameter
from harmonica.grid import (GridSpec, SampledFunction, dft, idft, interpolate, line_integral,
                            lp_norm, parallel_map, plane_integral, worker_count)


def gauss(spec):
    return SampledFunction.from_callable(spec, lambda *x: np.exp(-sum(xi * xi for xi in x)))


def test_spec_geometry():
    s = GridSpec(2, 8, 1.0)
    assert s.h == 0.25
    assert s.cell_volume == 0.0625
    assert s.axis[s.origin_index] == 0.0
    assert s.axis[0] == -1.0
    assert s.shape == (8, 8)


@pytest.mark.parametrize("args", [(4, 8, 1.0), (2, 7, 1.0), (2, 8, 0.0), (2, 0, 1.0)])
def test_spec_rejects_bad_parameters(args):
    with pytest.raises(InvalidParameter):
        GridSpec(*args)


def test_sampled_function_is_read_only_and_finite():
    s = GridSpec(1, 8, 1.0)
    f = SampledFunction(s, np.arange(8.0))
    with pytest.raises(ValueError):
        f.values[0] = 1
    with pytest.raises(InvalidParameter):
        SampledFunction(s, np.full(8, np.nan))
    with pytest.raises(InvalidParameter):
        SampledFunction(s, np.zeros(7))


def test_gaussian_integral_and_transform():
    s = GridSpec(2, 64, 6.0)
    f = gauss(s)
    assert abs(f.integral() - math.pi) < 1e-12
    F = dft(f)
    # transform of exp(-|x|^2) is pi exp(-|xi|^2/4)
    xi2 = sum(k * k for k in s.freq_mesh())
    assert np.max(np.abs(F.coeffs - math.pi * np.exp(-xi2 / 4))) < 1e-12


def test_parseval():
    rng = np.random.default_rng(1)
    s = GridSpec(2, 32, 1.0)
    f = SampledFunction(s, rng.standard_normal(s.shape))
    F = dft(f)
    lhs = np.sum(np.abs(f.values) ** 2) * s.cell_volume
    rhs = np.sum(np.abs(F.coeffs) ** 2) * F.dual_cell_volume / (2 * math.pi) ** 2
    assert abs(lhs - rhs) < 1e-10 * lhs


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.sampled_from([4, 8, 16]), st.integers(0, 2 ** 31))
def test_dft_roundtrip(n, N, seed):
    s = GridSpec(n, N, 1.5)
    f = SampledFunction(s, np.random.default_rng(seed).standard_normal(s.shape))
    g = idft(dft(f))
    assert np.max(np.abs(g.values - f.values)) < 1e-12


def test_interpolation_hits_samples_and_is_linear():
    s = GridSpec(2, 16, 1.0)
    f = SampledFunction.from_callable(s, lambda x, y: 2 * x - y + 0.5)
    pts = np.stack(s.mesh())
    assert np.allclose(interpolate(f, pts), f.values)
    q = np.array([[0.1, -0.33], [0.2, 0.4]]).T
    assert np.allclose(interpolate(f, q), 2 * q[0] - q[1] + 0.5)


def test_line_integral_of_gaussian():
    s = GridSpec(2, 128, 5.0)
    v = line_integral(gauss(s), (0.6, 0.8), (0.8, -0.6))
    # distance 1 from the origin: sqrt(pi) exp(-1)
    assert abs(v - math.sqrt(math.pi) * math.exp(-1)) < 1e-3


def test_plane_integral_of_gaussian():
    s = GridSpec(3, 64, 4.0)
    v = plane_integral(gauss(s), (0.0, 0.0, 1.0), 0.5)
    assert abs(v / (math.pi * math.exp(-0.25)) - 1) < 0.01


def test_direction_must_be_unit():
    s = GridSpec(2, 8, 1.0)
    with pytest.raises(InvalidDirection):
        line_integral(gauss(s), (1.0, 1.0), (0.0, 0.0))


def test_lp_norm():
    s = GridSpec(1, 8, 1.0)
    f = SampledFunction(s, np.r_[np.ones(4), np.zeros(4)])
    assert lp_norm(f, 1) == 1.0
    assert lp_norm(f, 2) == 1.0
    assert lp_norm(f, math.inf) == 1.0
    with pytest.raises(InvalidExponent):
        lp_norm(f, 0.5)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("HARMONICA_THREADS", "3")
    assert worker_count() == 3
    assert parallel_map(lambda x: x * x, range(5)) == [0, 1, 4, 9, 16]
    monkeypatch.setenv("HARMONICA_THREADS", "junk")
    assert worker_count() == 1
