"""Built-in test functions.

Indicators are anti-aliased: each sample is the fraction of the cell
centred on it that lies inside the set, estimated by supersampling.  This
keeps line integrals of the multilinear interpolant within a fraction of a
percent of the exact chord lengths.
"""

from __future__ import annotations

import itertools

import numpy as np

from .grid import GridSpec, SampledFunction

__all__ = ["ball", "cylinder", "gaussian", "bump", "two_bumps", "bandlimited",
           "mean_zero_bump", "by_name", "NAMES"]


def _coverage(spec: GridSpec, inside, ss: int = 4) -> np.ndarray:
    X = spec.mesh()
    off = (np.arange(ss) + 0.5) / ss - 0.5
    acc = np.zeros(spec.shape)
    for o in itertools.product(off, repeat=spec.n):
        acc += inside(*[x + spec.h * d for x, d in zip(X, o)])
    return acc / ss ** spec.n


def ball(spec: GridSpec, R: float, center=None, ss: int = 4) -> SampledFunction:
    c = np.zeros(spec.n) if center is None else np.asarray(center, dtype=float)
    if R <= 0:
        return SampledFunction.zeros(spec)
    return SampledFunction(spec, _coverage(
        spec, lambda *x: sum((xi - ci) ** 2 for xi, ci in zip(x, c)) < R * R, ss))


def cylinder(spec: GridSpec, half_length: float, R: float, ss: int = 4) -> SampledFunction:
    """``|x1| <= half_length`` and ``x2^2 + ... + xn^2 <= R^2``."""
    def inside(*x):
        rest = sum(xi * xi for xi in x[1:])
        return (np.abs(x[0]) <= half_length) & (rest <= R * R)
    return SampledFunction(spec, _coverage(spec, inside, ss))


def gaussian(spec: GridSpec, width: float = 1.0, center=None) -> SampledFunction:
    """``exp(-|x - c|^2 / width^2)``."""
    c = np.zeros(spec.n) if center is None else np.asarray(center, dtype=float)
    return SampledFunction.from_callable(
        spec, lambda *x: np.exp(-sum((xi - ci) ** 2 for xi, ci in zip(x, c)) / width ** 2))


def bump(spec: GridSpec, R: float, center=None, power: int = 4) -> SampledFunction:
    """``(1 - |x - c|^2 / R^2)_+^power``, C^{power-1} with compact support."""
    c = np.zeros(spec.n) if center is None else np.asarray(center, dtype=float)

    def fn(*x):
        r2 = sum((xi - ci) ** 2 for xi, ci in zip(x, c)) / R ** 2
        return np.clip(1 - r2, 0, None) ** power
    return SampledFunction.from_callable(spec, fn)


def two_bumps(spec: GridSpec, R: float = 0.4) -> SampledFunction:
    """Two smooth bumps centred at distance ``R/2`` from the origin, each of
    radius ``R/2`` so both lie inside ``B(0, R)``."""
    c = np.zeros(spec.n)
    c[0] = R / 2
    return bump(spec, R / 2 * 0.95, c) + bump(spec, R / 2 * 0.95, -c)


def mean_zero_bump(spec: GridSpec, R: float, center=None) -> SampledFunction:
    """Smooth odd bump ``x_1 (1 - |x|^2/R^2)_+^4``, scaled to unit sup; its
    mean is zero up to round-off on grids symmetric about ``c``."""
    c = np.zeros(spec.n) if center is None else np.asarray(center, dtype=float)
    X = spec.mesh()
    r2 = sum((xi - ci) ** 2 for xi, ci in zip(X, c)) / R ** 2
    v = (X[0] - c[0]) / R * np.clip(1 - r2, 0, None) ** 4
    return SampledFunction(spec, v / np.abs(v).max())


def bandlimited(spec: GridSpec, rng: np.random.Generator, kmax: int = 6,
                width: float | None = None) -> SampledFunction:
    """Random low-frequency trigonometric field under a Gaussian window that
    vanishes to round-off at the box boundary."""
    if width is None:
        width = spec.L / 8
    X = spec.mesh()
    v = np.zeros(spec.shape)
    for _ in range(12):
        k = rng.integers(-kmax, kmax + 1, size=spec.n) * np.pi / spec.L
        ph = rng.uniform(0, 2 * np.pi)
        v += rng.standard_normal() * np.cos(sum(ki * xi for ki, xi in zip(k, X)) + ph)
    win = np.exp(-sum(x * x for x in X) / (2 * width ** 2))
    return SampledFunction(spec, v * win)


NAMES = ("ball", "gauss", "twobump", "cylinder", "bump", "zero")


def by_name(name: str, spec: GridSpec, radius: float | None = None) -> SampledFunction:
    """Phantom lookup used by the command line."""
    L = spec.L
    if name == "ball":
        return ball(spec, 0.5 * L if radius is None else radius)
    if name == "gauss":
        w = 0.17 * L if radius is None else radius
        return gaussian(spec, w)
    if name == "twobump":
        return two_bumps(spec, 0.4 * L if radius is None else radius)
    if name == "cylinder":
        return cylinder(spec, 0.25 * L, 0.6 * L if radius is None else radius)
    if name == "bump":
        return mean_zero_bump(spec, 0.5 * L if radius is None else radius)
    if name == "zero":
        return SampledFunction.zeros(spec)
    raise KeyError(name)
