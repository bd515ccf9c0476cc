"""Text formats for grids, masks and sinograms, PGM export and atomic writes.

Every writer goes through a temporary file in the target directory that is
renamed on success, so a failed run leaves no partial output.
"""

from __future__ import annotations

import os
import tempfile
from contextlib import contextmanager

import numpy as np

from .errors import HarmonicaError
from .grid import GridSpec, SampledFunction
from .radon import DirectionSet, Sinogram
from .symmetrize import VoxelSet

__all__ = [
    "FormatError",
    "atomic_write",
    "write_text",
    "grid_to_text",
    "grid_from_text",
    "read_grid",
    "write_grid",
    "read_mask",
    "write_mask",
    "read_sinogram",
    "write_sinogram",
    "write_pgm",
    "cubes_to_csv",
]


class FormatError(HarmonicaError):
    """Malformed input file."""


@contextmanager
def atomic_write(path: str, mode: str = "w"):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text(path: str, text: str) -> None:
    with atomic_write(path) as fh:
        fh.write(text)


def _row(vals) -> str:
    return " ".join(repr(float(v)) for v in vals)


def _body(a: np.ndarray) -> str:
    flat = np.asarray(a, dtype=float).reshape(-1, a.shape[-1]) if a.ndim > 1 else a.reshape(1, -1)
    return "\n".join(_row(r) for r in flat) + "\n"


def grid_to_text(f: SampledFunction, tag: str = "GRID") -> str:
    s = f.spec
    return f"{tag} {s.n} {s.N} {s.L!r}\n" + _body(np.real(f.values))


def _tokens(text: str) -> list[str]:
    return text.split()


def _header(tokens, tag):
    if len(tokens) < 4 or tokens[0] != tag:
        raise FormatError(f"expected '{tag} n N L' header")
    try:
        return GridSpec(int(tokens[1]), int(tokens[2]), float(tokens[3]))
    except ValueError as e:
        raise FormatError(f"bad {tag} header: {e}") from None


def _floats(tokens, count, what):
    if len(tokens) != count:
        raise FormatError(f"{what}: expected {count} values, found {len(tokens)}")
    try:
        return np.array([float(t) for t in tokens])
    except ValueError as e:
        raise FormatError(f"{what}: {e}") from None


def grid_from_text(text: str) -> SampledFunction:
    t = _tokens(text)
    spec = _header(t, "GRID")
    v = _floats(t[4:], spec.N ** spec.n, "GRID body")
    return SampledFunction(spec, v.reshape(spec.shape))


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None


def read_grid(path: str) -> SampledFunction:
    return grid_from_text(_read(path))


def write_grid(path: str, f: SampledFunction) -> None:
    write_text(path, grid_to_text(f))


def read_mask(path: str) -> VoxelSet:
    t = _tokens(_read(path))
    spec = _header(t, "MASK")
    v = _floats(t[4:], spec.N ** spec.n, "MASK body")
    if not np.all((v == 0) | (v == 1)):
        raise FormatError("MASK body must be 0/1")
    return VoxelSet(spec, v.reshape(spec.shape).astype(bool))


def write_mask(path: str, S: VoxelSet) -> None:
    s = S.spec
    rows = S.mask.reshape(-1, s.N).astype(int)
    body = "\n".join(" ".join(map(str, r)) for r in rows)
    write_text(path, f"MASK {s.n} {s.N} {s.L!r}\n{body}\n")


def sinogram_to_text(g: Sinogram) -> str:
    """``SINO n D T`` then ``D`` lines ``s_1 .. s_n w``, an ``OFFSETS k t0 ht N L``
    line (``k = 1`` Radon, ``k = 2`` X-ray offset dimension) and the values."""
    n, D, T = g.dirs.n, len(g.dirs), g.n_offsets
    k = g.values.ndim - 1
    lines = [f"SINO {n} {D} {T}"]
    for s, w in zip(g.dirs.directions, g.dirs.weights):
        lines.append(_row(list(s) + [w]))
    lines.append(f"OFFSETS {k} {g.t0!r} {g.ht!r} {g.spec.N} {g.spec.L!r}")
    return "\n".join(lines) + "\n" + _body(g.values)


def sinogram_from_text(text: str) -> Sinogram:
    t = _tokens(text)
    if len(t) < 4 or t[0] != "SINO":
        raise FormatError("expected 'SINO n D T' header")
    try:
        n, D, T = int(t[1]), int(t[2]), int(t[3])
    except ValueError:
        raise FormatError("bad SINO header") from None
    pos = 4
    dw = _floats(t[pos:pos + D * (n + 1)], D * (n + 1), "SINO directions").reshape(D, n + 1)
    pos += D * (n + 1)
    if len(t) < pos + 6 or t[pos] != "OFFSETS":
        raise FormatError("expected 'OFFSETS k t0 ht N L' line")
    try:
        k = int(t[pos + 1])
        t0, ht = float(t[pos + 2]), float(t[pos + 3])
        spec = GridSpec(n, int(t[pos + 4]), float(t[pos + 5]))
    except ValueError as e:
        raise FormatError(f"bad OFFSETS line: {e}") from None
    pos += 6
    shape = (D,) + (T,) * k
    vals = _floats(t[pos:], int(np.prod(shape)), "SINO body").reshape(shape)
    dirs = DirectionSet(n, dw[:, :n], dw[:, n])
    return Sinogram(dirs, t0, ht, vals, spec, "radon" if k == 1 else "xray")


def read_sinogram(path: str) -> Sinogram:
    return sinogram_from_text(_read(path))


def write_sinogram(path: str, g: Sinogram) -> None:
    write_text(path, sinogram_to_text(g))


def write_pgm(path: str, image: np.ndarray) -> None:
    """8-bit binary PGM of a 2D array (the middle slice for 3D), min-max scaled."""
    a = np.asarray(image, dtype=float)
    while a.ndim > 2:
        a = a[a.shape[0] // 2]
    if a.ndim == 1:
        a = a[None, :]
    lo, hi = float(a.min()), float(a.max())
    scaled = np.zeros(a.shape) if hi == lo else (a - lo) / (hi - lo)
    pix = np.round(255 * scaled).astype(np.uint8)
    with atomic_write(path, "wb") as fh:
        fh.write(f"P5\n{a.shape[1]} {a.shape[0]}\n255\n".encode())
        fh.write(pix.tobytes())


def cubes_to_csv(cubes, averages) -> str:
    """Lines ``m v1 .. vn avg``."""
    out = []
    for q, a in zip(cubes, averages):
        out.append(" ".join([str(q.m)] + [str(v) for v in q.v] + [repr(float(a))]))
    return "\n".join(out) + ("\n" if out else "")
