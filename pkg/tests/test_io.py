import os

import numpy as np
import pytest

from harmonica import io, phantoms
from harmonica.grid import GridSpec, SampledFunction
from harmonica.hardy import DyadicCube
from harmonica.radon import DirectionSet, radon_forward, xray_forward
from harmonica.symmetrize import VoxelSet


def test_grid_roundtrip_is_exact(tmp_path):
    s = GridSpec(2, 8, 1.5)
    f = SampledFunction(s, np.random.default_rng(0).standard_normal(s.shape))
    p = tmp_path / "f.grid"
    io.write_grid(str(p), f)
    assert p.read_text().startswith("GRID 2 8 1.5\n")
    g = io.read_grid(str(p))
    assert g.spec == s
    assert np.array_equal(g.values, f.values)


def test_mask_roundtrip(tmp_path):
    s = GridSpec(2, 6, 1.0)
    S = VoxelSet(s, np.random.default_rng(1).random(s.shape) < 0.4)
    p = tmp_path / "m.mask"
    io.write_mask(str(p), S)
    assert io.read_mask(str(p)) == S


@pytest.mark.parametrize("kind", ["radon", "xray"])
def test_sinogram_roundtrip(tmp_path, kind):
    if kind == "radon":
        s = GridSpec(2, 16, 1.0)
        g = radon_forward(phantoms.gaussian(s, 0.3), DirectionSet.uniform(2, 5), 20)
    else:
        s = GridSpec(3, 8, 1.0)
        g = xray_forward(phantoms.gaussian(s, 0.3), DirectionSet.uniform(3, 3), 10)
    p = tmp_path / "g.sino"
    io.write_sinogram(str(p), g)
    h = io.read_sinogram(str(p))
    assert h.kind == g.kind and h.spec == g.spec
    assert (h.t0, h.ht) == (g.t0, g.ht)
    assert np.array_equal(h.values, g.values)
    assert np.array_equal(h.dirs.directions, g.dirs.directions)
    assert np.array_equal(h.dirs.weights, g.dirs.weights)


@pytest.mark.parametrize("text", [
    "",
    "GRIDX 1 4 1.0\n0 0 0 0\n",
    "GRID 1 four 1.0\n0 0 0 0\n",
    "GRID 1 4 1.0\n0 0 0\n",
    "GRID 1 4 1.0\n0 0 x 0\n",
])
def test_bad_grid_text(text):
    with pytest.raises(io.FormatError):
        io.grid_from_text(text)


def test_bad_mask_and_sinogram(tmp_path):
    p = tmp_path / "bad.mask"
    p.write_text("MASK 1 3 1.0\n0 2 1\n")
    with pytest.raises(io.FormatError):
        io.read_mask(str(p))
    with pytest.raises(io.FormatError):
        io.sinogram_from_text("SINO 2 1 2\n1 0 6.28\n0 0\n")
    with pytest.raises(io.FormatError):
        io.read_grid(str(tmp_path / "missing.grid"))


def test_failed_write_leaves_nothing(tmp_path):
    target = tmp_path / "out.txt"
    with pytest.raises(RuntimeError):
        with io.atomic_write(str(target)) as fh:
            fh.write("partial")
            raise RuntimeError("boom")
    assert os.listdir(tmp_path) == []


def test_pgm_header_and_size(tmp_path):
    p = tmp_path / "a.pgm"
    io.write_pgm(str(p), np.arange(12.0).reshape(3, 4))
    data = p.read_bytes()
    assert data.startswith(b"P5\n4 3\n255\n")
    assert len(data) == len(b"P5\n4 3\n255\n") + 12
    assert data[-1] == 255 and data[len(b"P5\n4 3\n255\n")] == 0


def test_cubes_csv():
    assert io.cubes_to_csv([DyadicCube(0, (0,))], [1.0]) == "0 0 1.0\n"
