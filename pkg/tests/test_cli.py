import numpy as np
import pytest

from harmonica import io
from harmonica.cli import main
from harmonica.grid import GridSpec, SampledFunction
from harmonica.symmetrize import VoxelSet


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def indicator_file(tmp_path):
    s = GridSpec(1, 64, 2.0)
    f = SampledFunction.from_callable(s, lambda x: ((x >= 0) & (x < 1)).astype(float))
    p = tmp_path / "chi.grid"
    io.write_grid(str(p), f)
    return str(p)


def value(out, key):
    for line in out.splitlines():
        if line.startswith(key + " "):
            return float(line.split()[1])
    raise AssertionError(f"{key} not in output")


def test_radon_roundtrip(capsys):
    code, out, _ = run(capsys, "radon", "roundtrip", "--phantom", "gauss", "--n", "2", "--N", "128",
                       "--dirs", "180", "--offsets", "256")
    assert code == 0
    assert float(out.split()[-1]) < 0.05


def test_radon_forward_zero_ball(capsys, tmp_path):
    p = tmp_path / "z.sino"
    code, _, _ = run(capsys, "radon", "forward", "--phantom", "ball", "--radius", "0", "--N", "32",
                     "--dirs", "8", "--output", str(p))
    assert code == 0
    assert not np.any(io.read_sinogram(str(p)).values)


def test_radon_forward_then_invert(capsys, tmp_path):
    sino, rec = tmp_path / "g.sino", tmp_path / "r.grid"
    assert run(capsys, "radon", "forward", "--phantom", "gauss", "--N", "64", "--dirs", "90",
               "--output", str(sino))[0] == 0
    assert run(capsys, "radon", "invert", "--input", str(sino), "--output", str(rec))[0] == 0
    assert io.read_grid(str(rec)).spec == GridSpec(2, 64, 1.0)


def test_radon_scaling(capsys):
    code, out, _ = run(capsys, "radon", "scaling", "--shape", "ball", "--r", "2", "--N", "128",
                       "--expect", "1.5")
    assert code == 0
    assert value(out, "slope") == pytest.approx(1.5, rel=0.03)


def test_radon_support_check_expectations(capsys):
    args = ["radon", "support-check", "--phantom", "twobump", "--N", "64", "--dirs", "90", "--R", "0.2"]
    assert run(capsys, *args, "--expect", "fails")[0] == 0
    assert run(capsys, *args, "--expect", "holds")[0] == 1


def test_norm_indicator(capsys, tmp_path):
    path = indicator_file(tmp_path)
    code, out, _ = run(capsys, "norm", "--input", path, "--p", "2", "--q", "1")
    assert code == 0
    assert value(out, "lorentz_quasinorm") == pytest.approx(1.0, abs=1e-12)
    code, out, _ = run(capsys, "norm", "--input", path, "--p", "2", "--q", "2")
    assert value(out, "lorentz_quasinorm") == pytest.approx(value(out, "Lp"), rel=1e-12)


def test_norm_zero_and_bad_exponent(capsys, tmp_path):
    p = tmp_path / "z.grid"
    io.write_grid(str(p), SampledFunction.zeros(GridSpec(1, 16, 1.0)))
    code, out, _ = run(capsys, "norm", "--input", str(p), "--nt", "3")
    assert code == 0
    assert all(float(line.split(",")[1]) == 0.0 for line in out.splitlines()[-3:])
    assert value(out, "Lp") == 0.0
    code, _, err = run(capsys, "norm", "--input", str(p), "--p", "0.5")
    assert code == 2 and err.startswith("error:")


def test_maximal_and_bmo(capsys, tmp_path):
    path = indicator_file(tmp_path)
    csv = tmp_path / "dist.csv"
    code, out, _ = run(capsys, "maximal", "--input", path, "--csv", str(csv))
    assert code == 0
    assert value(out, "max") == pytest.approx(1.0)
    assert csv.read_text().startswith("s,measure\n")
    code, out, _ = run(capsys, "bmo", "--input", path, "--sharp")
    assert code == 0
    assert value(out, "bmo_1") == pytest.approx(0.5, abs=1e-12)


def test_decompose_cz_hand_example(capsys, tmp_path):
    path = indicator_file(tmp_path)
    code, out, _ = run(capsys, "decompose", "cz", "--input", path, "--alpha", "0.5")
    assert code == 0
    assert out.splitlines()[0] == "0 0 1.0"
    assert "1 cubes" in out


def test_decompose_whitney(capsys, tmp_path):
    s = GridSpec(2, 16, 1.0)
    full = tmp_path / "full.mask"
    io.write_mask(str(full), VoxelSet(s, np.ones(s.shape, bool)))
    code, _, err = run(capsys, "decompose", "whitney", "--mask", str(full))
    assert code == 2 and "complement empty" in err
    disk = tmp_path / "disk.mask"
    io.write_mask(str(disk), VoxelSet(s, s.radius() < 0.6))
    code, out, _ = run(capsys, "decompose", "whitney", "--mask", str(disk))
    assert code == 0 and "FAIL" not in out


def test_decompose_atomic(capsys, tmp_path):
    d = tmp_path / "atoms"
    code, out, _ = run(capsys, "decompose", "atomic", "--phantom", "bump", "--n", "1", "--N", "256",
                       "--L", "4", "--outdir", str(d), "--dump-atoms")
    assert code == 0
    assert "sum|lambda|" in out and "FAIL" not in out
    manifest = (d / "manifest.csv").read_text().splitlines()
    assert manifest[0].startswith("lambda,m,radius,x1")
    assert len(list(d.glob("atom_*.grid"))) == len(manifest) - 1
    lam = sum(abs(float(r.split(",")[0])) for r in manifest[1:])
    assert lam == pytest.approx(value(out, "sum|lambda|"), rel=1e-12)


def test_usage_and_io_errors(capsys, tmp_path):
    assert run(capsys, "norm", "--input", str(tmp_path / "missing.grid"))[0] == 2
    assert run(capsys, "norm")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "accept", "--only", "nosuchgroup")[0] == 2
    bad = tmp_path / "bad.grid"
    bad.write_text("GRID 1 4 1.0\n1 2\n")
    assert run(capsys, "maximal", "--input", str(bad))[0] == 2


def test_no_partial_output_on_failure(capsys, tmp_path):
    out = tmp_path / "r.grid"
    code, _, _ = run(capsys, "maximal", "--input", str(tmp_path / "missing.grid"), "--output", str(out))
    assert code == 2
    assert list(tmp_path.iterdir()) == []


def test_accept_subset_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "accept", "--only", "8,10", "--seed", "7", "--csv", str(a))[0] == 0
    code, out, _ = run(capsys, "accept", "--only", "8,10", "--seed", "7", "--csv", str(b))
    assert code == 0 and "rows pass" in out
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "criterion,value,bound,pass"


def test_accept_group_filter(capsys):
    code, out, _ = run(capsys, "accept", "--only", "symmetrize")
    assert code == 0
    rows = [line for line in out.splitlines() if line.startswith("[")]
    assert rows and all(line.split()[1].startswith("17") for line in rows)
