"""Command-line front end.

Exit codes: 0 success, 1 a requested check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import acceptance, io, phantoms
from .errors import HarmonicaError
from .grid import GridSpec, SampledFunction, lp_norm

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _float(s: str) -> float:
    return math.inf if s.lower() in ("inf", "infinity") else float(s)


def _floats(s: str) -> list[float]:
    return [_float(t) for t in s.split(",") if t.strip()]


def _add_source(p, phantom_default=None):
    p.add_argument("--input", help="GRID file")
    p.add_argument("--phantom", default=phantom_default, choices=phantoms.NAMES)
    p.add_argument("--n", type=int, default=2, help="dimension for phantoms")
    p.add_argument("--N", type=int, default=128, help="samples per axis for phantoms")
    p.add_argument("--L", type=float, default=1.0, help="box half-width for phantoms")
    p.add_argument("--radius", type=float, help="phantom radius or width")


def _source(args) -> SampledFunction:
    if args.input:
        return io.read_grid(args.input)
    if not args.phantom:
        raise UsageError("give --input FILE or --phantom NAME")
    return phantoms.by_name(args.phantom, GridSpec(args.n, args.N, args.L), args.radius)


def _out(msg: str = "") -> None:
    print(msg)


# radon ----------------------------------------------------------------------

def cmd_radon(args) -> int:
    from .radon import (DirectionSet, invert, projection_slice_check, radon_forward,
                        scaling_probe, support_predicate)

    sub = args.radon_cmd
    if sub == "scaling":
        slope = scaling_probe(args.shape, args.q, args.r, _floats(args.radii), N=args.N)
        _out(f"slope {slope:.6f}")
        if args.expect is not None and abs(slope - args.expect) > args.tol * abs(args.expect):
            _out(f"FAIL: slope differs from {args.expect} by more than {args.tol:.0%}")
            return EXIT_FAIL
        return EXIT_OK
    if sub == "invert":
        g = io.read_sinogram(args.input)
        rec = invert(g)
        if args.output:
            io.write_grid(args.output, rec)
        if args.pgm:
            io.write_pgm(args.pgm, rec.values)
        _out(f"reconstructed grid n={rec.spec.n} N={rec.spec.N} L={rec.spec.L}")
        return EXIT_OK

    f = _source(args)
    n = f.spec.n
    dirs = DirectionSet.uniform(n, args.dirs)
    T = args.offsets or 2 * f.spec.N
    if sub == "forward":
        g = radon_forward(f, dirs, T)
        if args.output:
            io.write_sinogram(args.output, g)
        if args.pgm:
            io.write_pgm(args.pgm, g.values)
        _out(f"sinogram D={len(dirs)} T={T} max={float(np.abs(g.values).max()):.6g}")
        return EXIT_OK
    if sub == "roundtrip":
        g = radon_forward(f, dirs, T)
        rec = invert(g)
        den = np.linalg.norm(f.values)
        err = float(np.linalg.norm(rec.values - f.values) / den) if den else float(np.linalg.norm(rec.values))
        if args.output:
            io.write_grid(args.output, rec)
        if args.pgm:
            io.write_pgm(args.pgm, rec.values)
        _out(f"relative L2 error {err:.6g}")
        return EXIT_OK if err < args.tol else EXIT_FAIL
    if sub == "slice-check":
        res = projection_slice_check(f, dirs, args.offsets)
        _out(f"projection-slice residual {res:.6g}")
        return EXIT_OK if res < args.tol else EXIT_FAIL
    if sub == "support-check":
        g = radon_forward(f, dirs, T)
        res = support_predicate(g, args.R, args.margin or 3 * f.spec.h, args.tol)
        _out(f"support within R={args.R}: {res.holds}")
        _out(f"max |f| outside R+margin {res.outside_max:.6g}; sinogram tail {res.tail:.6g}")
        if res.witness is not None:
            _out("witness " + " ".join(f"{c:.6g}" for c in res.witness))
        if args.expect is not None and res.holds != (args.expect == "holds"):
            return EXIT_FAIL
        return EXIT_OK
    raise UsageError(f"unknown radon subcommand {sub}")


# norm, maximal, bmo -------------------------------------------------------

def cmd_norm(args) -> int:
    from .rearrange import (LorentzExponents, decreasing_rearrangement, k_functional,
                            lorentz_norm, lorentz_quasinorm, weak_norm)

    f = _source(args)
    e = LorentzExponents(args.p, args.q)
    fs = decreasing_rearrangement(f)
    rows = [("Lp", lp_norm(f, e.p)), ("lorentz_quasinorm", lorentz_quasinorm(fs, e))]
    if 1 < e.p < math.inf:
        rows.append(("lorentz_norm", lorentz_norm(fs, e)))
    rows.append(("weak", weak_norm(fs, e.p)))
    for k, v in rows:
        _out(f"{k} {float(v)!r}")
    ts = np.geomspace(args.tmin, args.tmax, args.nt)
    table = "t,K\n" + "".join(f"{float(t)!r},{float(k_functional(fs, t))!r}\n" for t in ts)
    if args.csv:
        io.write_text(args.csv, "quantity,value\n" + "".join(f"{k},{float(v)!r}\n" for k, v in rows) + "\n" + table)
    else:
        sys.stdout.write(table)
    return EXIT_OK


def cmd_maximal(args) -> int:
    from .maximal import grand_maximal, maximal_function, weak_type_constant
    from .rearrange import distribution

    f = _source(args)
    M = grand_maximal(f) if args.grand else maximal_function(f)
    _out(f"max {float(M.values.max())!r}")
    if not args.grand:
        _out(f"weak-(1,1) constant {weak_type_constant(f, M)!r}")
    if args.output:
        io.write_grid(args.output, M)
    if args.pgm:
        io.write_pgm(args.pgm, M.values)
    if args.csv:
        lam = distribution(M)
        lines = ["s,measure"] + [f"{float(s)!r},{float(m)!r}" for s, m in zip(lam.breaks, lam.values)]
        io.write_text(args.csv, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_bmo(args) -> int:
    from .maximal import bmo_norm, sharp_function

    f = _source(args)
    b = bmo_norm(f, args.q)
    _out(f"bmo_{args.q:g} {b!r}")
    if args.sharp or args.output:
        s = sharp_function(f)
        _out(f"max sharp {float(s.values.max())!r}")
        if args.output:
            io.write_grid(args.output, s)
    return EXIT_OK


# decompose ------------------------------------------------------------------

def cmd_decompose(args) -> int:
    from . import hardy

    sub = args.decompose_cmd
    if sub == "whitney":
        if args.mask:
            O = io.read_mask(args.mask)
        else:
            f = _source(args)
            from .symmetrize import VoxelSet
            O = VoxelSet(f.spec, np.abs(f.values) > args.level)
        W = hardy.whitney(O, args.c, args.c1, args.c2)
        chk = hardy.whitney_checks(O, W)
        lines = ["d," + ",".join(f"x{i + 1}" for i in range(O.spec.n))]
        lines += [f"{float(d)!r}," + ",".join(repr(float(c)) for c in x) for x, d in zip(W.centers, W.d)]
        if args.output:
            io.write_text(args.output, "\n".join(lines) + "\n")
        _out(f"{len(W)} balls")
        for k in ("W1", "W2", "W3", "W4"):
            _out(f"{k} {'pass' if chk[k] else 'FAIL'}")
        _out(f"max overlap {chk['max_overlap']} <= N {chk['N']}")
        return EXIT_OK if all(chk[k] for k in ("W1", "W2", "W3", "W4")) else EXIT_FAIL

    f = _source(args)
    if sub == "cz":
        cubes, avgs = hardy.cz_decompose(f, args.alpha, with_averages=True)
        csv = io.cubes_to_csv(cubes, avgs)
        if args.output:
            io.write_text(args.output, csv)
        else:
            sys.stdout.write(csv)
        n = f.spec.n
        cover = np.zeros(f.spec.shape, dtype=bool)
        for q in cubes:
            cover |= q.mask(f.spec)
        ok_avg = all(args.alpha < a <= 2 ** n * args.alpha * (1 + 1e-12) for a in avgs)
        ok_out = bool(np.all(np.abs(f.values[~cover]) <= args.alpha))
        _out(f"{len(cubes)} cubes")
        _out(f"averages in (alpha, 2^n alpha] {'pass' if ok_avg else 'FAIL'}")
        _out(f"|f| <= alpha outside {'pass' if ok_out else 'FAIL'}")
        return EXIT_OK if ok_avg and ok_out else EXIT_FAIL
    if sub == "atomic":
        A = hardy.atomic_decompose(f, c=args.c, c1=args.c1, c2=args.c2)
        rec = A.reconstruct()
        scale = max(float(np.abs(f.values).max()), 1e-300)
        rec_err = float(np.abs(rec.values - f.values).max()) / scale
        valid = sum(hardy.validate_atom(A.atom(i), (A.centers[i], A.radii[i])).valid for i in range(len(A)))
        bound = hardy.intersection_bound(f.spec.n, args.c, args.c2)
        over = max(A.overlap.values(), default=0)
        if args.outdir:
            os.makedirs(args.outdir, exist_ok=True)
            io.write_text(os.path.join(args.outdir, "manifest.csv"), A.manifest())
            if args.dump_atoms:
                for i in range(len(A)):
                    io.write_grid(os.path.join(args.outdir, f"atom_{i:05d}.grid"), A.atom(i))
            io.write_grid(os.path.join(args.outdir, "residual.grid"), A.residual)
        _out(f"atoms {len(A)} levels {A.window[0]}..{A.window[1]}")
        _out(f"sum|lambda| {A.coefficient_sum!r}")
        _out(f"||Mf||_1 {A.mf_l1!r} ratio {A.ratio!r} C' {A.C_prime!r}")
        _out(f"reconstruction relative error {rec_err:.3e} {'pass' if rec_err <= 1e-12 else 'FAIL'}")
        _out(f"valid atoms {valid}/{len(A)} {'pass' if valid == len(A) else 'FAIL'}")
        _out(f"max support overlap {over} <= N {bound} {'pass' if over <= bound else 'FAIL'}")
        ok = rec_err <= 1e-12 and valid == len(A) and over <= bound
        return EXIT_OK if ok else EXIT_FAIL
    raise UsageError(f"unknown decompose subcommand {sub}")


def cmd_accept(args) -> int:
    try:
        crit = acceptance.select(args.only)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    rows = acceptance.run(",".join(map(str, crit)), seed=args.seed, echo=_out)
    if args.csv:
        io.write_text(args.csv, acceptance.to_csv(rows))
    failed = [r for r in rows if not r.passed]
    _out(f"{len(rows) - len(failed)}/{len(rows)} rows pass")
    for r in failed:
        _out("failed: " + r.line())
    return EXIT_OK if not failed else EXIT_FAIL


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="harmonica", description=__doc__.splitlines()[0])
    sp = ap.add_subparsers(dest="command", required=True)

    r = sp.add_parser("radon", help="Radon transform tools")
    rs = r.add_subparsers(dest="radon_cmd", required=True)
    for name in ("forward", "roundtrip", "slice-check", "support-check"):
        p = rs.add_parser(name)
        _add_source(p, "gauss")
        p.add_argument("--dirs", type=int, default=180)
        p.add_argument("--offsets", type=int, default=None, help="default 2N")
        if name in ("forward", "roundtrip"):
            p.add_argument("--output")
            p.add_argument("--pgm")
        if name == "roundtrip":
            p.add_argument("--tol", type=float, default=0.05)
        if name == "slice-check":
            p.add_argument("--tol", type=float, default=2e-2)
        if name == "support-check":
            p.add_argument("--R", type=float, required=True)
            p.add_argument("--margin", type=float, default=None, help="default 3h")
            p.add_argument("--tol", type=float, default=0.05)
            p.add_argument("--expect", choices=("holds", "fails"))
    p = rs.add_parser("invert")
    p.add_argument("--input", required=True, help="SINO file")
    p.add_argument("--output")
    p.add_argument("--pgm")
    p = rs.add_parser("scaling")
    p.add_argument("--shape", choices=("ball", "cylinder"), default="ball")
    p.add_argument("--q", type=_float, default=2.0)
    p.add_argument("--r", type=_float, default=2.0)
    p.add_argument("--radii", default="0.1,0.15,0.22,0.33")
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--expect", type=float, default=None)
    p.add_argument("--tol", type=float, default=0.03)

    p = sp.add_parser("norm", help="rearrangement norms and the K-functional")
    _add_source(p)
    p.add_argument("--p", type=_float, default=2.0)
    p.add_argument("--q", type=_float, default=2.0)
    p.add_argument("--tmin", type=float, default=1e-3)
    p.add_argument("--tmax", type=float, default=1e3)
    p.add_argument("--nt", type=int, default=25)
    p.add_argument("--csv")

    p = sp.add_parser("maximal", help="maximal functions")
    _add_source(p)
    p.add_argument("--grand", action="store_true", help="grand maximal function")
    p.add_argument("--output")
    p.add_argument("--pgm")
    p.add_argument("--csv", help="distribution of Mf")

    p = sp.add_parser("bmo", help="BMO norm and sharp function")
    _add_source(p)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--sharp", action="store_true")
    p.add_argument("--output")

    d = sp.add_parser("decompose", help="Whitney, Calderon-Zygmund and atomic decompositions")
    ds = d.add_subparsers(dest="decompose_cmd", required=True)
    p = ds.add_parser("whitney")
    _add_source(p)
    p.add_argument("--mask", help="MASK file")
    p.add_argument("--level", type=float, default=0.0, help="phantom threshold for the open set")
    p.add_argument("--output")
    p = ds.add_parser("cz")
    _add_source(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--output")
    p = ds.add_parser("atomic")
    _add_source(p, "bump")
    p.add_argument("--outdir")
    p.add_argument("--dump-atoms", action="store_true")
    for q in (ds.choices["whitney"], ds.choices["atomic"]):
        q.add_argument("--c", type=float, default=0.2)
        q.add_argument("--c1", type=float, default=0.6, help="c'")
        q.add_argument("--c2", type=float, default=0.8, help="c''")

    p = sp.add_parser("accept", help="run the acceptance suite")
    p.add_argument("--only", help="group (radon, rearrange, maximal, hardy, symmetrize) or criterion numbers")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    return ap


COMMANDS = {"radon": cmd_radon, "norm": cmd_norm, "maximal": cmd_maximal,
            "bmo": cmd_bmo, "decompose": cmd_decompose, "accept": cmd_accept}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, HarmonicaError, OSError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
