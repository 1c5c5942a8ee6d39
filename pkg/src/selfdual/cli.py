"""Command-line interface: generate, check, estimate moduli, render and report.

Exit codes: 0 pass, 1 semantic failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import construct as cs
from . import curves as cv
from . import fileio
from . import polycurve as pcv
from . import projcore as pc
from . import svg
from .errors import SelfDualError
from .polygon import definite, is_convex, test_self_dual

DEFAULT_TOL = 1e-7
POLYGON_FAMILIES = ("regular", "chain", "spherical", "rotational", "poncelet")
FAMILIES = POLYGON_FAMILIES + fileio.CURVE_FAMILIES


class UsageError(Exception):
    pass


def _tolerance(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("TOLERANCE")
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"TOLERANCE={env!r} is not a number") from None
    return DEFAULT_TOL


def _floats(s):
    if s is None or s == "":
        return ()
    return tuple(float(x) for x in s.split(","))


def _harmonics(s):
    """'3:0.05:0,5:0.01:0' -> ((3, 0.05, 0.0), (5, 0.01, 0.0))."""
    if not s:
        return ()
    out = []
    for item in s.split(","):
        k, a, b = item.split(":")
        out.append((int(k), float(a), float(b)))
    return tuple(out)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------- gen


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    fam = args.family
    meta = {"family": fam}
    if fam == "regular":
        n = args.n or 5
        poly = cs.regular_polygon(n, args.k or 1)
        meta.update(n=n, k=args.k or 1)
    elif fam in ("chain", "spherical"):
        n = args.n or 5
        if n < 5 or n % 2 == 0:
            raise UsageError(f"--n must be odd and >= 5 for chain polygons, got {n}")
        ang = _floats(args.angles) or tuple(rng.uniform(0.3, 2.8, n - 3))
        params = cs.ChainParams(n, ang, args.branch)
        meta.update(n=n, angles=list(ang), branch=args.branch)
        if fam == "chain":
            poly = cs.chain_selfdual(params)
        else:
            sc = cs.spherical_chain(params)
            poly = sc.polygon
            meta["sphere"] = [[float(x) for x in c] for c in sc.points]
    elif fam == "rotational":
        m, n = args.m or 3, args.n or 9
        if args.free is not None or args.point is not None:
            point = _floats(args.point) or (1.0, 0.0)
            params = cs.RotationalParams(m, n, point, _floats(args.free))
        else:
            params = cs.random_rotational_params(m, n, rng)
        poly = cs.rotational_selfdual(params)
        meta.update(m=m, n=n, point=list(params.seed), free=list(params.free))
    elif fam == "poncelet":
        n = args.n or 5
        r = cs.poncelet_search(n, args.offset, args.start, args.winding)
        poly = r.polygon
        meta.update(n=n, offset=args.offset, start=args.start, winding=args.winding,
                    inner_radius=r.radius, closure=r.residual)
    else:
        params = {}
        if fam == "curve-width":
            params["harmonics"] = [list(h) for h in _harmonics(args.harmonics)] or \
                [[3, float(rng.uniform(0.01, 0.06)), 0.0]]
        elif fam == "curve-rot":
            params.update(p=args.p, q=args.q,
                          harmonics=[list(h) for h in _harmonics(args.harmonics)] or [[1, args.amp, 0.0]])
        elif fam == "curve-radon":
            params["coeffs"] = list(_floats(args.coeffs) or (args.amp,))
        fileio.build_curve(fam, params, args.samples)  # validate now
        _write(args.out, fileio.dumps_curve_generator(fam, params, args.samples))
        return 0
    _write(args.out, fileio.dumps_polygon(poly, meta=meta))
    return 0


# ---------------------------------------------------------------- check


def _check_polygon(poly, m, tol):
    if m is None:
        if poly.n % 2 == 0:
            raise UsageError("--m is required for even n")
        m = poly.n
    if m % 2 != 1 or not 1 <= m <= poly.n:
        raise UsageError(f"--m must be odd with 1 <= m <= n = {poly.n}")
    cert = test_self_dual(poly, m)
    ok = cert.passed and cert.residual < tol
    rep = {
        "object": "polygon",
        "n": poly.n,
        "m": m,
        "tolerance": tol,
        "pass": bool(ok),
        "residual": cert.residual,
        "cross_ratio_residual": cert.cross_residual,
    }
    if cert.passed:
        rep["symmetry_defect"] = cert.symmetry_defect
        rep["symmetric"] = bool(cert.symmetric)
        rep["class"] = str(cert.fclass) if cert.fclass is not None else None
        rep["g_order"] = cert.g_order
        if poly.field == "real":
            rep["definite"] = definite(cert.F) if cert.symmetric else None
            try:
                rep["convex"] = is_convex(poly)
            except SelfDualError:
                rep["convex"] = None
    if cert.notes:
        rep["notes"] = list(cert.notes)
    return ok, rep


def _check_curve(curve, phi, tol):
    if phi is None:
        raise UsageError("sampled curve files need a \"phi\" entry")
    cert = cv.test_self_dual_curve(curve, phi)
    ctol = max(tol, 1e-6)
    ok = cert.residual < ctol
    rep = {
        "object": "curve",
        "tag": curve.tag,
        "phi": str(phi),
        "tolerance": ctol,
        "pass": bool(ok),
        "residual": cert.residual,
        "samples": cert.samples,
        "symmetry_defect": cert.symmetry_defect,
        "symmetric": cert.symmetric,
        "definite": cert.definite,
        "class": str(cert.fclass) if cert.fclass is not None else None,
    }
    return ok, rep


def cmd_check(args) -> int:
    text = _read(args.file)
    tol = _tolerance(args)
    if fileio.sniff(text) == "curve":
        curve, phi, _ = fileio.loads_curve(text)
        ok, rep = _check_curve(curve, phi, tol)
    else:
        poly, wit, _ = fileio.loads_polygon(text)
        ok, rep = _check_polygon(poly, args.m, tol)
        if wit is not None and rep["pass"]:
            c = pcv.PolygonalCurve(poly, *wit)
            rep["polycurve_self_dual"] = pcv.test_self_dual_pc(c, rep["m"])
    if args.json:
        print(json.dumps(rep, sort_keys=True, default=str))
    else:
        print("PASS" if ok else "FAIL")
        for k in sorted(rep):
            print(f"{k}={rep[k]}")
    return 0 if ok else 1


# ---------------------------------------------------------------- moduli


def moduli_bases(m, n, trials, rng):
    d = math.gcd(m, n)
    if m == n:
        if n % 2 == 0 or n < 5:
            raise UsageError("m = n needs odd n >= 5")
        for _ in range(trials):
            yield cs.chain_selfdual(cs.ChainParams(n, tuple(rng.uniform(0.3, 2.8, n - 3))))
    elif d == 1:
        # the regular polygon is the only base; the stabilizer correction applies
        yield cs.regular_polygon(n, 1)
    else:
        for _ in range(trials):
            yield cs.rotational_selfdual(cs.random_rotational_params(m, n, rng))


def cmd_moduli(args) -> int:
    m, n = args.m, args.n
    if m % 2 != 1 or not 1 <= m <= n:
        raise UsageError("need odd m with 1 <= m <= n")
    rng = np.random.default_rng(args.seed)
    rows = []
    print("trial\tdim\tnullity\tstabilizer\tgap\tflags")
    for k, base in enumerate(moduli_bases(m, n, args.trials, rng)):
        r = cs.moduli_dimension(m, n, base)
        rows.append(r)
        print(f"{k}\t{r.dimension}\t{r.nullity}\t{r.stabilizer_dim}\t{r.gap_ratio:.3e}\t{';'.join(r.flags) or '-'}")
    good = [r for r in rows if not r.inconclusive]
    if not good:
        print("all bases inconclusive")
        return 1
    dims = sorted({r.dimension for r in good})
    print(f"dim={dims[0] if len(dims) == 1 else dims} ({m},{n}) {rows[0].scope}")
    return 0


# ---------------------------------------------------------------- render


def cmd_render(args) -> int:
    text = _read(args.file)
    if fileio.sniff(text) == "curve":
        curve, _, _ = fileio.loads_curve(text)
        items = [curve.points]
        if args.dual:
            items.append(cv.dual_curve(curve).points)
        out = svg.render_curves(items, args.chart, title=curve.tag)
    else:
        poly, _, _ = fileio.loads_polygon(text)
        if poly.field != "real":
            raise UsageError("only real polygons can be rendered")
        out = svg.render_polygon(poly.vertices, args.chart)
    _write(args.svg, out)
    return 0


# ---------------------------------------------------------------- polycurve


def cmd_polycurve(args) -> int:
    poly, _, _ = fileio.loads_polygon(_read(args.file))
    if poly.field != "real":
        raise UsageError("polygonal curves are real")
    brute = not args.no_brute
    if brute and 2 * poly.n > pcv.BRUTE_FORCE_MAX_BITS:
        raise UsageError(f"2n = {2 * poly.n} exceeds the brute-force budget; use --no-brute")
    cert = test_self_dual(poly, args.m)
    if not cert.passed:
        print(f"base polygon is not {args.m}-self-dual")
        return 1
    r = pcv.enumerate_selfdual_structures(poly, args.m, brute_force=brute)
    print(f"{r.count} / {r.total}")
    print(f"brute_force={'on' if brute else 'off'}")
    print(f"constructive={len(r.constructive) if r.constructive is not None else 'n/a'}")
    print(f"agree={r.agree}")
    print(f"expected=2^{math.gcd(args.m, poly.n)}")
    return 0 if r.agree else 1


# ---------------------------------------------------------------- report


def cmd_report(args) -> int:
    from .report import run_report

    return run_report(args.out, _tolerance(args), seed=args.seed)


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selfdual", description=__doc__.splitlines()[0])
    ap.add_argument("--tol", type=float, default=None, help="pass tolerance (env TOLERANCE)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a polygon or curve file")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--angles", help="comma-separated chain angles")
    g.add_argument("--branch", type=int, default=1, choices=(1, -1))
    g.add_argument("--point", help="seed vertex x,y (rotational)")
    g.add_argument("--free", help="comma-separated free parameters (rotational)")
    g.add_argument("--offset", type=float, default=0.0, help="inner circle centre (poncelet)")
    g.add_argument("--start", type=float, default=0.0)
    g.add_argument("--winding", type=int, default=1)
    g.add_argument("--harmonics", help="k:a:b,... (curve-width, curve-rot)")
    g.add_argument("--p", type=int, default=1)
    g.add_argument("--q", type=int, default=5)
    g.add_argument("--amp", type=float, default=0.1)
    g.add_argument("--coeffs", help="comma-separated seed coefficients (curve-radon)")
    g.add_argument("--samples", type=int, default=2000)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="test self-duality of a file")
    c.add_argument("file")
    c.add_argument("--m", type=int)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    mo = sub.add_parser("moduli", help="numerical dimension of the moduli space")
    mo.add_argument("--m", type=int, required=True)
    mo.add_argument("--n", type=int, required=True)
    mo.add_argument("--trials", type=int, default=3)
    mo.add_argument("--seed", type=int, default=0)
    mo.set_defaults(func=cmd_moduli)

    r = sub.add_parser("render", help="deterministic SVG drawing")
    r.add_argument("file")
    r.add_argument("--svg", default="-")
    r.add_argument("--chart", type=int, default=2, choices=(0, 1, 2))
    r.add_argument("--dual", action="store_true", help="also draw the dual curve")
    r.set_defaults(func=cmd_render)

    p = sub.add_parser("polycurve", help="count self-dual polygonal curves")
    p.add_argument("file")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--no-brute", action="store_true")
    p.set_defaults(func=cmd_polycurve)

    rp = sub.add_parser("report", help="run the verification battery; TSV plus figures")
    rp.add_argument("--out", default="report")
    rp.add_argument("--seed", type=int, default=0)
    rp.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, fileio.FileFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SelfDualError, ValueError) as exc:
        # invalid parameters for a generator or a check
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
