"""Verification battery for the ``report`` subcommand: a TSV table plus PNG figures."""

from __future__ import annotations

import csv
import math
import os

import numpy as np

from . import construct as cs
from . import curves as cv
from . import polycurve as pcv
from .polygon import random_polygon, shift_law_residual, test_self_dual

MODULI_CASES = [(1, 7, 0), (5, 5, 2), (7, 7, 4), (3, 9, 2), (3, 6, 0), (5, 10, 2), (3, 12, 2)]


def _row(rows, group, item, value, tol, ok):
    rows.append({"group": group, "item": item, "value": f"{value:.6g}" if isinstance(value, float) else str(value),
                 "tolerance": f"{tol:g}" if isinstance(tol, float) else str(tol), "status": "pass" if ok else "FAIL"})


def _polygons(rows, rng, tol):
    shown = {}
    for n, k in [(5, 1), (5, 2), (7, 3)]:
        P = cs.regular_polygon(n, k)
        c = test_self_dual(P, n)
        _row(rows, "polygon", f"regular({n},{k}) m={n}", c.residual, tol, c.passed and c.residual < tol)
    shown["regular pentagram"] = cs.regular_polygon(5, 2)
    P = random_polygon(5, rng)
    c = test_self_dual(P, 5)
    _row(rows, "polygon", "random pentagon m=5", c.residual, tol, c.passed and c.residual < tol)
    shown["random pentagon"] = P
    for n in (5, 7):
        r = cs.poncelet_search(n, 0.25, 0.4, 1)
        c = test_self_dual(r.polygon, n)
        _row(rows, "poncelet", f"n={n} closure", r.residual, 1e-9, r.residual < 1e-9)
        _row(rows, "poncelet", f"n={n} m={n}", c.residual, tol, c.passed and c.residual < tol)
    shown["Poncelet heptagon"] = cs.poncelet_search(7, 0.25, 0.4, 1).polygon
    for m, n in [(3, 9), (3, 12)]:
        P = cs.rotational_selfdual(cs.random_rotational_params(m, n, rng))
        c = test_self_dual(P, m)
        ok = c.passed and c.residual < tol and c.g_order == n // math.gcd(m, n)
        _row(rows, "rotational", f"({m},{n}) residual", c.residual, tol, ok)
        _row(rows, "rotational", f"({m},{n}) shift law", shift_law_residual(P, c), tol,
             shift_law_residual(P, c) < tol)
        _row(rows, "rotational", f"({m},{n}) class", str(c.fclass), "Hphi", str(c.fclass).startswith("Hphi"))
        shown[f"3-self-dual {n}-gon"] = P
    return shown


def _moduli(rows, rng):
    reports = {}
    for m, n, expect in MODULI_CASES:
        if m == n:
            base = cs.chain_selfdual(cs.ChainParams(n, tuple(rng.uniform(0.3, 2.8, n - 3))))
        elif math.gcd(m, n) == 1 or (m, n) == (3, 6):
            base = cs.regular_polygon(n)
        else:
            base = cs.rotational_selfdual(cs.random_rotational_params(m, n, rng))
        r = cs.moduli_dimension(m, n, base)
        reports[(m, n)] = r
        _row(rows, "moduli", f"dim M({m},{n}) [{r.scope}]", r.dimension, expect,
             r.dimension == expect and not r.inconclusive)
        _row(rows, "moduli", f"gap ratio ({m},{n})", r.gap_ratio, 1e3, r.gap_ratio >= 1e3)
    return reports


def _structures(rows, rng):
    for name, P, m in [("regular pentagon", cs.regular_polygon(5), 5),
                       ("(3,9) nonagon", cs.rotational_selfdual(cs.random_rotational_params(3, 9, rng)), 3)]:
        r = pcv.enumerate_selfdual_structures(P, m)
        expect = 2 ** math.gcd(m, P.n)
        _row(rows, "polycurve", f"{name} m={m}", f"{r.count}/{r.total}", expect, r.count == expect and r.agree)


def _curves(rows):
    shown = {}
    for a in (0.0, 0.05, 0.3):
        c = cv.constant_width_curve(cv.SupportFunction(((3, a, 0.0),)), 2000)
        cert = cv.test_self_dual_curve(c, cv.Reparam.shift(math.pi))
        hd = cv.projective_hausdorff(c.points, cv.dual_curve(c).points)
        _row(rows, "constant width", f"a3={a} Hausdorff", hd, 1e-6, hd < 1e-6)
        _row(rows, "constant width", f"a3={a} symmetric F", cert.symmetry_defect, 1e-6, cert.symmetric)
    shown["constant width (a3=0.05)"] = cv.constant_width_curve(cv.SupportFunction(((3, 0.05, 0.0),)), 1000)
    shown["constant width front (a3=0.3)"] = cv.constant_width_curve(cv.SupportFunction(((3, 0.3, 0.0),)), 1000)
    for p, q, a in [(1, 5, 0.1), (2, 5, 0.15), (1, 3, 0.2)]:
        P = cv.RotationalCurveParams(p, q, ((1, a, 0.0),))
        c = cv.rotational_curve(P)
        dres = cv.verify_rotational_duality(c)
        _row(rows, "rotational curve", f"p={p} q={q} beta={a} duality", dres, 1e-7, dres < 1e-7)
        sres = cv.rotational_symmetry_check(c, p, q)
        _row(rows, "rotational curve", f"p={p} q={q} beta={a} symmetry", sres, 1e-8, sres < 1e-8)
    shown["rotational p=2 q=5"] = cv.rotational_curve(cv.RotationalCurveParams(2, 5, ((1, 0.15, 0.0),)))
    rc = cv.radon_curve(cv.RadonSeed((0.05,)))
    rel = cv.radon_relations(rc)
    _row(rows, "radon", "max relation defect", max(rel), 1e-7, max(rel) < 1e-7)
    cert = cv.test_self_dual_curve(rc, cv.Reparam.shift(math.pi / 2))
    _row(rows, "radon", "self-duality residual", cert.residual, 1e-6, cert.residual < 1e-6)
    shown["Radon curve"] = rc
    c, g, phi = cv.cubic_example()
    cert = cv.test_self_dual_curve(c, phi)
    _row(rows, "cubic", "certificate residual", cert.residual, 1e-9, cert.residual < 1e-9)
    shown["cubic"] = c
    return shown


def _figures(outdir, polys, moduli, curves):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .svg import chart_points

    paths = []
    fig, axes = plt.subplots(2, 3, figsize=(11, 7))
    for ax, (name, P) in zip(axes.flat, polys.items()):
        X = chart_points(P.vertices)
        X = np.vstack([X, X[:1]])
        ax.plot(X[:, 0], X[:, 1], "-o", lw=1.2, ms=3)
        ax.set_title(name, fontsize=9)
        ax.set_aspect("equal")
    for ax in axes.flat[len(polys):]:
        ax.axis("off")
    fig.tight_layout()
    paths.append(os.path.join(outdir, "polygons.png"))
    fig.savefig(paths[-1], dpi=110)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (m, n), r in moduli.items():
        s = np.maximum(r.singular_values / r.sigma_ref, 1e-18)
        ax.semilogy(np.arange(1, len(s) + 1), s, "o-", ms=3, label=f"({m},{n}) dim={r.dimension}")
    ax.axhline(cs.NULL_REL, color="grey", ls="--", lw=0.8)
    ax.set_xlabel("index")
    ax.set_ylabel("singular value / reference")
    ax.legend(fontsize=7)
    fig.tight_layout()
    paths.append(os.path.join(outdir, "moduli_spectra.png"))
    fig.savefig(paths[-1], dpi=110)
    plt.close(fig)

    fig, axes = plt.subplots(2, 3, figsize=(11, 7))
    for ax, (name, c) in zip(axes.flat, curves.items()):
        X = chart_points(c.points)
        D = chart_points(cv.dual_curve(c).points) if name != "cubic" else None
        ax.plot(X[:, 0], X[:, 1], lw=1.2, label="curve")
        if D is not None and "rotational" not in name and "Radon" not in name:
            ax.plot(D[:, 0], D[:, 1], "--", lw=0.8, label="dual")
        if name == "cubic":
            ax.set_xlim(-3, 3)
            ax.set_ylim(-3, 3)
        ax.set_title(name, fontsize=9)
        ax.set_aspect("equal")
    for ax in axes.flat[len(curves):]:
        ax.axis("off")
    fig.tight_layout()
    paths.append(os.path.join(outdir, "curves.png"))
    fig.savefig(paths[-1], dpi=110)
    plt.close(fig)
    return paths


def run_report(outdir: str, tol: float = 1e-7, seed: int = 0) -> int:
    os.makedirs(outdir, exist_ok=True)
    rng = np.random.default_rng(seed)
    rows = []
    polys = _polygons(rows, rng, tol)
    moduli = _moduli(rows, rng)
    _structures(rows, rng)
    curves = _curves(rows)
    tsv = os.path.join(outdir, "report.tsv")
    with open(tsv, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, ["group", "item", "value", "tolerance", "status"], delimiter="\t",
                           lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    figs = _figures(outdir, polys, moduli, curves)
    failed = [r for r in rows if r["status"] != "pass"]
    for r in rows:
        print("\t".join(r.values()))
    print(f"wrote {tsv}")
    for f in figs:
        print(f"wrote {f}")
    print(f"{len(rows) - len(failed)}/{len(rows)} checks passed (tolerance {tol:g}); moduli rows are real-generic")
    return 0 if not failed else 1
