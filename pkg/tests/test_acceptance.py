"""End-to-end acceptance battery; each test records one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest
import sympy as sp

from selfdual import construct as cs
from selfdual import curves as cv
from selfdual import polycurve as pcv
from selfdual import polygon as pg
from selfdual import projcore as pc
from selfdual.errors import ChartViolation, DegenerateChoice, DegenerateInput


def same_map(A, B):
    a, b = np.ravel(A) / np.linalg.norm(A), np.ravel(B) / np.linalg.norm(B)
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b))


@pytest.fixture(scope="module")
def corpus():
    """(polygon, m, family) for generated self-dual polygons of every family."""
    rng = np.random.default_rng(2024)
    out = []
    for n in (5, 7, 9):
        for k in range(1, n // 2 + 1):
            if math.gcd(n, k) == 1:
                out.append((cs.regular_polygon(n, k), n, "regular"))
    for _ in range(10):
        out.append((pg.random_polygon(5, rng), 5, "random"))
    for _ in range(6):
        ang = np.sort(rng.uniform(0, 2 * np.pi, 5))
        V = np.column_stack([np.cos(ang), 0.6 * np.sin(ang), np.ones(5)])
        if pg.general_position(V) > 1e-3:
            out.append((pg.Polygon(V), 5, "convex pentagon"))
    for n in (5, 7, 9):
        for _ in range(4):
            try:
                P = cs.chain_selfdual(cs.ChainParams(n, tuple(rng.uniform(0.3, 2.8, n - 3))))
            except DegenerateInput:
                continue
            out.append((P, n, "chain"))
    for n in (3, 5, 7, 9):
        for e in (0.0, 0.2, 0.4):
            out.append((cs.poncelet_search(n, e, rng.uniform(0, 1)).polygon, n, "poncelet"))
    for m, n in [(3, 9), (1, 5), (3, 12), (5, 10), (5, 15), (1, 9), (3, 15), (1, 7)]:
        for _ in range(3):
            try:
                P = cs.rotational_selfdual(cs.random_rotational_params(m, n, rng))
            except DegenerateChoice:
                continue
            out.append((P, m, f"rotational({m},{n})"))
    return out


# ---------------------------------------------------------------- 1


def test_01_pentagon_universality(criterion):
    rng = np.random.default_rng(1)
    polys = [pg.random_polygon(5, rng) for _ in range(200)]
    t0 = time.perf_counter()
    res = [pg.test_self_dual(P, 5) for P in polys]
    dt = time.perf_counter() - t0
    worst = max(c.residual for c in res)
    ok = all(c.passed and c.residual < 1e-7 for c in res) and dt < 2.0
    criterion(1, ok, f"200 pentagons, worst residual {worst:.2e}, {dt:.2f} s")
    assert ok


# ---------------------------------------------------------------- 2


def moduli_base(m, n, rng):
    if m == n:
        return cs.chain_selfdual(cs.ChainParams(n, tuple(rng.uniform(0.3, 2.8, n - 3))))
    if math.gcd(m, n) == 1 or (m, n) == (3, 6):
        return cs.regular_polygon(n)
    return cs.rotational_selfdual(cs.random_rotational_params(m, n, rng))


def test_02_moduli_dimensions(criterion):
    rng = np.random.default_rng(2)
    cases = [(1, 7, 0), (5, 5, 2), (7, 7, 4), (3, 9, 2), (3, 6, 0), (5, 10, 2), (3, 12, 2)]
    t0 = time.perf_counter()
    got = {}
    ok = True
    for m, n, expect in cases:
        r = cs.moduli_dimension(m, n, moduli_base(m, n, rng))
        got[(m, n)] = (r.dimension, r.gap_ratio)
        ok &= r.dimension == expect and r.gap_ratio >= 1e3 and not r.inconclusive
    dt = time.perf_counter() - t0
    ok &= dt < 30
    detail = " ".join(f"{k}->{d}" for k, (d, _) in got.items())
    gap = min(g for _, g in got.values())
    criterion(2, ok, f"{detail}; min gap {gap:.1e}; {dt:.1f} s (real-generic)")
    assert ok


# ---------------------------------------------------------------- 3


def test_03_symmetry_dichotomy(criterion, corpus):
    simple = [(P, m) for P, m, _ in corpus if pg.is_simple(P)]
    hits, worst_eq, least_lt = 0, 0.0, math.inf
    for P, m in simple:
        c = pg.test_self_dual(P, m)
        assert c.passed, (P.n, m)
        d = pc.symmetry_defect(c.F)
        if m == P.n:
            worst_eq = max(worst_eq, d)
            hits += d < 1e-6
        else:
            least_lt = min(least_lt, d)
            hits += d > 1e-2
    ok = len(simple) >= 50 and hits == len(simple)
    criterion(3, ok, f"{hits}/{len(simple)} polygons; m=n max defect {worst_eq:.1e}, m<n min defect {least_lt:.2e}")
    assert ok


# ---------------------------------------------------------------- 4


def test_04_shift_and_rotation_law(criterion, corpus):
    worst, count, ok = 0.0, 0, True
    for P, m, _ in corpus:
        if m == P.n:
            continue
        c = pg.test_self_dual(P, m)
        r = pg.shift_law_residual(P, c)
        worst = max(worst, r)
        count += 1
        ok &= c.passed and r < 1e-7 and c.g_order == P.n // math.gcd(m, P.n)
    ok &= count > 0
    criterion(4, ok, f"{count} certificates with m<n, worst shift residual {worst:.1e}")
    assert ok


# ---------------------------------------------------------------- 5


def test_05_canonical_forms(criterion):
    rng = np.random.default_rng(5)
    targets = [("Hphi", pc.H(0.7), 0.7), ("Hphi", pc.H(math.pi / 2), math.pi / 2), ("J", pc.J, None), ("K", pc.K, None)]
    worst, ok = 0.0, True
    for tag, C, phi in targets:
        for _ in range(100):
            P = pg.random_projmap(rng)
            F = P.T @ C @ P * rng.uniform(0.2, 5.0)
            cls, B = pc.canonical_form(F)
            r = pc.congruence_residual(F, cls, B)
            worst = max(worst, r)
            ok &= cls.tag == tag and r < 1e-6
            if phi is not None:
                ok &= abs(cls.phi - phi) < 1e-6
    criterion(5, ok, f"400 congruences, worst residual {worst:.1e}")
    assert ok


# ---------------------------------------------------------------- 6


def bisection_oracle(n):
    """Concentric inner radius closing an n-gon: each chord subtends 2 arccos(r)."""
    lo, hi = 1e-9, 1.0 - 1e-12
    f = lambda r: n * 2 * math.acos(r) - 2 * math.pi  # noqa: E731
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_06_poncelet(criterion):
    ok, worst = True, 0.0
    for n in (3, 5, 7):
        for e in (0.0, 0.3):
            r = cs.poncelet_search(n, e, 0.4)
            c = pg.test_self_dual(r.polygon, n)
            worst = max(worst, r.residual)
            ok &= r.residual < 1e-9 and c.passed and c.residual < 1e-7
    oracle = bisection_oracle(3)
    radius = cs.poncelet_search(3, 0.0, 0.0).radius
    ok &= abs(radius - 0.5) < 1e-6 and abs(radius - oracle) < 1e-6 and abs(oracle - 0.5) < 1e-9
    criterion(6, ok, f"n=3,5,7 closure worst {worst:.1e}; n=3 radius {radius:.9f} (oracle {oracle:.9f})")
    assert ok


# ---------------------------------------------------------------- 7


def test_07_convex_means_definite(criterion, corpus):
    convex, bad = 0, 0
    for P, m, _ in corpus:
        if m != P.n:
            continue
        try:
            if not pg.is_convex(P):
                continue
        except ChartViolation:
            continue  # a vertex at infinity: convexity is not defined in this chart
        c = pg.test_self_dual(P, m)
        if not c.passed:
            continue
        convex += 1
        bad += not pg.definite(c.F)
    ok = convex > 0 and bad == 0
    criterion(7, ok, f"{convex} convex self-dual polygons, {bad} counterexamples")
    assert ok


# ---------------------------------------------------------------- 8


def test_08_structure_counts(criterion):
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    a = pcv.enumerate_selfdual_structures(cs.regular_polygon(5), 5)
    b = pcv.enumerate_selfdual_structures(cs.rotational_selfdual(cs.random_rotational_params(3, 9, rng)), 3)
    dt = time.perf_counter() - t0
    ok = ((a.count, a.total) == (32, 1024) and (b.count, b.total) == (8, 262144)
          and a.agree and b.agree and set(a.constructive) == set(a.structures)
          and set(b.constructive) == set(b.structures) and dt < 60)
    criterion(8, ok, f"{a.count}/{a.total} and {b.count}/{b.total}, sets agree, {dt:.1f} s")
    assert ok


# ---------------------------------------------------------------- 9


SUPPORTS = [
    ((3, 0.05, 0.0),),
    ((3, 0.0, 0.04),),
    ((3, 0.02, 0.01), (5, 0.01, 0.0)),
    ((5, 0.03, 0.0),),
    ((7, 0.01, 0.005),),
    ((3, 0.04, 0.0), (7, 0.0, 0.005)),
    ((1, 0.1, 0.0), (3, 0.03, 0.0)),
    ((3, 0.3, 0.0),),
    ((5, 0.1, 0.05),),
    ((3, 0.01, 0.0), (5, 0.01, 0.0), (9, 0.002, 0.0)),
]


def test_09_constant_width(criterion):
    ok, worst_hd, convex, definite = True, 0.0, 0, 0
    for harm in SUPPORTS:
        h = cv.SupportFunction(harm)
        c = cv.constant_width_curve(h, 2000)
        hd = cv.projective_hausdorff(c.points, cv.dual_curve(c).points)
        cert = cv.test_self_dual_curve(c, cv.Reparam.shift(math.pi))
        worst_hd = max(worst_hd, hd)
        ok &= h.width_identity_exact and hd < 1e-6 and cert.symmetric
        if cv.spherical_convex(c):
            convex += 1
            definite += bool(cert.definite)
            ok &= bool(cert.definite)
    criterion(9, ok, f"10 support functions, worst Hausdorff {worst_hd:.1e}, {definite}/{convex} convex definite")
    assert ok


# ---------------------------------------------------------------- 10


def test_10_rotational_curves(criterion):
    grid = [(p, q, a) for p, q in [(1, 3), (2, 3), (1, 5), (2, 5), (3, 7)] for a in (0.05, 0.2)]
    ok = len(grid) >= 9
    worst = [0.0, 0.0, 0.0]
    for p, q, a in grid:
        params = cv.RotationalCurveParams(p, q, ((1, a, 0.0), (3, 0.3 * a, 0.0)))
        c = cv.rotational_curve(params)
        clo = c.info["closure"]
        dual = cv.verify_rotational_duality(c)
        sym = cv.rotational_symmetry_check(c, p, q)
        g, phi = cv.rotational_certificate(params)
        cert = cv.test_self_dual_curve(c, phi)
        worst = [max(w, x) for w, x in zip(worst, (clo, dual, sym))]
        ok &= (clo < 1e-8 and dual < 1e-7 and sym < 1e-8 and not cert.symmetric
               and cert.fclass is not None and cert.fclass.tag == "Hphi")
    criterion(10, ok, f"{len(grid)} settings; closure {worst[0]:.1e}, duality {worst[1]:.1e}, symmetry {worst[2]:.1e}")
    assert ok


# ---------------------------------------------------------------- 11


def test_11_radon(criterion):
    c = cv.radon_curve(cv.RadonSeed((0.1,)), samples=1000)
    rel = cv.radon_relations(c, samples=1000)
    cert = cv.test_self_dual_curve(c, cv.Reparam.shift(math.pi / 2))
    g, _ = cv.radon_certificate()
    ok = max(rel) < 1e-7 and cert.residual < 1e-6 and same_map(cert.g, g) < 1e-6
    criterion(11, ok, f"relations {max(rel):.1e}, self-duality residual {cert.residual:.1e}")
    assert ok


# ---------------------------------------------------------------- 12


def cubic_identity():
    """Symbolic check that diag(-3, 1, 2) sends gamma(1/t) to the tangent line at gamma(t)."""
    t = sp.symbols("t", nonzero=True)
    gamma = sp.Matrix([t, t**3, 1])
    tangent = gamma.cross(gamma.diff(t))
    image = sp.diag(-3, 1, 2) * gamma.subs(t, 1 / t)
    return sp.simplify(image.cross(tangent)) == sp.zeros(3, 1), tangent


def test_12_cubic(criterion):
    exact, tangent = cubic_identity()
    assert list(tangent) == [-3 * sp.Symbol("t", nonzero=True) ** 2, 1, 2 * sp.Symbol("t", nonzero=True) ** 3]
    c, g, phi = cv.cubic_example(500)
    cert = cv.test_self_dual_curve(c, phi)
    ok = exact and cert.samples >= 450 and cert.residual < 1e-9 and same_map(cert.g, g) < 1e-9
    criterion(12, ok, f"symbolic identity {exact}; residual {cert.residual:.1e} on {cert.samples} samples")
    assert ok


SWAP = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


@pytest.mark.xfail(strict=True, reason="composing with the swap of the 2nd and 3rd coordinates breaks the identity")
def test_12_cubic_with_swap_fails():
    t = sp.symbols("t", nonzero=True)
    gamma = sp.Matrix([t, t**3, 1])
    image = sp.diag(-3, 1, 2) * sp.Matrix(SWAP.astype(int)) * gamma.subs(t, 1 / t)
    print("swapped image x tangent:", sp.simplify(image.cross(gamma.cross(gamma.diff(t)))).T)
    c, g, phi = cv.cubic_example(500)
    dual = cv.dual_curve(c)
    keep = c.regular_mask() & dual.regular_mask()
    src = c.at(phi(c.t))[0][keep]
    res = pc.proj_distances(pc.apply_map(g @ SWAP, src), dual.points[keep]).max()
    assert res < 1e-9


# ---------------------------------------------------------------- 13


def test_13_hexagon_rigidity(criterion):
    rng = np.random.default_rng(13)
    R = cs.regular_polygon(6)
    passes = 0
    for _ in range(100):
        V = R.vertices + np.column_stack([1e-2 * rng.normal(size=(6, 2)), np.zeros(6)])
        P = pg.Polygon(V)
        for m in (1, 3, 5):
            passes += pg.test_self_dual(P, m).passed
    dims = {m: cs.moduli_dimension(m, 6, R).dimension for m in (1, 3, 5)}
    ok = passes == 0 and all(d == 0 for d in dims.values())
    criterion(13, ok, f"{passes}/300 perturbed checks passed; moduli at the regular hexagon {dims} (real-generic)")
    assert ok
