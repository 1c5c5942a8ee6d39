import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from selfdual import construct as cs
from selfdual import polygon as pg
from selfdual import projcore as pc
from selfdual.errors import ChartViolation, DegenerateInput, GenericityViolation


def square():
    return pg.Polygon(np.array([[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]], float))


# ---------------------------------------------------------------- data model


def test_polygon_index_convention():
    P = cs.regular_polygon(5)
    assert P.row(1) == 0 and P.row(9) == 4 and P.row(11) == 0
    assert np.allclose(P.vertex(3), P.vertices[1])
    assert pc.proj_equal(P.side(2), pc.join(P.vertex(1), P.vertex(3)))
    assert pc.proj_equal(P.side(10), pc.join(P.vertex(9), P.vertex(1)))


def test_sides_of_square_are_incident():
    S = pg.sides(square())
    assert sorted(S) == [2, 4, 6, 8]
    P = square()
    for i, l in S.items():
        assert pc.incidence(P.vertex(i - 1), l) < 1e-12
        assert pc.incidence(P.vertex(i + 1), l) < 1e-12


def test_regular_pentagon_vertices_on_two_sides():
    P = cs.regular_polygon(5)
    S = pg.side_array(P)
    for v in P.vertices:
        assert sum(pc.incidence(v, l) < 1e-12 for l in S) == 2


def test_repeated_vertex_rejected():
    with pytest.raises(DegenerateInput):
        pg.Polygon(np.array([[0, 0, 1], [0, 0, 1], [1, 1, 1], [0, 1, 1]], float))


def test_collinear_consecutive_rejected():
    with pytest.raises(DegenerateInput):
        pg.Polygon(np.array([[0, 0, 1], [1, 0, 1], [2, 0, 1], [0, 1, 1]], float))


def test_polygon_is_immutable():
    P = square()
    with pytest.raises(ValueError):
        P.vertices[0, 0] = 5.0


# ---------------------------------------------------------------- duality


def test_double_dual_heptagons(rng):
    for _ in range(20):
        L = pg.random_polygon(7, rng)
        DD = pg.dual_polygon(pg.dual_polygon(L))
        # the second dual row j is the vertex A_{2j+3}
        assert pc.proj_distances(DD.vertices, np.roll(L.vertices, -1, axis=0)).max() < 1e-9


def test_dual_of_pentagon_is_equivalent(rng):
    L = pg.random_polygon(5, rng)
    fit = pg.fit_duality(L, 5)
    assert fit.residual < 1e-10


def test_dual_cross_ratio_identities_hexagon(rng):
    L = pg.random_polygon(6, rng)
    c = pg.cross_ratio_coords(L)
    d = pg.cross_ratio_coords(pg.dual_polygon(L))
    assert np.allclose(d.p, c.q, rtol=1e-8, atol=1e-10)
    assert np.allclose(d.q, np.roll(c.p, -1), rtol=1e-8, atol=1e-10)


def test_calibration_passes():
    assert pg.calibrate_convention() < 1e-8


# ---------------------------------------------------------------- cross-ratio coordinates


@pytest.mark.parametrize("n,value", [
    (5, (1 + math.sqrt(5)) ** 2 / 4),   # golden ratio squared
    (7, 2 * math.cos(math.pi / 7)),
    (9, 1.6527036446661387),            # frozen regression value
])
def test_regular_coordinates_constant(n, value):
    c = pg.cross_ratio_coords(cs.regular_polygon(n))
    assert np.ptp(c.p) < 1e-12 and np.ptp(c.q) < 1e-12
    assert c.p[0] == pytest.approx(value, rel=1e-12)
    assert c.q[0] == pytest.approx(value, rel=1e-12)


def test_coordinates_projectively_invariant(rng):
    for _ in range(10):
        L = pg.random_polygon(8, rng)
        M = pg.random_projmap(rng)
        a = pg.cross_ratio_coords(L).as_vector()
        b = pg.cross_ratio_coords(L.transformed(M)).as_vector()
        assert np.allclose(a, b, rtol=1e-8, atol=1e-10)


def test_coordinates_five_self_dual_pentagon(rng):
    c = pg.cross_ratio_coords(pg.random_polygon(5, rng))
    for i in range(1, 11, 2):
        assert c.at(i)[0] == pytest.approx(c.at(i + 4)[1], rel=1e-8)
        assert c.at(i)[1] == pytest.approx(c.at(i + 6)[0], rel=1e-8)


def test_genericity_violation():
    # rows 1, 2, 4, 5 collinear: sides B_4 and B_10 coincide without three consecutive collinear vertices
    V = np.array([[2, 2, 1], [0, 0, 1], [1, 0, 1], [2, -2, 1], [3, 0, 1], [4, 0, 1]], float)
    with pytest.raises(GenericityViolation) as exc:
        pg.cross_ratio_coords(pg.Polygon(V))
    assert exc.value.index == 1


def test_periodicity_of_self_dual_coordinates(rng):
    P = cs.rotational_selfdual(cs.random_rotational_params(3, 9, rng))
    c = pg.cross_ratio_coords(P)
    for i in range(1, 19, 2):
        assert c.at(i)[0] == pytest.approx(c.at(i + 6)[0], rel=1e-7)
        assert c.at(i)[1] == pytest.approx(c.at(i + 6)[1], rel=1e-7)


# ---------------------------------------------------------------- self-duality tests


@pytest.mark.parametrize("m", [1, 3, 5, 7])
def test_regular_heptagon_every_m(m):
    c = pg.test_self_dual(cs.regular_polygon(7), m)
    assert c.passed and c.residual < 1e-7


def test_random_pentagons_pass(rng):
    for _ in range(100):
        c = pg.test_self_dual(pg.random_polygon(5, rng), 5)
        assert c.passed and c.residual < 1e-7


@pytest.mark.parametrize("m", [1, 3, 5])
def test_random_hexagon_fails(rng, m):
    c = pg.test_self_dual(pg.random_polygon(6, rng), m)
    assert not c.passed


def test_invalid_m():
    with pytest.raises(ValueError):
        pg.test_self_dual(cs.regular_polygon(5), 2)
    with pytest.raises(ValueError):
        pg.test_self_dual(cs.regular_polygon(5), 7)


def test_triangles_and_quadrilaterals_skip_cross_ratios():
    c = pg.test_self_dual(cs.regular_polygon(3), 3)
    assert c.passed and c.cross_residual is None
    assert any("skipped" in n for n in c.notes)


def test_methods_agree_on_fail(rng):
    c = pg.test_self_dual(pg.random_polygon(7, rng), 7)
    assert not c.passed and c.cross_residual > 1e-4 and c.residual > 1e-5


def test_chain_heptagon_symmetric_form(rng):
    P = cs.chain_selfdual(cs.ChainParams(7, (0.9, 1.7, 2.2, 0.6)))
    c = pg.test_self_dual(P, 7)
    F = pg.recover_form(P, c)
    assert pc.symmetry_defect(F) < 1e-6


def test_rotational_nonagon_hphi(rng):
    P = cs.rotational_selfdual(cs.random_rotational_params(3, 9, rng))
    c = pg.test_self_dual(P, 3)
    assert c.passed and not c.symmetric
    assert c.fclass.tag == "Hphi"
    r = 3
    x = r * c.fclass.phi / math.pi
    assert abs(x - round(x)) < 1e-6
    for s in range(1, r):
        y = s * c.fclass.phi / math.pi
        assert abs(y - round(y)) > 1e-3


def test_regular_pentagon_definite():
    c = pg.test_self_dual(cs.regular_polygon(5), 5)
    assert c.symmetric and pg.definite(c.F)


def test_recover_form_requires_pass(rng):
    P = pg.random_polygon(6, rng)
    c = pg.test_self_dual(P, 3)
    with pytest.raises(ValueError):
        pg.recover_form(P, c)


def test_shift_law(rng):
    for m, n in [(3, 9), (1, 7), (3, 12), (5, 10)]:
        P = cs.rotational_selfdual(cs.random_rotational_params(m, n, rng))
        c = pg.test_self_dual(P, m)
        assert pg.shift_law_residual(P, c) < 1e-7
        assert c.g_order == n // math.gcd(m, n)


def test_odd_multiplier(rng):
    P = cs.rotational_selfdual(cs.random_rotational_params(3, 9, rng))
    assert pg.test_self_dual(P, 9).passed


def test_complex_pentagon_passes(rng):
    V = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    P = pg.Polygon(V)
    assert P.field == "complex"
    c = pg.test_self_dual(P, 5)
    assert c.passed and c.residual < 1e-7


# ---------------------------------------------------------------- simplicity and convexity


def test_is_simple():
    P = cs.regular_polygon(5)
    assert pg.is_simple(P)
    twice = pg.Polygon(np.vstack([P.vertices, P.vertices]))
    assert not pg.is_simple(twice)


def test_random_nonagon_simple(rng):
    assert pg.is_simple(pg.random_polygon(9, rng))


def test_is_convex():
    assert pg.is_convex(cs.regular_polygon(5))
    assert not pg.is_convex(cs.regular_polygon(5, 2))


def test_convex_random_sorted(rng):
    for _ in range(10):
        ang = np.sort(rng.uniform(0, 2 * np.pi, 7))
        V = np.column_stack([np.cos(ang), np.sin(ang), np.ones(7)])
        if pg.general_position(V) < 1e-4:
            continue
        assert pg.is_convex(pg.Polygon(V))


def test_convex_chart_violation():
    V = np.array([[1, 0, 0], [0, 1, 1], [-1, 0, 1], [0, -1, 1]], float)
    with pytest.raises(ChartViolation):
        pg.is_convex(pg.Polygon(V))


@given(st.integers(5, 9), st.integers(0, 2**32 - 1))
def test_projective_image_keeps_certificate(n, seed):
    rng = np.random.default_rng(seed)
    k = 2 if n % 2 else 1
    P = cs.regular_polygon(n, k if math.gcd(n, k) == 1 else 1)
    Q = P.transformed(pg.random_projmap(rng))
    m = n if n % 2 else n - 1
    assert pg.test_self_dual(Q, m).passed


def test_triangle_duality_is_definite(rng):
    for _ in range(10):
        P = pg.random_polygon(3, rng)
        c = pg.test_self_dual(P, 3)
        # the vertices are an orthonormal frame of the chosen form
        G = P.vertices @ c.F @ P.vertices.T
        assert np.allclose(G / G[0, 0], np.eye(3), atol=1e-9)
        assert c.symmetric and pg.definite(c.F)
