import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from selfdual import construct as cs
from selfdual import polygon as pg
from selfdual import projcore as pc
from selfdual.errors import (
    ClosureNotFound,
    DegenerateChoice,
    DegenerateInput,
    InvalidBase,
    InvalidParameters,
    InvalidStar,
    NotInscribed,
)

angle = st.floats(0.05, math.pi - 0.05)


# ---------------------------------------------------------------- regular


def test_regular_pentagon_convex_and_self_dual():
    P = cs.regular_polygon(5, 1)
    assert pg.is_convex(P)
    assert pg.test_self_dual(P, 5).passed


def test_star_pentagon_self_dual():
    P = cs.regular_polygon(5, 2)
    assert not pg.is_convex(P)
    assert pg.test_self_dual(P, 5).passed


def test_regular_hexagon_three_self_dual():
    assert pg.test_self_dual(cs.regular_polygon(6), 3).passed


def test_regular_vertex_formula():
    P = cs.regular_polygon(7, 3)
    j = 4
    a = 2 * math.pi * j * 3 / 7
    assert pc.proj_equal(P.vertex(2 * j + 1), [math.cos(a), math.sin(a), 1])


def test_invalid_star():
    with pytest.raises(InvalidStar):
        cs.regular_polygon(6, 2)


# ---------------------------------------------------------------- chains


def test_chain_pentagon_example():
    P = cs.chain_selfdual(cs.ChainParams(5, (1.1, 1.1), 1))
    c = pg.test_self_dual(P, 5)
    assert c.passed and c.symmetric
    assert c.fclass.tag == "Symmetric" and c.fclass.definite


def test_chain_zero_angle_rejected():
    with pytest.raises(InvalidParameters):
        cs.ChainParams(5, (0.0, 1.0))
    with pytest.raises(InvalidParameters):
        cs.ChainParams(5, (math.pi, 1.0))


def test_chain_parameter_count():
    assert cs.ChainParams(7, (0.5, 1.0, 1.5, 2.0)).free_parameters == 4
    with pytest.raises(InvalidParameters):
        cs.ChainParams(7, (0.5, 1.0))
    with pytest.raises(InvalidParameters):
        cs.ChainParams(6, (0.5, 1.0, 1.5))


@settings(max_examples=40)
@given(st.sampled_from([5, 7, 9]), st.data(), st.sampled_from([1, -1]))
def test_chain_always_n_self_dual(n, data, branch):
    ang = tuple(data.draw(angle) for _ in range(n - 3))
    C = cs.chain_points(cs.ChainParams(n, ang, branch))
    # cyclic orthogonality of the chain
    assert np.abs(np.sum(C * np.roll(C, -1, axis=0), axis=1)).max() < 1e-12
    try:
        P = cs.chain_selfdual(cs.ChainParams(n, ang, branch))
    except DegenerateInput:
        return  # rare parameter choices make consecutive vertices collinear
    c = pg.test_self_dual(P, n)
    assert c.passed and c.residual < 1e-7 and c.symmetric


def test_chain_indefinite_form(rng):
    S = np.diag([1.0, 1.0, -1.0])
    P = cs.chain_selfdual(cs.ChainParams(5, (0.7, 1.9)), form=S)
    c = pg.test_self_dual(P, 5)
    assert c.passed and c.symmetric and not c.fclass.definite


def test_chain_complex_angles():
    P = cs.chain_selfdual(cs.ChainParams(5, (0.7 + 0.2j, 1.3 - 0.1j)))
    assert P.field == "complex"
    c = pg.test_self_dual(P, 5)
    assert c.passed and c.symmetric


def test_spherical_chain_distances(rng):
    for _ in range(10):
        sc = cs.spherical_chain(cs.ChainParams(7, tuple(rng.uniform(0.2, 2.9, 4))))
        d = cs.spherical_distances(sc.points)
        assert np.abs(d - math.pi / 2).max() < 1e-9
        assert pg.test_self_dual(sc.polygon, 7).passed


# ---------------------------------------------------------------- rotational


def test_rotational_nonagon_three_and_nine(rng):
    P = cs.rotational_selfdual(cs.random_rotational_params(3, 9, rng))
    assert pg.test_self_dual(P, 3).passed
    assert pg.test_self_dual(P, 9).passed


def test_rotational_one_seven_is_regular(rng):
    P = cs.rotational_selfdual(cs.random_rotational_params(1, 7, rng))
    c = pg.cross_ratio_coords(P)
    assert np.ptp(c.p) < 1e-9 and np.ptp(c.q) < 1e-9
    Rs = [pg.cross_ratio_coords(cs.regular_polygon(7, k)).p[0] for k in (1, 2, 3)]
    assert min(abs(c.p[0] - x) for x in Rs) < 1e-9


def test_rotational_dodecagon_centrally_symmetric(rng):
    P = cs.rotational_selfdual(cs.random_rotational_params(3, 12, rng))
    V = pg.affine_chart(P.vertices)
    # rotation by pi moves A_i to A_{i+n}, i.e. row j to row j + n/2
    assert np.abs(-V - np.roll(V, -6, axis=0)).max() < 1e-9


@pytest.mark.parametrize("m,n", [(3, 9), (1, 5), (3, 12), (3, 6), (5, 10), (5, 15), (3, 15), (1, 9)])
def test_rotational_family_passes(rng, m, n):
    for _ in range(5):
        P = cs.rotational_selfdual(cs.random_rotational_params(m, n, rng))
        c = pg.test_self_dual(P, m)
        assert c.passed and c.residual < 1e-7
        assert not c.symmetric and c.fclass.tag == "Hphi"
        assert c.g_order == n // math.gcd(m, n)


def test_rotational_parameter_count():
    p = cs.RotationalParams(5, 15, (1.0, 0.2), (0.1, -0.3, 0.4))
    assert p.d == 5 and 2 + len(p.free) == p.d
    with pytest.raises(InvalidParameters):
        cs.RotationalParams(5, 15, (1.0, 0.2), (0.1,))
    with pytest.raises(InvalidParameters):
        cs.RotationalParams(4, 15)
    with pytest.raises(InvalidParameters):
        cs.RotationalParams(3, 9, (0.0, 0.0), (0.1,))


def test_rotational_puncture_collision():
    # with seed (1, 0) the foot point of the prescribed line B_4 is an already placed vertex
    with pytest.raises(DegenerateChoice):
        cs.rotational_selfdual(cs.RotationalParams(3, 9, (1.0, 0.0), (0.0,)))
    assert pg.test_self_dual(cs.rotational_selfdual(cs.RotationalParams(3, 9, (1.0, 0.0), (0.5,))), 3)


def test_rotational_duality_matrices():
    M, G = cs.rotational_duality(3, 9)
    assert pc.map_order(G, 20) == 3
    assert np.allclose(M @ M.T, np.eye(3))


# ---------------------------------------------------------------- Poncelet


def test_poncelet_triangle_concentric():
    r = cs.poncelet_search(3, 0.0, 0.3)
    assert r.residual < 1e-9
    assert r.radius == pytest.approx(0.5, abs=1e-6)
    assert pg.test_self_dual(r.polygon, 3).passed


def test_poncelet_regular_pentagon_radii():
    assert cs.poncelet_search(5, 0.0, 0.0, 1).radius == pytest.approx(math.cos(math.pi / 5), abs=1e-9)
    assert cs.poncelet_search(5, 0.0, 0.0, 2).radius == pytest.approx(math.cos(2 * math.pi / 5), abs=1e-9)


@pytest.mark.parametrize("n", [5, 7, 9])
def test_poncelet_offset_closes_and_passes(n):
    r = cs.poncelet_search(n, 0.3, 0.2)
    assert r.residual < 1e-9
    c = pg.test_self_dual(r.polygon, n)
    assert c.passed and c.residual < 1e-7


def test_poncelet_tangency():
    r = cs.poncelet_search(7, 0.25, 1.0)
    V = pg.affine_chart(r.polygon.vertices)
    a, b = V, np.roll(V, -1, axis=0)
    centre = np.array([r.offset, 0.0])
    e, w = b - a, centre - a
    d = np.abs(e[:, 0] * w[:, 1] - e[:, 1] * w[:, 0]) / np.linalg.norm(e, axis=1)
    assert np.abs(d - r.radius).max() < 1e-9


def test_poncelet_no_closure():
    with pytest.raises(ClosureNotFound):
        cs.poncelet_search(5, 0.0, 0.0, 3)
    with pytest.raises(ValueError):
        cs.poncelet_search(4)


def test_inscribed_tangent_map_pentagon():
    conic = np.diag([1.0, 1.0, -1.0])
    g, res = cs.inscribed_tangent_map(cs.regular_polygon(5), conic)
    assert res < 1e-10
    assert np.allclose(g, pc.normalize_matrix(conic), atol=1e-10)


def test_inscribed_tangent_map_random(rng):
    ang = rng.uniform(0, 2 * np.pi, 7)
    V = np.column_stack([np.cos(ang), np.sin(ang), np.ones(7)])
    try:
        P = pg.Polygon(V)
    except DegenerateInput:
        pytest.skip("degenerate draw")
    _, res = cs.inscribed_tangent_map(P, np.diag([1.0, 1.0, -1.0]))
    assert res < 1e-8


def test_inscribed_tangent_map_off_conic():
    sq = pg.Polygon(np.array([[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]], float))
    with pytest.raises(NotInscribed):
        cs.inscribed_tangent_map(sq, np.diag([1.0, 1.0, -1.0]))


# ---------------------------------------------------------------- moduli


def test_moduli_pentagon(rng):
    r = cs.moduli_dimension(5, 5, pg.random_polygon(5, rng))
    assert r.dimension == 2 and not r.inconclusive and r.scope == "real-generic"


def test_moduli_nonagon(rng):
    P = cs.rotational_selfdual(cs.random_rotational_params(3, 9, rng))
    r = cs.moduli_dimension(3, 9, P)
    assert r.dimension == 2 and r.gap_ratio >= 1e3


def test_moduli_hexagon():
    r = cs.moduli_dimension(3, 6, cs.regular_polygon(6))
    assert r.dimension == 0 and not r.inconclusive


@pytest.mark.parametrize("n", [5, 7, 9])
def test_moduli_coprime_is_zero(n):
    r = cs.moduli_dimension(1, n, cs.regular_polygon(n))
    assert r.dimension == 0 and not r.inconclusive


def test_moduli_rejects_non_self_dual(rng):
    with pytest.raises(InvalidBase):
        cs.moduli_dimension(3, 6, pg.random_polygon(6, rng))
    with pytest.raises(InvalidBase):
        cs.moduli_dimension(5, 7, cs.regular_polygon(5))


def test_stabilizer_trivial_for_labelled_frames():
    assert cs.stabilizer_dimension(cs.regular_polygon(6).vertices) == 0
    # three points: the diagonal maps in their frame fix each of them
    assert cs.stabilizer_dimension(np.eye(3)) == 2
