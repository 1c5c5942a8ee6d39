"""Polygonal curves: polygons with a chosen segment on every side and a chosen
pair of vertical angles at every vertex.

Choices are stored as witnesses: a point inside the chosen segment of side
``B_{2j+2}`` (row ``j`` of ``edge_witness``) and a line through ``A_{2j+1}``
inside the chosen angle pair (row ``j`` of ``angle_witness``).  A choice bit
is ``sign(alpha * beta) > 0`` when the witness is written as
``alpha * a + beta * b`` in the canonical lifts of the two endpoints
(two vertices, or two sides for an angle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import projcore as pc
from .errors import Ambiguous, InvalidWitness, TooLarge
from .polygon import Polygon, side_array, test_self_dual

WITNESS_TOL = 1e-9
INCIDENCE_TOL = 1e-8
BRUTE_FORCE_MAX_BITS = 24


def _lifts(P):
    return np.array([pc.normalize(p) for p in P])


def _pencil_coeffs(a, b, w):
    """(alpha, beta) with ``w ~ alpha a + beta b`` and the relative residual."""
    A = np.column_stack([a, b])
    coef, *_ = np.linalg.lstsq(A, w, rcond=None)
    res = np.linalg.norm(A @ coef - w) / np.linalg.norm(w)
    return coef, res


def _bit(a, b, w, what):
    (al, be), res = _pencil_coeffs(a, b, w)
    if res > INCIDENCE_TOL:
        raise InvalidWitness(f"{what} does not lie in the pencil of its endpoints")
    scale = math.hypot(al, be)
    if min(abs(al), abs(be)) <= WITNESS_TOL * scale:
        raise InvalidWitness(f"{what} coincides with an endpoint")
    return bool(al * be > 0)


@dataclass(frozen=True, eq=False)
class PolygonalCurve:
    base: Polygon
    edge_witness: np.ndarray
    angle_witness: np.ndarray

    def __post_init__(self):
        if self.base.field != "real":
            raise ValueError("polygonal curves are real objects")
        n = self.base.n
        for name in ("edge_witness", "angle_witness"):
            W = np.real(np.asarray(getattr(self, name), dtype=float))
            if W.shape != (n, 3):
                raise ValueError(f"{name} must have shape ({n}, 3)")
            object.__setattr__(self, name, W)
        self.bits()  # validates every witness

    @property
    def n(self) -> int:
        return self.base.n

    def vertex_lifts(self):
        return _lifts(self.base.vertices)

    def side_lifts(self):
        return _lifts(side_array(self.base))

    def edge_bits(self) -> np.ndarray:
        V = self.vertex_lifts()
        n = self.n
        return np.array([
            _bit(V[j], V[(j + 1) % n], self.edge_witness[j], f"edge witness on B_{2 * j + 2}")
            for j in range(n)
        ])

    def angle_bits(self) -> np.ndarray:
        S = self.side_lifts()
        # the angle at A_{2j+1} lies between B_{2j} (row j-1) and B_{2j+2} (row j)
        return np.array([
            _bit(S[j - 1], S[j], self.angle_witness[j], f"angle witness at A_{2 * j + 1}")
            for j in range(self.n)
        ])

    def bits(self):
        return tuple(bool(b) for b in self.edge_bits()), tuple(bool(b) for b in self.angle_bits())

    @classmethod
    def from_bits(cls, base: Polygon, edge_bits, angle_bits) -> "PolygonalCurve":
        V = _lifts(base.vertices)
        S = _lifts(side_array(base))
        n = base.n
        sg = lambda b: 1.0 if b else -1.0  # noqa: E731
        E = np.array([V[j] + sg(edge_bits[j]) * V[(j + 1) % n] for j in range(n)])
        A = np.array([S[j - 1] + sg(angle_bits[j]) * S[j] for j in range(n)])
        return cls(base, E, A)


def dual_polycurve(curve: PolygonalCurve) -> PolygonalCurve:
    """Dual curve: angle witnesses become edge points and edge points become angle lines.

    The dual side between ``B_{2j+2}`` and ``B_{2j+4}`` is the vertex ``A_{2j+3}``,
    so its edge witness is the angle witness at ``A_{2j+3}``; the dual angle at
    ``B_{2j+2}`` is witnessed by the edge point on ``B_{2j+2}``.
    """
    return PolygonalCurve(
        Polygon(side_array(curve.base)),
        np.roll(curve.angle_witness, -1, axis=0),
        curve.edge_witness.copy(),
    )


def segment_bit(curve: PolygonalCurve, side_index: int, probe) -> bool:
    """Whether ``probe`` (a point on side ``B_{side_index}``) lies in the chosen segment."""
    if side_index % 2:
        raise ValueError("side indices are even")
    n = curve.n
    j = ((side_index - 2) // 2) % n
    V = curve.vertex_lifts()
    probe = np.real(np.asarray(probe, dtype=float))
    (al, be), res = _pencil_coeffs(V[j], V[(j + 1) % n], probe)
    if res > INCIDENCE_TOL:
        raise ValueError("probe is not on the side line")
    if min(abs(al), abs(be)) <= 1e-9 * math.hypot(al, be):
        raise Ambiguous("probe coincides with an endpoint")
    return bool((al * be > 0) == curve.edge_bits()[j])


def _transfer_tables(base: Polygon, m: int, g):
    """Outcome tables for the self-duality conditions, per (position, bit).

    ``ang[j, b]``: the angle bit at ``A_{2j+2+m}`` hit by ``g`` of the edge witness with
    bit ``b`` on ``B_{2j+2}``.  ``edg[k, b]``: the edge bit on ``B_{2k+1+m}`` hit by the
    point ``g^{-T}`` of the angle witness with bit ``b`` at ``A_{2k+1}``.
    """
    n = base.n
    V = _lifts(base.vertices)
    S = _lifts(side_array(base))
    gi = np.linalg.inv(g).T
    h = (m + 1) // 2  # A_{2j+2+m} is row j + (m+1)/2; B_{2k+1+m} is row k + (m-1)/2
    ang = np.zeros((n, 2), dtype=bool)
    edg = np.zeros((n, 2), dtype=bool)
    for b in (0, 1):
        s = 1.0 if b else -1.0
        for j in range(n):
            w = g @ (V[j] + s * V[(j + 1) % n])
            t = (j + h) % n
            ang[j, b] = _bit(S[t - 1], S[t], w, f"image of edge witness {j}")
        for k in range(n):
            w = gi @ (S[k - 1] + s * S[k])
            t = (k + h - 1) % n
            edg[k, b] = _bit(V[t], V[(t + 1) % n], w, f"image of angle witness {k}")
    return ang, edg, h


def test_self_dual_pc(curve: PolygonalCurve, m: int, cert=None) -> bool:
    """Whether the duality ``A_i -> B_{i+m}`` also matches edges with exterior angles."""
    cert = cert if cert is not None else test_self_dual(curve.base, m)
    if not cert.passed:
        return False
    n = curve.n
    g = np.real(cert.g)
    V, S = curve.vertex_lifts(), curve.side_lifts()
    h = (m + 1) // 2
    ab = curve.angle_bits()
    eb = curve.edge_bits()
    gi = np.linalg.inv(g).T
    for j in range(n):
        t = (j + h) % n
        if _bit(S[t - 1], S[t], g @ curve.edge_witness[j], "image of edge witness") != ab[t]:
            return False
    for k in range(n):
        t = (k + h - 1) % n
        if _bit(V[t], V[(t + 1) % n], gi @ curve.angle_witness[k], "image of angle witness") != eb[t]:
            return False
    return True


test_self_dual_pc.__test__ = False


@dataclass(frozen=True)
class StructureCount:
    count: int
    total: int
    structures: tuple  # sorted (edge_bits, angle_bits) pairs
    constructive: tuple | None
    brute_force: bool

    @property
    def agree(self) -> bool:
        return self.constructive is None or set(self.constructive) == set(self.structures)


def _brute_force(n, ang, edg, h, chunk: int = 1 << 18):
    out = []
    for start in range(0, 1 << (2 * n), chunk):
        codes = np.arange(start, min(start + chunk, 1 << (2 * n)), dtype=np.int64)
        E = ((codes[:, None] >> np.arange(n)) & 1).astype(np.int8)
        A = ((codes[:, None] >> (n + np.arange(n))) & 1).astype(np.int8)
        ok = np.ones(len(codes), dtype=bool)
        for j in range(n):
            ok &= ang[j, E[:, j]] == A[:, (j + h) % n]
        for k in range(n):
            ok &= edg[k, A[:, k]] == E[:, (k + h - 1) % n]
        for c in np.nonzero(ok)[0]:
            out.append((tuple(bool(x) for x in E[c]), tuple(bool(x) for x in A[c])))
    return out


def _constructive(base, m, g, G, ang, edg, h):
    """Free bits on d consecutive sides, transported around by ``G``; angles by duality."""
    n = base.n
    d = math.gcd(m, n)
    V = _lifts(base.vertices)
    # transport of an edge bit on row j to row j+m by G
    move = np.zeros((n, 2), dtype=bool)
    for b in (0, 1):
        s = 1.0 if b else -1.0
        for j in range(n):
            w = G @ (V[j] + s * V[(j + 1) % n])
            t = (j + m) % n
            move[j, b] = _bit(V[t], V[(t + 1) % n], w, "transported edge witness")
    out = []
    for code in range(1 << d):
        E = [None] * n
        for j in range(d):
            E[j] = bool((code >> j) & 1)
            k = j
            for _ in range(n // d - 1):
                nxt = (k + m) % n
                E[nxt] = bool(move[k, int(E[k])])
                k = nxt
        if any(e is None for e in E):
            raise RuntimeError("rotation orbits do not cover every side")
        A = [None] * n
        for j in range(n):
            A[(j + h) % n] = bool(ang[j, int(E[j])])
        # the induced structure must satisfy the angle -> edge conditions as well
        if all(edg[k, int(A[k])] == E[(k + h - 1) % n] for k in range(n)):
            out.append((tuple(E), tuple(A)))
    return out


def enumerate_selfdual_structures(poly: Polygon, m: int, brute_force: bool = True) -> StructureCount:
    """All m-self-dual polygonal curves on ``poly``, by brute force and by construction."""
    cert = test_self_dual(poly, m)
    if not cert.passed:
        raise ValueError(f"polygon is not {m}-self-dual")
    n = poly.n
    g = np.real(cert.g)
    ang, edg, h = _transfer_tables(poly, m, g)
    constructive = None
    if cert.G is not None:
        constructive = tuple(sorted(_constructive(poly, m, g, np.real(cert.G), ang, edg, h)))
    if brute_force:
        if 2 * n > BRUTE_FORCE_MAX_BITS:
            raise TooLarge(f"2n = {2 * n} exceeds the brute-force budget of {BRUTE_FORCE_MAX_BITS} bits")
        structures = tuple(sorted(_brute_force(n, ang, edg, h)))
    elif constructive is not None:
        structures = constructive
    else:
        raise ValueError("no method available: brute force disabled and G is degenerate")
    return StructureCount(len(structures), 1 << (2 * n), structures, constructive, brute_force)
