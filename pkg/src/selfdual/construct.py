"""Generators for self-dual polygon families and a numerical moduli-dimension estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import projcore as pc
from .errors import (
    ClosureDegenerate,
    ClosureNotFound,
    DegenerateChoice,
    InternalError,
    InvalidBase,
    InvalidParameters,
    InvalidStar,
    NotInscribed,
)
from .polygon import (
    Polygon,
    cross_ratio_coords,
    selfduality_residuals,
    test_self_dual,
)

ANGLE_GUARD = 1e-6
ISOTROPY_GUARD = 1e-8
PUNCTURE_TOL = 1e-6


def regular_polygon(n: int, k: int = 1) -> Polygon:
    """Regular (possibly star) n-gon with vertex ``A_{2j+1} = (cos 2pi jk/n, sin 2pi jk/n, 1)``."""
    if n < 3 or not 1 <= k < n:
        raise ValueError(f"need n >= 3 and 1 <= k < n, got n={n}, k={k}")
    if math.gcd(n, k) != 1:
        raise InvalidStar(f"gcd({k}, {n}) != 1: the star polygon is a multiple traversal")
    a = 2 * np.pi * np.arange(n) * k / n
    return Polygon(np.column_stack([np.cos(a), np.sin(a), np.ones(n)]))


# ---------------------------------------------------------------- chains


@dataclass(frozen=True)
class ChainParams:
    n: int
    angles: tuple
    branch: int = 1

    def __post_init__(self):
        if self.n < 5 or self.n % 2 == 0:
            raise InvalidParameters(f"chain polygons need odd n >= 5, got {self.n}")
        if len(self.angles) != self.n - 3:
            raise InvalidParameters(f"expected {self.n - 3} angles, got {len(self.angles)}")
        if self.branch not in (1, -1):
            raise InvalidParameters("branch must be +1 or -1")
        for i, t in enumerate(self.angles, start=3):
            s = np.sin(t)
            # sin(theta) ~ 0 means theta ~ 0 or pi, i.e. C_i = +-C_{i-2}
            if abs(s) <= ANGLE_GUARD:
                raise InvalidParameters(f"theta_{i} = {t} makes C_{i} coincide with C_{i - 2}")

    @property
    def free_parameters(self) -> int:
        return self.n - 3


def _unit(v):
    return v / np.sqrt(np.sum(np.abs(v) ** 2))


def _form_cross(S, a, b):
    """A vector orthogonal to both ``a`` and ``b`` with respect to the form ``S``."""
    return np.cross(S @ a, S @ b)


def chain_points(params: ChainParams, form=None) -> np.ndarray:
    """The chain ``C_1, ..., C_n`` with ``C_{i+1}`` orthogonal to ``C_i`` cyclically."""
    n = params.n
    S = np.eye(3) if form is None else np.asarray(form)
    if pc.symmetry_defect(S) > 1e-12:
        raise ValueError("the chain construction needs a symmetric form")
    if abs(np.linalg.det(S / np.linalg.norm(S, 2))) <= pc.EPS:
        raise ValueError("the form is degenerate")
    cplx = pc.is_complex(S, np.asarray(params.angles))
    dt = complex if cplx else float

    def q(v):
        return v @ S @ v

    C = [np.array([1.0, 0.0, 0.0], dtype=dt)]
    # C_2: the best-conditioned axis projected into C_1's orthogonal complement
    sc1 = S @ C[0]
    cands = [np.cross(sc1, e) for e in np.eye(3)]
    C.append(_unit(max(cands, key=lambda v: np.linalg.norm(v)).astype(dt)))
    for c in C:
        if abs(q(c)) < ISOTROPY_GUARD:
            raise DegenerateChoice("isotropic pivot in the chain start")
    for t in params.angles:
        a, b = C[-2], C[-1]
        w = _unit(_form_cross(S, b, a))
        if abs(q(w)) < ISOTROPY_GUARD:
            raise DegenerateChoice("isotropic pivot in the chain")
        C.append(_unit(np.cos(t) * a + np.sin(t) * w))
    last = _form_cross(S, C[-1], C[0])
    if np.linalg.norm(last) <= 1e-9:
        raise ClosureDegenerate("C_{n-1} coincides with C_1; no closing point")
    C.append(params.branch * _unit(last))
    return np.array(C)


def chain_relabel(C) -> np.ndarray:
    """Vertices with ``A_{1+(i-1)(n-1)} = C_i``."""
    n = len(C)
    V = np.empty_like(C)
    for i in range(1, n + 1):
        idx = (1 + (i - 1) * (n - 1)) % (2 * n)
        V[(idx - 1) // 2] = C[i - 1]
    return V


def chain_selfdual(params: ChainParams, form=None) -> Polygon:
    """An n-self-dual n-gon built from an orthogonal chain of the symmetric ``form``."""
    C = chain_points(params, form)
    return Polygon(chain_relabel(C))


@dataclass(frozen=True, eq=False)
class SphericalChain:
    polygon: Polygon
    points: np.ndarray  # unit vectors C_1..C_n in chain order


def spherical_chain(params: ChainParams) -> SphericalChain:
    """The chain on the unit sphere: consecutive points are at distance pi/2."""
    if pc.is_complex(np.asarray(params.angles)):
        raise ValueError("spherical chains need real angles")
    C = chain_points(params)
    return SphericalChain(Polygon(chain_relabel(C)), C)


def spherical_distances(points) -> np.ndarray:
    P = np.asarray(points)
    d = np.sum(P * np.roll(P, -1, axis=0), axis=1)
    return np.arccos(np.clip(d, -1.0, 1.0))


# ---------------------------------------------------------------- rotational


@dataclass(frozen=True)
class RotationalParams:
    m: int
    n: int
    seed: tuple = (1.0, 0.0)
    free: tuple = ()

    def __post_init__(self):
        if self.m % 2 != 1 or not 1 <= self.m < self.n:
            raise InvalidParameters(f"need odd m with 1 <= m < n, got m={self.m}, n={self.n}")
        if np.hypot(*self.seed) <= PUNCTURE_TOL:
            raise InvalidParameters("the seed point must differ from the origin")
        if len(self.free) != max(self.d - 2, 0):
            raise InvalidParameters(f"expected {max(self.d - 2, 0)} free parameters, got {len(self.free)}")

    @property
    def d(self) -> int:
        return math.gcd(self.m, self.n)

    @property
    def r(self) -> int:
        return self.n // self.d


def rotational_duality(m: int, n: int):
    """``(M, G)``: ``M @ A`` is the dual line of ``A``; ``G`` is the rotation by 2 pi m/n.

    The dual line is the polar line ``{x : A.x = 1}`` turned clockwise by pi(n-m)/n.
    """
    psi = np.pi * (n - m) / n
    M = pc.rotation(-psi) @ np.diag([1.0, 1.0, -1.0])
    G = pc.rotation(2 * np.pi * m / n)
    return M, G


def _point_on_line(line, t):
    a, b, c = line
    nrm = math.hypot(a, b)
    if nrm <= 1e-12 * max(1.0, abs(c)):
        raise DegenerateChoice("prescribed line is the line at infinity")
    foot = -c * np.array([a, b]) / nrm**2
    return np.array([*(foot + t * np.array([-b, a]) / nrm), 1.0])


def rotational_selfdual(params: RotationalParams) -> Polygon:
    """An m-self-dual n-gon (m < n) following the interleaved orbit construction."""
    m, n, d, r = params.m, params.n, params.d, params.r
    M, G = rotational_duality(m, n)
    two_n = 2 * n
    # d = u m (mod 2n) with u odd is what makes B_{d+1} come with A_1
    us = [u for u in range(2 * r) if (u * m - d) % two_n == 0]
    if len(us) != 1 or us[0] % 2 != 1:
        raise InternalError(f"index bookkeeping failed: d = u m mod 2n gives u = {us}")
    pts: dict[int, np.ndarray] = {}
    lines: dict[int, np.ndarray] = {}

    def place(i, A):
        i %= two_n
        for k, B in pts.items():
            if pc.proj_distance(A, B) <= PUNCTURE_TOL:
                raise DegenerateChoice(f"A_{i or two_n} collides with A_{k or two_n}")
        for j in range(r):
            idx = (i + 2 * j * m) % two_n
            pts[idx] = A
            lines[(idx + m) % two_n] = M @ A
            A = G @ A

    def line(j):
        j %= two_n
        if j not in lines:
            raise InternalError(f"line B_{j or two_n} is not yet available")
        return lines[j]

    place(1, np.array([params.seed[0], params.seed[1], 1.0]))
    if d > 1:
        free = list(params.free)
        place(d, _point_on_line(line(d + 1), free.pop(0)))
        for k in range(1, (d - 1) // 2):
            place(d + 2 * k, _point_on_line(line(d + 2 * k - 1), free.pop(0)))
            place(2 * k + 1, _point_on_line(line(2 * k), free.pop(0)))
        if free:
            raise InternalError("unused free parameters")
        A = np.cross(line(2 * d - 2), line(2 * d))
        if abs(A[2]) <= 1e-12 * np.linalg.norm(A):
            raise DegenerateChoice("the closing vertex lies at infinity")
        place(2 * d - 1, A / A[2])
    if len(pts) != n:
        raise InternalError(f"placed {len(pts)} of {n} vertices")
    V = np.array([pts[(2 * j + 1) % two_n] for j in range(n)])
    return Polygon(V)


def random_rotational_params(m: int, n: int, rng) -> RotationalParams:
    d = math.gcd(m, n)
    ang = rng.uniform(0, 2 * np.pi)
    rad = rng.uniform(0.5, 1.5)
    return RotationalParams(m, n, (rad * math.cos(ang), rad * math.sin(ang)),
                            tuple(rng.uniform(-1.0, 1.0, size=max(d - 2, 0))))


# ---------------------------------------------------------------- Poncelet


@dataclass(frozen=True)
class PonceletResult:
    polygon: Polygon
    offset: float
    radius: float
    winding: int
    residual: float
    angles: np.ndarray


def _poncelet_step(a, c, rho):
    """Next point (as an angle) on the unit circle along the tangent to the inner circle.

    The tangent is the one keeping the inner circle to the left of the chord.
    """
    P = np.array([math.cos(a), math.sin(a)])
    w = c - P
    L = math.hypot(*w)
    th = math.atan2(w[1], w[0]) - math.asin(min(1.0, rho / L))
    u = np.array([math.cos(th), math.sin(th)])
    Q = P - 2 * (P @ u) * u
    da = (math.atan2(Q[1], Q[0]) - a) % (2 * np.pi)
    return a + da


def _orbit(a0, c, rho, n):
    a = [a0]
    for _ in range(n):
        a.append(_poncelet_step(a[-1], c, rho))
    return np.array(a)


def poncelet_search(n: int, family_param: float = 0.0, start_angle: float = 0.0,
                    winding: int = 1, tol: float = 1e-15) -> PonceletResult:
    """Bisect the inner radius until the Poncelet orbit closes after n steps.

    Outer conic: unit circle.  Inner conic: circle centred at ``(family_param, 0)``.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Poncelet polygons need odd n >= 3, got {n}")
    e = float(family_param)
    if not abs(e) < 1:
        raise ValueError("the inner centre must lie inside the unit circle")
    c = np.array([e, 0.0])
    target = 2 * np.pi * winding

    def f(rho):
        a = _orbit(start_angle, c, rho, n)
        return a[-1] - a[0] - target

    lo, hi = 1e-12, 1 - abs(e) - 1e-12
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise ClosureNotFound(f"no closure with winding {winding} for n={n}, offset={e}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            lo = hi = mid
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    rho = 0.5 * (lo + hi)
    a = _orbit(start_angle, c, rho, n)
    res = math.hypot(math.cos(a[-1]) - math.cos(a[0]), math.sin(a[-1]) - math.sin(a[0]))
    if res > 1e-9:
        raise ClosureNotFound(f"bisection stalled with closure residual {res:.3g}")
    a = a[:-1]
    V = np.column_stack([np.cos(a), np.sin(a), np.ones(n)])
    return PonceletResult(Polygon(V), e, rho, winding, res, a)


def poncelet_polygon(n: int, family_param: float = 0.0, start_angle: float = 0.0,
                     winding: int = 1) -> Polygon:
    return poncelet_search(n, family_param, start_angle, winding).polygon


def inscribed_tangent_map(poly: Polygon, conic, tol: float = 1e-8):
    """Fit the map sending each vertex to the tangent line of ``conic`` there."""
    Q = np.asarray(conic)
    U = poly.vertices / np.linalg.norm(poly.vertices, axis=1)[:, None]
    on = np.abs(np.einsum("ij,jk,ik->i", U, Q, U)) / np.linalg.norm(Q, 2)
    if on.max() > tol:
        raise NotInscribed(f"vertex off the conic by {on.max():.3g}")
    fit = pc.fit_projective_map(poly.vertices, U @ Q.T, strict=False)
    return fit.matrix, fit.residual


# ---------------------------------------------------------------- moduli

FD_STEP = 1e-5
NULL_REL = 1e-6
GAP_MIN = 1e3
RICHARDSON_MAX = 0.1


@dataclass(frozen=True, eq=False)
class ModuliReport:
    m: int
    n: int
    base: Polygon
    singular_values: np.ndarray
    nullity: int
    dimension: int
    gap_ratio: float
    sigma_ref: float
    stabilizer_dim: int = 0
    richardson: float = 0.0
    flags: tuple = field(default=())

    @property
    def inconclusive(self) -> bool:
        return bool(self.flags)

    @property
    def scope(self) -> str:
        return "real-generic"


def _tangent_frames(V):
    """Orthonormal bases of the planes orthogonal to each (unit) vertex."""
    frames = []
    for v in V:
        _, _, vh = np.linalg.svd(v[None, :])
        frames.append(vh[1:])
    return np.array(frames)


def _jacobian(fun, V, frames, h):
    n = len(V)
    cols = []
    for j in range(n):
        for k in range(2):
            dV = np.zeros_like(V)
            dV[j] = h * frames[j, k]
            cols.append((fun(V + dV) - fun(V - dV)) / (2 * h))
    return np.array(cols).T


def stabilizer_dimension(V, tol: float = 1e-8) -> int:
    """Dimension of the infinitesimal projective symmetries fixing every vertex."""
    rows = []
    for v in V:
        # X v parallel to v, i.e. (X v) x v = 0, linear in the 9 entries of X
        Kv = np.kron(np.eye(3), v[None, :])
        rows.append(pc._skew(v) @ Kv)
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    null = int(np.sum(s <= tol * s[0])) + max(0, 9 - len(s))
    return null - 1  # the identity acts trivially


def moduli_dimension(m: int, n: int, base: Polygon, step: float = FD_STEP) -> ModuliReport:
    """Estimate dim M_{m,n} at ``base`` from the rank of the self-duality constraints.

    Coordinates: each vertex moves in the plane orthogonal to its unit
    representative (2n parameters).  The constraint map sends a polygon to the
    residuals ``p_i - q_{i+m-1}``, ``q_i - p_{i+m+1}``.  The projective group
    orbit (dimension 8 minus the stabilizer) lies in its kernel.
    """
    if base.field != "real":
        raise InvalidBase("the estimator works with real polygons")
    if base.n != n:
        raise InvalidBase(f"base has {base.n} vertices, expected {n}")
    cert = test_self_dual(base, m)
    if not cert.passed or cert.residual >= 1e-7:
        raise InvalidBase(f"base is not {m}-self-dual (residual {cert.residual:.3g})")
    V = base.vertices / np.linalg.norm(base.vertices, axis=1)[:, None]
    frames = _tangent_frames(V)

    def constraints(W):
        return selfduality_residuals(cross_ratio_coords(Polygon(W)), m)

    def coords(W):
        return cross_ratio_coords(Polygon(W)).as_vector()

    Jc = _jacobian(constraints, V, frames, step)
    Jc2 = _jacobian(constraints, V, frames, 2 * step)
    sigma_ref = float(np.linalg.svd(_jacobian(coords, V, frames, step), compute_uv=False)[0])
    s = np.linalg.svd(Jc, compute_uv=False)
    s2 = np.linalg.svd(Jc2, compute_uv=False)
    dropped = s <= NULL_REL * sigma_ref
    nullity = int(dropped.sum())
    kept = s[~dropped]
    top = kept.min() if len(kept) else sigma_ref
    low = s[dropped].max() if nullity else 0.0
    gap = float(top / low) if low > 0 else math.inf
    rich = float(np.max(np.abs(s2[~dropped] - kept) / kept)) if len(kept) else 0.0
    stab = stabilizer_dimension(V)
    flags = []
    if gap < GAP_MIN:
        flags.append(f"inconclusive gap ratio {gap:.3g}")
    if rich > RICHARDSON_MAX:
        flags.append(f"finite-difference step sensitivity {rich:.3g}")
    return ModuliReport(m, n, base, s, nullity, nullity - 8 + stab, gap, sigma_ref,
                        stab, rich, tuple(flags))
