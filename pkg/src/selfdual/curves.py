"""Closed parametrized curves in the projective plane, curve duality and the
self-dual curve families: constant width pi/2 on the sphere, rotationally
symmetric curves, Radon curves and the cuspidal cubic.

Curves are sampled: ``t`` is a uniform grid on ``[0, period)``, ``points`` and
``derivs`` hold homogeneous coordinates and their parameter derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from . import projcore as pc
from .errors import (
    ClosureFailure,
    IncompatibleSeed,
    InvalidParameters,
    NotConvexSeed,
    SingularSample,
    TanSingularity,
)

CUSP_TOL = 1e-8
CUSP_EXCLUSION = 1e-2


@dataclass(frozen=True, eq=False)
class ParamCurve:
    t: np.ndarray
    points: np.ndarray
    derivs: np.ndarray
    period: float
    derivs2: np.ndarray | None = None
    cusps: np.ndarray | None = None  # bool mask of tagged samples
    tag: str = ""
    evaluator: Callable | None = None  # t -> (points, derivs, derivs2)
    lift: np.ndarray | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cusps is None:
            object.__setattr__(self, "cusps", tag_cusps(self.points, self.derivs))

    @property
    def N(self) -> int:
        return len(self.t)

    def at(self, s):
        """Points, first and second derivatives at arbitrary parameters."""
        s = np.asarray(s, dtype=float)
        if self.evaluator is not None:
            return self.evaluator(s)
        h = self.period / self.N
        k = (s % self.period) / h
        idx = np.rint(k).astype(int)
        if np.max(np.abs(k - idx)) > 1e-9:
            raise ValueError("parameters off the sample grid and no analytic evaluator")
        idx %= self.N
        d2 = None if self.derivs2 is None else self.derivs2[idx]
        return self.points[idx], self.derivs[idx], d2

    def regular_mask(self, exclusion: float = CUSP_EXCLUSION) -> np.ndarray:
        """Samples farther than ``exclusion`` (in parameter) from every tagged sample."""
        if not np.any(self.cusps):
            return np.ones(self.N, dtype=bool)
        tc = self.t[self.cusps]
        d = np.abs(self.t[:, None] - tc[None, :]) % self.period
        d = np.minimum(d, self.period - d)
        return d.min(axis=1) > exclusion


def tag_cusps(points, derivs, tol: float = CUSP_TOL) -> np.ndarray:
    P, D = np.asarray(points), np.asarray(derivs)
    cr = np.linalg.norm(np.cross(P, D), axis=1)
    scale = np.linalg.norm(P, axis=1) * np.sqrt(np.mean(np.linalg.norm(D, axis=1) ** 2))
    return cr < tol * scale


def _periodic_diff(Y, period):
    """Spectral derivative of uniformly sampled periodic data along axis 0."""
    N = len(Y)
    k = np.fft.fftfreq(N, d=period / N) * 2 * np.pi
    Yh = np.fft.fft(Y, axis=0)
    ik = 1j * k
    if N % 2 == 0:
        ik[N // 2] = 0.0
    return np.real(np.fft.ifft(ik.reshape(-1, *([1] * (Y.ndim - 1))) * Yh, axis=0))


@dataclass(frozen=True)
class Reparam:
    kind: str  # "shift", "involution" (t -> a - t) or "mobius" on t = tan(s/2)
    params: tuple

    @classmethod
    def shift(cls, c):
        return cls("shift", (float(c),))

    @classmethod
    def involution(cls, a):
        return cls("involution", (float(a),))

    @classmethod
    def mobius(cls, a, b, c, d):
        if a * d - b * c == 0:
            raise ValueError("singular Moebius map")
        return cls("mobius", (a, b, c, d))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "shift":
            return t + self.params[0]
        if self.kind == "involution":
            return self.params[0] - t
        if self.kind == "mobius":
            a, b, c, d = self.params
            x, y = np.sin(t / 2), np.cos(t / 2)
            return 2 * np.arctan2(a * x + b * y, c * x + d * y)
        raise ValueError(f"unknown reparametrization kind {self.kind!r}")

    def __str__(self):
        return f"{self.kind}{self.params}"


def dual_curve(curve: ParamCurve) -> ParamCurve:
    """Tangent-line covectors ``gamma x gamma'``; at tagged cusps the limit ``gamma x gamma''``."""
    P, D = curve.points, curve.derivs
    D2 = curve.derivs2 if curve.derivs2 is not None else _periodic_diff(D, curve.period)
    X = np.cross(P, D)
    dX = np.cross(P, D2)
    cusp = curve.cusps
    if np.any(cusp):
        X[cusp] = dX[cusp]
    nrm = np.linalg.norm(X, axis=1)
    scale = np.linalg.norm(P, axis=1) * np.sqrt(np.mean(np.linalg.norm(D, axis=1) ** 2))
    bad = (nrm <= 1e-14 * scale) & ~cusp
    if np.any(bad):
        raise SingularSample(f"tangent line undefined at t = {curve.t[bad][0]:.6g}")
    # inflections of the curve (det(g, g', g'') = 0) are cusps of the dual
    det = np.einsum("ij,ij->i", np.cross(P, D), D2)
    evaluator = None
    if curve.evaluator is not None:
        ev = curve.evaluator

        def evaluator(s):
            p, d, d2 = ev(s)
            if d2 is None:
                raise ValueError("dual evaluation needs second derivatives")
            return np.cross(p, d), np.cross(p, d2), None

    dual_cusps = np.abs(det) < CUSP_TOL * np.max(np.abs(det)) if np.any(det) else None
    return ParamCurve(curve.t, X, dX, curve.period, None, dual_cusps,
                      f"dual({curve.tag})", evaluator)


@dataclass(frozen=True, eq=False)
class CurveCertificate:
    g: np.ndarray
    residual: float
    F: np.ndarray
    symmetric: bool
    definite: bool | None
    fclass: pc.FormClass | None
    samples: int
    phi: Reparam

    @property
    def symmetry_defect(self) -> float:
        return pc.symmetry_defect(self.F)


def test_self_dual_curve(curve: ParamCurve, phi: Reparam, sym_tol: float = 1e-6,
                         max_samples: int = 2000) -> CurveCertificate:
    """Fit ``g`` with ``g(gamma(phi(t))) = gamma*(t)`` and measure the residual."""
    dual = dual_curve(curve)
    keep = curve.regular_mask() & dual.regular_mask()
    s = phi(curve.t)
    src, _, _ = curve.at(s)
    # the source point must not be a cusp region either
    src_reg = ParamCurve(s, src, curve.at(s)[1], curve.period).cusps
    keep &= ~src_reg
    idx = np.nonzero(keep)[0]
    if len(idx) > max_samples:
        idx = idx[np.linspace(0, len(idx) - 1, max_samples).astype(int)]
    fit = pc.fit_projective_map(src[idx], dual.points[idx], strict=True)
    g = np.real_if_close(fit.matrix)
    img = pc.apply_map(g, src[idx])
    res = float(pc.proj_distances(img, dual.points[idx]).max())
    F = g.T
    sym = pc.symmetry_defect(F) < sym_tol
    definite = None
    if sym and not np.iscomplexobj(F):
        lam = np.linalg.eigvalsh(0.5 * (F + F.T))
        definite = bool(np.all(lam > 0) or np.all(lam < 0))
    try:
        fclass, _ = pc.canonical_form(F, sym_tol=sym_tol)
    except Exception:
        fclass = None
    return CurveCertificate(g, res, F, bool(sym), definite, fclass, len(idx), phi)


test_self_dual_curve.__test__ = False


def _seg_quadratic_dist(x, Y, k):
    """Distance from unit vector ``x`` to the quadratic through Y[k-1], Y[k], Y[k+1]."""
    n = len(Y)
    a, b, c = Y[(k - 1) % n], Y[k % n], Y[(k + 1) % n]
    s = np.linspace(-1.0, 1.0, 41)[:, None]
    Q = b + 0.5 * s * (c - a) + 0.5 * s**2 * (a - 2 * b + c)
    Q /= np.linalg.norm(Q, axis=1)[:, None]
    return float(np.min(np.linalg.norm(Q - x, axis=1)))


def projective_hausdorff(P, Q, refine: bool = True) -> float:
    """Hausdorff distance between two sampled closed curves on the sphere mod +-1."""

    def directed(X, Y):
        X = X / np.linalg.norm(X, axis=1)[:, None]
        Y = Y / np.linalg.norm(Y, axis=1)[:, None]
        tree = cKDTree(np.vstack([Y, -Y]))
        d, j = tree.query(X)
        if not refine:
            return float(d.max())
        n = len(Y)
        best = d.copy()
        for i in np.argsort(d)[::-1][: min(len(d), 200)]:
            sgn = 1.0 if j[i] < n else -1.0
            best[i] = min(d[i], _seg_quadratic_dist(X[i], sgn * Y, j[i] % n))
        # refinement only ever lowers the worst distances
        return float(best.max())

    return max(directed(np.asarray(P, float), np.asarray(Q, float)),
               directed(np.asarray(Q, float), np.asarray(P, float)))


# ---------------------------------------------------------------- constant width


@dataclass(frozen=True)
class SupportFunction:
    """``h(theta) = pi/4 + sum_k a_k cos(k theta) + b_k sin(k theta)``."""

    harmonics: tuple = ()  # (k, a_k, b_k)
    allow_even: bool = False

    def __post_init__(self):
        for k, _, _ in self.harmonics:
            if k < 1 or int(k) != k:
                raise InvalidParameters(f"harmonic order must be a positive integer, got {k}")
            if k % 2 == 0 and not self.allow_even:
                raise InvalidParameters(f"even harmonic {k} breaks the width identity")

    @property
    def width_identity_exact(self) -> bool:
        """Coefficient-level check of ``h(theta) + h(theta + pi) = pi/2``."""
        return all(k % 2 == 1 or (a == 0 and b == 0) for k, a, b in self.harmonics)

    def __call__(self, th, order: int = 0):
        th = np.asarray(th, dtype=float)
        out = np.full_like(th, math.pi / 4 if order == 0 else 0.0)
        for k, a, b in self.harmonics:
            c, s = np.cos(k * th), np.sin(k * th)
            # derivatives of cos/sin cycle with period 4
            for _ in range(order):
                c, s = -k * s, k * c
            out = out + a * c + b * s
        return out


def _constant_width_eval(h: SupportFunction):
    def ev(th):
        th = np.asarray(th, dtype=float)
        p = h(th) - math.pi / 4
        p1, p2, p3 = h(th, 1), h(th, 2), h(th, 3)
        z = np.zeros_like(th)
        er = np.stack([np.cos(th), np.sin(th), z], 1)
        et = np.stack([-np.sin(th), np.cos(th), z], 1)
        e3 = np.broadcast_to([0.0, 0.0, 1.0], er.shape)
        cp, sp = np.cos(p)[:, None], np.sin(p)[:, None]
        P1, P2, P3 = p1[:, None], p2[:, None], p3[:, None]
        Nv = cp * er + sp * e3
        N1 = -P1 * sp * er + cp * et + P1 * cp * e3
        N2 = er * (-P2 * sp - P1**2 * cp - cp) + et * (-2 * P1 * sp) + e3 * (P2 * cp - P1**2 * sp)
        # third derivative of N, by differentiating the coefficients of N2
        N3 = (
            er * (-P3 * sp - 3 * P1 * P2 * cp + P1**3 * sp + 3 * P1 * sp)
            + et * (-3 * P2 * sp - 3 * P1**2 * cp - cp)
            + e3 * (P3 * cp - 3 * P1 * P2 * sp - P1**3 * cp)
        )
        L = np.linalg.norm(N1, axis=1)[:, None]
        L1 = np.einsum("ij,ij->i", N1, N2)[:, None] / L
        L2 = (np.einsum("ij,ij->i", N2, N2) + np.einsum("ij,ij->i", N1, N3))[:, None] / L - L1**2 / L
        C = np.cross(Nv, N1)
        C1 = np.cross(Nv, N2)
        C2 = np.cross(N1, N2) + np.cross(Nv, N3)
        Mv = C / L
        M1 = C1 / L - C * L1 / L**2
        M2 = C2 / L - 2 * C1 * L1 / L**2 - C * L2 / L**2 + 2 * C * L1**2 / L**3
        r2 = math.sqrt(2.0)
        return (Mv + Nv) / r2, (M1 + N1) / r2, (M2 + N2) / r2

    return ev


def constant_width_curve(h: SupportFunction, samples: int = 2000) -> ParamCurve:
    """Spherical front of constant width pi/2 built from the support function ``h``.

    With ``p = h - pi/4`` the unit field ``N = cos p e_r + sin p e_3`` and
    ``M = N x N' / |N'|``, the curve is ``A = (M + N)/sqrt 2``.  Its polar curve
    ``A x A'`` is ``(M - N)/sqrt 2``, which equals ``A(theta + pi)`` when ``h``
    has only odd harmonics.  Returned on the unit sphere, read as points of RP^2.
    """
    th = 2 * np.pi * np.arange(samples) / samples
    ev = _constant_width_eval(h)
    A, A1, A2 = ev(th)
    return ParamCurve(th, A, A1, 2 * np.pi, A2, None, "constant-width", ev, lift=A,
                      info={"support": h})


def spherical_circle(radius: float, samples: int = 2000) -> ParamCurve:
    """Circle of spherical radius ``radius`` around the north pole."""
    th = 2 * np.pi * np.arange(samples) / samples

    def ev(t):
        t = np.asarray(t, dtype=float)
        s, c = math.sin(radius), math.cos(radius)
        z = np.zeros_like(t)
        P = np.stack([s * np.cos(t), s * np.sin(t), c + z], 1)
        D = np.stack([-s * np.sin(t), s * np.cos(t), z], 1)
        D2 = np.stack([-s * np.cos(t), -s * np.sin(t), z], 1)
        return P, D, D2

    P, D, D2 = ev(th)
    return ParamCurve(th, P, D, 2 * np.pi, D2, None, f"circle({radius:g})", ev, lift=P)


def recovered_support(curve: ParamCurve):
    """Azimuths and support values read off a spherical front and its polar curve."""
    A = curve.points / np.linalg.norm(curve.points, axis=1)[:, None]
    B = np.cross(A, curve.derivs)
    B /= np.linalg.norm(B, axis=1)[:, None]
    # make the polar field continuous, then fix the global sign
    for k in range(1, len(B)):
        if B[k] @ B[k - 1] < 0:
            B[k] = -B[k]
    Nv = (A - B) / math.sqrt(2)
    az = np.arctan2(A[:, 1], A[:, 0])
    er = np.stack([np.cos(az), np.sin(az)], 1)
    if np.mean(np.einsum("ij,ij->i", Nv[:, :2], er)) < 0:
        Nv = (A + B) / math.sqrt(2)
    phi = np.arctan2(Nv[:, 1], Nv[:, 0])
    hval = math.pi / 4 + np.arcsin(np.clip(Nv[:, 2], -1.0, 1.0))
    return phi, hval


def check_constant_width(curve: ParamCurve) -> float:
    """max over theta of ``|h(theta) + h(theta + pi) - pi/2|`` for the recovered support."""
    phi, hval = recovered_support(curve)
    order = np.argsort(phi % (2 * np.pi))
    x = (phi % (2 * np.pi))[order]
    y = hval[order]
    opp = np.interp((x + np.pi) % (2 * np.pi), x, y, period=2 * np.pi)
    return float(np.max(np.abs(y + opp - math.pi / 2)))


def spherical_convex(curve: ParamCurve, tol: float = 1e-9) -> bool:
    """No cusps and no inflections: ``det(A, A', A'')`` keeps a strict sign."""
    D2 = curve.derivs2 if curve.derivs2 is not None else _periodic_diff(curve.derivs, curve.period)
    det = np.einsum("ij,ij->i", np.cross(curve.points, curve.derivs), D2)
    scale = np.max(np.abs(det))
    return bool(not np.any(curve.cusps) and (np.all(det > tol * scale) or np.all(det < -tol * scale)))


# ---------------------------------------------------------------- rotational


@dataclass(frozen=True)
class RotationalCurveParams:
    """``beta(t) = sum over odd k of a_k sin(k q t) + b_k cos(k q t)``."""

    p: int
    q: int
    harmonics: tuple = ()  # (k, a_k, b_k), k odd

    def __post_init__(self):
        if self.q < 2 or math.gcd(self.p, self.q) != 1:
            raise InvalidParameters(f"p, q must be coprime with q >= 2, got {self.p}, {self.q}")
        for k, _, _ in self.harmonics:
            if k % 2 == 0 or k < 1:
                raise InvalidParameters("beta must contain odd harmonics of q t only")

    @property
    def c(self) -> float:
        return math.pi / self.q

    def beta(self, t, order: int = 0):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for k, a, b in self.harmonics:
            w = k * self.q
            s, c = np.sin(w * t), np.cos(w * t)
            for _ in range(order):
                s, c = w * c, -w * s
            out = out + a * s + b * c
        return out


def _antiderivative(f, period):
    """Mean-free periodic antiderivative of uniform samples (spectral)."""
    N = len(f)
    k = np.fft.fftfreq(N, d=period / N) * 2 * np.pi
    fh = np.fft.fft(f)
    Fh = np.zeros_like(fh)
    nz = k != 0
    Fh[nz] = fh[nz] / (1j * k[nz])
    if N % 2 == 0:
        Fh[N // 2] = 0.0
    return np.real(np.fft.ifft(Fh)), float(np.real(fh[0]) / N)


def rotational_curve(params: RotationalCurveParams, samples: int = 2048) -> ParamCurve:
    """Rotationally symmetric self-dual curve with polar angle ``p t - beta - pi p/q`` and radius ``e^rho``.

    ``rho' = (beta' - p) tan 2 beta``; the constant is fixed by
    ``rho(0) + rho(c) = -ln cos 2 beta(0)``, which makes ``H(u).v = 1``.
    """
    p, q, c = params.p, params.q, params.c
    N = int(math.ceil(samples / (2 * q)) * 2 * q)  # the shift c is a whole number of steps
    t = 2 * np.pi * np.arange(N) / N
    fine = np.linspace(0, 2 * np.pi, 8 * N, endpoint=False)
    if np.max(np.abs(params.beta(fine))) >= math.pi / 4 - 1e-6:
        raise TanSingularity("|beta| reaches pi/4")
    b0, b1 = params.beta(t), params.beta(t, 1)
    drho = (b1 - p) * np.tan(2 * b0)
    closure = 2 * np.pi * abs(np.mean(drho))
    if closure > 1e-6:
        raise ClosureFailure(f"rho does not close (residual {closure:.3g})")
    R, _ = _antiderivative(drho, 2 * np.pi)
    shift = N // (2 * q)
    const = 0.5 * (-math.log(math.cos(2 * b0[0])) - R[0] - R[shift])
    rho = R + const

    # Fourier coefficients of rho for evaluation off the grid
    rh = np.fft.fft(rho) / N
    kk = np.fft.fftfreq(N, d=1.0 / N)
    if N % 2 == 0:
        rh[N // 2] = 0.0

    def rho_at(s, order=0):
        E = np.exp(1j * np.outer(s, kk))
        return np.real(E @ (rh * (1j * kk) ** order))

    def ev(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        b, db, ddb = params.beta(s), params.beta(s, 1), params.beta(s, 2)
        r0 = rho_at(s)
        r1 = (db - p) * np.tan(2 * b)
        r2 = ddb * np.tan(2 * b) + (db - p) * 2 * db / np.cos(2 * b) ** 2
        ang = p * s - b - math.pi * p / q
        a1, a2 = p - db, -ddb
        ex = np.exp(r0)
        er = np.stack([np.cos(ang), np.sin(ang)], 1)
        et = np.stack([-np.sin(ang), np.cos(ang)], 1)
        P = ex[:, None] * er
        D = (ex * r1)[:, None] * er + (ex * a1)[:, None] * et
        D2 = (ex * (r2 + r1**2 - a1**2))[:, None] * er + (ex * (2 * r1 * a1 + a2))[:, None] * et
        one, zero = np.ones((len(s), 1)), np.zeros((len(s), 1))
        return np.hstack([P, one]), np.hstack([D, zero]), np.hstack([D2, zero])

    P, D, D2 = ev(t)
    return ParamCurve(t, P, D, 2 * np.pi, D2, None, f"rotational(p={p},q={q})", ev,
                      info={"params": params, "closure": closure, "rho": rho})


def rotational_H(params: RotationalCurveParams) -> np.ndarray:
    return pc.rotation(math.pi * params.p / params.q)


def rotational_certificate(params: RotationalCurveParams):
    """``(g, phi)``: ``g = diag(H, -1)`` sends the point ``A`` to the line ``{x : H(A).x = 1}``."""
    g = rotational_H(params) @ np.diag([1.0, 1.0, -1.0])
    return g, Reparam.shift(-params.c)


def verify_rotational_duality(curve: ParamCurve) -> float:
    """max over samples of the incidence and tangency defects of ``{x : H(A).x = 1}`` at ``gamma(t+c)``."""
    params = curve.info["params"]
    Hm = rotational_H(params)[:2, :2]
    A = curve.points[:, :2] / curve.points[:, 2:3]
    P, D, _ = curve.at(curve.t + params.c)
    B = P[:, :2] / P[:, 2:3]
    HA = A @ Hm.T
    inc = np.abs(np.einsum("ij,ij->i", HA, B) - 1.0)
    tan = np.abs(np.einsum("ij,ij->i", HA, D[:, :2])) / (
        np.linalg.norm(HA, axis=1) * np.linalg.norm(D[:, :2], axis=1))
    return float(max(inc.max(), tan.max()))


def rotational_symmetry_check(curve: ParamCurve, p: int, q: int) -> float:
    """max distance between the rotation by 2 pi p/q of ``gamma(t)`` and ``gamma(t + 2 pi/q)``."""
    Gm = pc.rotation(2 * math.pi * p / q)
    P, _, _ = curve.at(curve.t + 2 * math.pi / q)
    return float(pc.proj_distances(pc.apply_map(Gm, curve.points), P).max())


# ---------------------------------------------------------------- Radon


def _bracket(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


@dataclass(frozen=True)
class RadonSeed:
    """Quarter arc ``u(t) = rho(t) (cos t, sin t)`` on ``[0, pi/2]`` with
    ``rho(t) = 1 + sum_k c_k sin(2t)^(2k+2)``; the even powers of ``sin 2t``
    vanish to high order at both ends, matching the circle there."""

    coeffs: tuple = ()

    def rho(self, t, order=0):
        t = np.asarray(t, dtype=float)
        s, c = np.sin(2 * t), np.cos(2 * t)
        out = np.ones_like(t) if order == 0 else np.zeros_like(t)
        for j, ck in enumerate(self.coeffs):
            e = 2 * j + 4
            if order == 0:
                out = out + ck * s**e
            elif order == 1:
                out = out + ck * 2 * e * s ** (e - 1) * c
            else:
                out = out + ck * 4 * e * ((e - 1) * s ** (e - 2) * c**2 - s**e)
        return out

    def arc(self, t):
        """u, u', u'' on the seed quarter."""
        t = np.asarray(t, dtype=float)
        r0, r1, r2 = self.rho(t), self.rho(t, 1), self.rho(t, 2)
        er = np.stack([np.cos(t), np.sin(t)], -1)
        et = np.stack([-np.sin(t), np.cos(t)], -1)
        u = r0[..., None] * er
        du = r1[..., None] * er + r0[..., None] * et
        ddu = (r2 - r0)[..., None] * er + (2 * r1)[..., None] * et
        return u, du, ddu


def _radon_eval(seed: RadonSeed):
    def v_of(s):
        u, du, ddu = seed.arc(s)
        w = _bracket(u, du)[..., None]
        w1 = _bracket(u, ddu)[..., None]
        v = du / w
        dv = ddu / w - du * w1 / w**2
        return v, dv

    def ev(t):
        t = np.atleast_1d(np.asarray(t, dtype=float)) % (2 * np.pi)
        quarter = np.minimum((t // (np.pi / 2)).astype(int), 3)
        s = t - quarter * np.pi / 2
        u, du, _ = seed.arc(s)
        v, dv = v_of(s)
        first = quarter % 2 == 0
        P = np.where(first[:, None], u, v)
        D = np.where(first[:, None], du, dv)
        sign = np.where(quarter >= 2, -1.0, 1.0)[:, None]
        P, D = sign * P, sign * D
        one, zero = np.ones((len(t), 1)), np.zeros((len(t), 1))
        return np.hstack([P, one]), np.hstack([D, zero]), None

    return ev


def radon_curve(seed: RadonSeed, samples: int = 2000, seam_tol: float = 1e-6) -> ParamCurve:
    """Complete a quarter arc to a Radon curve: ``u(t + pi/2) = u'(t) / [u, u']``, ``u(t + pi) = -u(t)``."""
    s = np.linspace(0, np.pi / 2, 4001)
    u, du, ddu = seed.arc(s)
    if np.any(seed.rho(s) <= 0):
        raise NotConvexSeed("seed radius must stay positive")
    if np.any(_bracket(u, du) <= 0):
        raise NotConvexSeed("seed arc is not star-shaped: [u, u'] <= 0")
    if np.any(_bracket(du, ddu) <= 0):
        raise NotConvexSeed("seed arc is not strictly convex: [u', u''] <= 0")
    ev = _radon_eval(seed)
    # seams: the two one-sided limits of position and velocity must agree
    h = 1e-7
    for t0 in (np.pi / 2, np.pi, 3 * np.pi / 2, 2 * np.pi):
        lo, hi = ev(np.array([t0 - h])), ev(np.array([t0 + h]))
        if np.max(np.abs(lo[0] - hi[0])) > seam_tol or np.max(np.abs(lo[1] - hi[1])) > seam_tol * 1e2:
            raise IncompatibleSeed(f"seam mismatch at t = {t0:.4f}")
    N = samples - samples % 4
    t = 2 * np.pi * np.arange(N) / N
    P, D, _ = ev(t)
    return ParamCurve(t, P, D, 2 * np.pi, None, None, "radon", ev, info={"seed": seed})


def radon_relations(curve: ParamCurve, samples: int = 1000):
    """max |[u(t), u(t+pi/2)] - 1|, max |[u(t), u'(t+pi/2)]|, max |[u'(t), u(t+pi/2)]|."""
    t = np.linspace(0, 2 * np.pi, samples, endpoint=False) + 1e-3
    P, D, _ = curve.at(t)
    Q, E, _ = curve.at(t + np.pi / 2)
    u, du, v, dv = P[:, :2], D[:, :2], Q[:, :2], E[:, :2]
    return (float(np.max(np.abs(_bracket(u, v) - 1))),
            float(np.max(np.abs(_bracket(u, dv)))),
            float(np.max(np.abs(_bracket(du, v)))))


def radon_certificate():
    """``(g, phi)`` for Radon curves: ``(x, y, 1) -> (y, -x, -1)`` with ``phi(t) = t + pi/2``."""
    return np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, -1.0]]), Reparam.shift(np.pi / 2)


# ---------------------------------------------------------------- cubic

CUBIC_G = np.diag([-3.0, 1.0, 2.0])


def _cubic_eval(s):
    s = np.atleast_1d(np.asarray(s, dtype=float))
    a = s / 2
    sa, ca = np.sin(a), np.cos(a)
    # (t, t^3, 1) with t = tan(s/2), multiplied by cos^3(s/2)
    P = np.stack([sa * ca**2, sa**3, ca**3], 1)
    dP = 0.5 * np.stack([ca**3 - 2 * sa**2 * ca, 3 * sa**2 * ca, -3 * ca**2 * sa], 1)
    d2P = 0.25 * np.stack([
        -3 * ca**2 * sa - 4 * sa * ca**2 + 2 * sa**3,
        6 * sa * ca**2 - 3 * sa**3,
        6 * ca * sa**2 - 3 * ca**3,
    ], 1)
    return P, dP, d2P


def cubic_example(samples: int = 2000):
    """The cubic ``(t, t^3, 1)`` on the circle ``t = tan(s/2)``, its certificate and ``phi``.

    ``gamma(1/t) ~ (t^2, 1, t^3)`` and ``gamma x gamma' = (-3 t^2, 1, 2 t^3)``, so
    ``g = diag(-3, 1, 2)`` with ``phi(t) = 1/t``, i.e. ``s -> pi - s``.
    """
    s = -np.pi + 2 * np.pi * (np.arange(samples) + 0.5) / samples
    P, D, D2 = _cubic_eval(s)
    curve = ParamCurve(s, P, D, 2 * np.pi, D2, None, "cubic", _cubic_eval)
    return curve, CUBIC_G.copy(), Reparam.mobius(0, 1, 1, 0)


def singular_parameters(curve: ParamCurve, samples: int = 20000):
    """Parameters of inflections and cusps over one period.

    Cusps are isolated zeros of ``|gamma x gamma'|``; inflections are sign changes
    of ``det(gamma, gamma', gamma'')`` away from cusps, read on a continuous lift.
    """
    s = curve.t[0] + curve.period * (np.arange(samples) + 0.5) / samples
    P, D, D2 = curve.at(s)
    if D2 is None:
        h = 1e-6
        D2 = (curve.at(s + h)[1] - curve.at(s - h)[1]) / (2 * h)
    nP = np.linalg.norm(P, axis=1)
    speed = np.linalg.norm(np.cross(P, D), axis=1) / nP**2
    det = np.einsum("ij,ij->i", np.cross(P, D), D2) / nP**3
    typical = np.median(speed)
    n = len(s)
    cusps = [float(s[k]) for k in range(n)
             if speed[k] < 1e-2 * typical
             and speed[k] <= speed[k - 1] and speed[k] <= speed[(k + 1) % n]]
    near = lambda x: any(min(abs(x - c), curve.period - abs(x - c)) < 1e-2 for c in cusps)  # noqa: E731
    inflections = []
    for k in range(n):
        k1 = (k + 1) % n
        # det scales with the cube of the lift, so align consecutive lifts first
        flip = np.sign(P[k] @ P[k1])
        if det[k] * det[k1] * flip < 0 and not near(s[k]):
            mid = s[k] + 0.5 * ((s[k1] - s[k]) % curve.period)
            # report in the sampled window
            inflections.append(float(mid if mid < s[0] + curve.period else mid - curve.period))
    return inflections, cusps
