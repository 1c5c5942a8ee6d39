"""Projective linear algebra on the plane over the reals or the complex numbers.

Homogeneous vectors are plain length-3 numpy arrays (real or complex).  Points
and line covectors share the representation; the pairing between them is the
plain (non-conjugated) dot product.  Projective maps and bilinear forms are
3x3 arrays defined up to a nonzero factor.

Bilinear forms use the convention ``F(v, w) = v @ F @ w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateForm, DegenerateInput, IllConditioned, NotCollinear

EPS = 1e-9
# relative singular-value cutoff for the rank decisions inside canonical_form
RANK_TOL = 1e-7


def _asvec(v) -> np.ndarray:
    a = np.asarray(v)
    if a.shape != (3,):
        raise ValueError(f"expected a homogeneous 3-vector, got shape {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(float)
    return a


def is_complex(*arrays) -> bool:
    return any(np.iscomplexobj(a) and np.any(np.imag(a) != 0) for a in arrays)


def normalize(v, eps: float = EPS) -> np.ndarray:
    """Scale ``v`` so that its largest-modulus coordinate equals 1.

    Works for real and complex vectors; ties are broken by the lowest index.
    """
    a = _asvec(v)
    k = int(np.argmax(np.abs(a)))
    if abs(a[k]) <= eps:
        raise DegenerateInput("zero vector has no projective class")
    return a / a[k]


def unit(v) -> np.ndarray:
    a = np.asarray(v)
    return a / np.linalg.norm(a)


def proj_distance(u, v) -> float:
    """Sine of the angle between the lines spanned by ``u`` and ``v`` (0 = same point).

    Uses ``|u x v| / (|u| |v|)``, which by Lagrange's identity is also correct
    for complex vectors and avoids the cancellation in ``1 - cos^2``.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise DegenerateInput("zero vector")
    return float(np.linalg.norm(np.cross(u, v)) / (nu * nv))


def proj_distances(U, V) -> np.ndarray:
    """Row-wise :func:`proj_distance` for two ``(N, 3)`` arrays."""
    U = np.asarray(U)
    V = np.asarray(V)
    num = np.linalg.norm(np.cross(U, V), axis=1)
    return num / (np.linalg.norm(U, axis=1) * np.linalg.norm(V, axis=1))


def proj_equal(u, v, tol: float = 1e-7) -> bool:
    return proj_distance(u, v) <= tol


def incidence(point, line) -> float:
    """Normalized pairing |<line, point>| / (|line| |point|)."""
    p = np.asarray(point)
    l = np.asarray(line)
    return float(abs(l @ p) / (np.linalg.norm(l) * np.linalg.norm(p)))


def join(p, q, eps: float = EPS) -> np.ndarray:
    """Line through two points (cross product, normalized)."""
    p = _asvec(p)
    q = _asvec(q)
    l = np.cross(p, q)
    if np.linalg.norm(l) <= eps * np.linalg.norm(p) * np.linalg.norm(q):
        raise DegenerateInput("points coincide projectively")
    return normalize(l, eps=0.0)


def meet(l1, l2, eps: float = EPS) -> np.ndarray:
    """Intersection point of two lines."""
    try:
        return join(l1, l2, eps)
    except DegenerateInput:
        raise DegenerateInput("lines coincide projectively") from None


def cross_ratio(a, b, c, d, eps: float = EPS, collinear_tol: float = 1e-8):
    """Cross-ratio ``[a,b,c,d] = (a-c)(b-d) / ((a-d)(b-c))`` of four collinear points.

    Affine parameters are replaced by 2x2 determinants of coordinates along the
    common line, so points at infinity of any chart need no special casing.
    """
    X = np.array([unit(_asvec(x)) for x in (a, b, c, d)])
    _, s, vh = np.linalg.svd(X)
    if s[2] > collinear_tol * s[0]:
        raise NotCollinear(f"points span the plane (sigma3/sigma1 = {s[2] / s[0]:.3g})")
    coords = X @ vh[:2].conj().T

    def det(i, j):
        return coords[i, 0] * coords[j, 1] - coords[i, 1] * coords[j, 0]

    num = det(0, 2) * det(1, 3)
    den = det(0, 3) * det(1, 2)
    if abs(den) <= eps:
        raise DegenerateInput("cross-ratio denominator vanishes")
    val = num / den
    if not np.iscomplexobj(X) or abs(np.imag(val)) == 0:
        return float(np.real(val))
    return complex(val)


def rotation(theta: float) -> np.ndarray:
    """Rotation of the affine chart z=1 about the origin, counterclockwise by ``theta``."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def normalize_matrix(M) -> np.ndarray:
    M = np.asarray(M)
    k = np.unravel_index(np.argmax(np.abs(M)), M.shape)
    if M[k] == 0:
        raise DegenerateInput("zero matrix")
    return M / M[k]


def check_projmap(M, eps: float = EPS) -> np.ndarray:
    """Return ``M`` normalized to unit largest entry; raise if it is singular."""
    N = normalize_matrix(M)
    if abs(np.linalg.det(N)) <= eps:
        raise DegenerateInput("projective map is singular")
    return N


def _skew(v) -> np.ndarray:
    x, y, z = v
    return np.array([[0, -z, y], [z, 0, -x], [-y, x, 0]], dtype=np.result_type(v, float))


@dataclass(frozen=True)
class MapFit:
    matrix: np.ndarray
    residual: float
    singular_values: np.ndarray


def fit_projective_map(src, dst, strict: bool = True, unique_tol: float = 1e-8) -> MapFit:
    """Least-squares 3x3 matrix ``M`` with ``M @ src[k]`` parallel to ``dst[k]``.

    Each correspondence contributes the three rows of ``[dst_k]_x (I kron src_k^T)``;
    the answer is the right singular vector of the smallest singular value.  The
    residual is ``sigma_min / sigma_max``.  When the second smallest singular value
    is also negligible the solution is not unique (e.g. no four sources in general
    position) and :class:`IllConditioned` is raised unless ``strict`` is false.
    """
    src = np.asarray(src)
    dst = np.asarray(dst)
    if src.ndim != 2 or src.shape[1] != 3 or src.shape != dst.shape:
        raise ValueError("src and dst must be matching (k, 3) arrays")
    if len(src) < 4:
        raise ValueError("need at least 4 correspondences")
    src = src / np.linalg.norm(src, axis=1)[:, None]
    dst = dst / np.linalg.norm(dst, axis=1)[:, None]
    dtype = np.result_type(src, dst, float)
    k = len(src)
    A = np.zeros((3 * k, 9), dtype=dtype)
    for i in range(k):
        A[3 * i:3 * i + 3] = _skew(dst[i]) @ np.kron(np.eye(3), src[i][None, :])
    _, s, vh = np.linalg.svd(A, full_matrices=False)
    M = vh[-1].conj().reshape(3, 3)
    if not np.iscomplexobj(src) and not np.iscomplexobj(dst):
        M = M.real
    residual = float(s[-1] / s[0])
    if strict and s[-2] <= unique_tol * s[0]:
        raise IllConditioned(
            f"correspondences do not determine a unique map (sigma_8/sigma_1 = {s[-2] / s[0]:.3g})"
        )
    return MapFit(normalize_matrix(M), residual, s)


def apply_map(M, pts) -> np.ndarray:
    """Apply ``M`` to rows of ``pts``."""
    return np.asarray(pts) @ np.asarray(M).T


def decompose_form(F):
    """Symmetric and antisymmetric parts of ``F``."""
    F = np.asarray(F)
    return (F + F.T) / 2, (F - F.T) / 2


def symmetry_defect(F) -> float:
    F = np.asarray(F)
    return float(np.linalg.norm(F - F.T) / np.linalg.norm(F))


def H(phi) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    one = np.ones_like(c)
    zero = np.zeros_like(c)
    return np.array([[c, s, zero], [-s, c, zero], [zero, zero, one]])


J = np.array([[1.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
K = np.array([[1.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


@dataclass(frozen=True)
class FormClass:
    """Congruence class of a nondegenerate form, up to scale.

    ``tag`` is one of ``"Hphi"``, ``"J"``, ``"K"``, ``"Symmetric"``.  For
    ``Hphi`` the angle is stored in ``phi``; for real symmetric forms
    ``definite`` is True/False (None over the complex numbers).
    """

    tag: str
    phi: complex | float | None = None
    definite: bool | None = None

    def matrix(self) -> np.ndarray:
        if self.tag == "Hphi":
            return H(self.phi)
        if self.tag == "J":
            return J.copy()
        if self.tag == "K":
            return K.copy()
        raise ValueError("symmetric classes have no single canonical matrix")

    def __str__(self) -> str:
        if self.tag == "Hphi":
            phi = self.phi
            if isinstance(phi, complex):
                return f"Hphi({phi.real:.6g}{phi.imag:+.6g}j)"
            return f"Hphi({phi:.6g})"
        if self.tag == "Symmetric":
            if self.definite is None:
                return "Symmetric"
            return "Symmetric(definite)" if self.definite else "Symmetric(indefinite)"
        return self.tag


def _b(M, x, y):
    return x @ M @ y


def _real_if_close(a, tol=1e-12):
    a = np.asarray(a)
    if np.iscomplexobj(a) and np.all(np.abs(a.imag) <= tol * max(1.0, np.abs(a).max())):
        return a.real.copy()
    return a


def _csqrt(x, real: bool):
    if real and np.isreal(x) and np.real(x) > 0:
        return math.sqrt(float(np.real(x)))
    return np.sqrt(complex(x))


def _nullspace(rows, dim) -> np.ndarray:
    """Columns spanning the common kernel of ``rows`` (bilinear pairing)."""
    _, _, vh = np.linalg.svd(np.atleast_2d(rows))
    return vh[-dim:].T


def _best_anisotropic(Fp, Q):
    """Column combination of ``Q`` with the largest |Fp(x, x)| / |x|^2."""
    cands = [Q[:, i] for i in range(Q.shape[1])]
    if Q.shape[1] == 2:
        cands += [Q[:, 0] + Q[:, 1], Q[:, 0] - Q[:, 1], Q[:, 0] + 1j * Q[:, 1]]
    best = max(cands, key=lambda x: abs(_b(Fp, x, x)) / np.vdot(x, x).real)
    return best


def _case_hphi(Fp, Fm, w, real):
    e3 = w / _csqrt(_b(Fp, w, w), real)
    Z = _nullspace((Fp @ e3)[None, :], 2)
    z1 = _best_anisotropic(Fp, Z)
    others = [Z[:, 0], Z[:, 1]]
    z2 = max(others, key=lambda z: np.linalg.norm(np.cross(z, z1)))
    z2 = z2 - _b(Fp, z2, z1) / _b(Fp, z1, z1) * z1
    d1, d2 = _b(Fp, z1, z1), _b(Fp, z2, z2)
    if real and np.isreal(d1) and np.isreal(d2) and np.real(d1) * np.real(d2) > 0:
        sigma = 1.0 if np.real(d1) > 0 else -1.0
        e1 = z1 / math.sqrt(abs(np.real(d1)))
        e2 = z2 / math.sqrt(abs(np.real(d2)))
    else:
        sigma = 1.0
        e1 = z1 / np.sqrt(complex(d1))
        e2 = z2 / np.sqrt(complex(d2))
    s = _b(Fm, e1, e2)
    if np.isreal(s) and np.real(s) < 0:
        e1, e2 = e2, e1
        s = -s
    alpha = (1 + s * s) ** -0.25
    if np.isreal(s) and np.isreal(sigma):
        phi = math.atan2(float(np.real(s)), sigma)
    else:
        phi = complex(np.arctan(s))
    B = np.column_stack([alpha * e1, alpha * e2, e3])
    return B, H(phi), phi


def _case_j(Fp, Fm, w, real, vh):
    e3 = w / _csqrt(_b(Fp, w, w), real)
    k = vh[-1].conj()
    Z = _nullspace((Fp @ e3)[None, :], 2)
    z = _best_anisotropic(Fp, Z)
    e1 = z / _csqrt(_b(Fp, z, z), real)
    e2 = k / _b(Fm, e1, k)
    return np.column_stack([e1, e2, e3]), J.copy()


def _case_half_pi(Fp, Fm, w, real, vh):
    e3 = w / _csqrt(_b(Fp, w, w), real)
    k1, k2 = vh[-2].conj(), vh[-1].conj()
    e2 = k2 / _b(Fm, k1, k2)
    return np.column_stack([k1, e2, e3]), H(math.pi / 2)


def _case_k(Fp, Fm, w, real):
    v = np.conj(Fp @ w)
    y = v / _b(Fp, v, w)
    x = y - _b(Fp, y, y) / 2 * w
    e1 = np.cross(Fp @ x, Fp @ w)
    e1 = e1 / np.linalg.norm(e1)
    e1 = e1 / _csqrt(_b(Fp, e1, e1), real)
    alpha = 1 / _b(Fm, e1, x)
    return np.column_stack([e1, alpha * x, w / alpha]), K.copy()


def _congruence_residual(F, B, C):
    R = B.T @ F @ B
    k = np.unravel_index(np.argmax(np.abs(C)), C.shape)
    lam = R[k] / C[k]
    return float(np.linalg.norm(R / lam - C) / np.linalg.norm(C)), lam


def canonical_form(F, sym_tol: float = RANK_TOL, rank_tol: float = RANK_TOL, eps: float = EPS):
    """Classify a nondegenerate form up to congruence and scale.

    Returns ``(FormClass, B)`` with ``B.T @ F @ B`` proportional to the canonical
    matrix.  ``B`` may be complex when the real form is not reachable by a real
    basis change.
    """
    F = np.asarray(F)
    nF = np.linalg.norm(F, 2)
    if nF == 0 or abs(np.linalg.det(F / nF)) <= eps:
        raise DegenerateForm("form is degenerate")
    real = not np.iscomplexobj(F)
    F = F / nF
    Fp, Fm = decompose_form(F)

    if np.linalg.norm(Fm, 2) <= sym_tol:
        return _classify_symmetric(Fp, real)

    w = np.array([Fm[1, 2], -Fm[0, 2], Fm[0, 1]])
    w = w / np.linalg.norm(w)
    _, sv, vh = np.linalg.svd(Fp)
    rank = int(np.sum(sv > rank_tol))
    nonvanishing = abs(_b(Fp, w, w)) > rank_tol

    best = None
    for sign in (1.0, -1.0):
        Fs, Fps, Fms = sign * F, sign * Fp, sign * Fm
        if nonvanishing and rank == 3:
            B, C, phi = _case_hphi(Fps, Fms, w, real)
            cls = FormClass("Hphi", phi=phi)
        elif nonvanishing and rank == 2:
            B, C = _case_j(Fps, Fms, w, real, vh)
            cls = FormClass("J")
        elif nonvanishing and rank == 1:
            B, C = _case_half_pi(Fps, Fms, w, real, vh)
            cls = FormClass("Hphi", phi=math.pi / 2)
        elif not nonvanishing and rank == 3:
            B, C = _case_k(Fps, Fms, w, real)
            cls = FormClass("K")
        else:
            raise DegenerateForm("symmetric part vanishes on the kernel of the skew part")
        B = _real_if_close(B)
        res, _ = _congruence_residual(Fs, B, C)
        key = (np.iscomplexobj(B) and real, res)
        if best is None or key < best[0]:
            best = (key, cls, B)
    return best[1], best[2]


def _classify_symmetric(Fp, real):
    if real:
        lam, V = np.linalg.eigh(Fp)
        order = np.argsort(-np.sign(lam), kind="stable")
        lam, V = lam[order], V[:, order]
        B = V / np.sqrt(np.abs(lam))
        definite = bool(np.all(lam > 0) or np.all(lam < 0))
        return FormClass("Symmetric", definite=definite), B
    basis = []
    for _ in range(3):
        if basis:
            Q = _nullspace(np.array([Fp @ e for e in basis]), 3 - len(basis))
        else:
            Q = np.eye(3, dtype=complex)
        x = _best_anisotropic(Fp, Q)
        basis.append(x / np.sqrt(complex(_b(Fp, x, x))))
    return FormClass("Symmetric"), np.column_stack(basis)


def congruence_residual(F, cls: FormClass, B) -> float:
    """Relative distance of ``B.T F B`` (rescaled) from the canonical matrix of ``cls``."""
    F = np.asarray(F) / np.linalg.norm(F, 2)
    if cls.tag == "Symmetric":
        R = B.T @ F @ B
        d = np.diag(R)
        k = int(np.argmax(np.abs(d)))
        R = R / d[k]
        C = np.diag(np.round(np.real(np.diag(R))))
        return float(np.linalg.norm(R - C) / np.linalg.norm(C))
    return _congruence_residual(F, B, cls.matrix())[0]


def comm_map(F, eps: float = EPS) -> np.ndarray:
    """The projective transformation ``G = F^{-1} F^T``."""
    F = np.asarray(F)
    nF = np.linalg.norm(F, 2)
    if nF == 0 or abs(np.linalg.det(F / nF)) <= eps:
        raise DegenerateForm("form is degenerate")
    return np.linalg.solve(F, F.T)


def is_projective_identity(M, tol: float = 1e-7) -> bool:
    M = np.asarray(M)
    t = np.trace(M) / 3
    if t == 0:
        return False
    return bool(np.linalg.norm(M / t - np.eye(3)) <= tol)


def map_order(G, max_order: int, tol: float = 1e-7):
    """Least ``s <= max_order`` with ``G^s`` projectively the identity, else None."""
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    G = np.asarray(G)
    d = np.linalg.det(G)
    if d == 0:
        raise DegenerateInput("singular map")
    G = G / (complex(d) ** (1 / 3) if np.iscomplexobj(G) else np.cbrt(d))
    P = np.eye(3, dtype=G.dtype)
    for s in range(1, max_order + 1):
        P = P @ G
        P = P / np.linalg.norm(P)
        if is_projective_identity(P, tol):
            return s
    return None
