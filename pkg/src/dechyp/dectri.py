"""A single decorated hyperbolic triangle.

Intrinsic data (vertex types, weights, signed generalized edge lengths) is
turned into a Minkowski lift.  It holds one vertex cycle ``C[k]`` and one
edge line ``L[k]`` per corner (the line is opposite the corner), plus the
face vector ``F`` with ``<C_i, F> = -1``.  Everything else about the
triangle is read off the lift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DecHypError,
    DegenerateSystem,
    InvalidTriangle,
    NonPositiveWeight,
    SupportUndefined,
)
from .minkcore import CONE, CUSP, FLARE, METRIC, mdot, mnorm2, rho_prime, tau, tau_prime

EIG_TOL = 1e-9
COND_MAX = 1e12

_OTHERS = ((1, 2), (2, 0), (0, 1))


@dataclass(frozen=True)
class DecoratedTriangle:
    types: tuple
    weights: tuple
    lengths: tuple

    def __post_init__(self):
        types = tuple(int(e) for e in self.types)
        weights = tuple(float(w) for w in self.weights)
        lengths = tuple(float(x) for x in self.lengths)
        if len(types) != 3 or len(weights) != 3 or len(lengths) != 3:
            raise ValueError("a triangle has exactly three corners")
        if any(e not in (CONE, CUSP, FLARE) for e in types):
            raise ValueError(f"bad vertex types {types!r}")
        if not all(w > 0 and math.isfinite(w) for w in weights):
            raise NonPositiveWeight(f"weights must be positive, got {weights!r}")
        if not all(math.isfinite(x) for x in lengths):
            raise ValueError(f"non-finite lengths {lengths!r}")
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "lengths", lengths)

    def with_weights(self, weights):
        return DecoratedTriangle(self.types, tuple(weights), self.lengths)


@dataclass(frozen=True)
class TriangleLift:
    C: np.ndarray
    L: np.ndarray
    F: np.ndarray
    angles: tuple
    feet: tuple
    gram: np.ndarray
    gram_inv: np.ndarray

    @property
    def genuine(self):
        """True when every foot distance exists.

        A Gram matrix of the right signature can still describe a
        configuration where a flare axis crosses the opposite side or a
        centre lies behind it; such triangles have no perpendicular feet.
        """
        return all(math.isfinite(d) for d in self.feet)


def gram_matrix(tri):
    """Weighted Gram matrix of the three vertex cycles."""
    g0 = np.array(kernels.gram_unit(tri.types, tri.lengths)).reshape(3, 3)
    inv_w = 1.0 / np.array(tri.weights)
    return g0 * np.outer(inv_w, inv_w)


def is_valid(tri, tol=EIG_TOL):
    try:
        kernels.gram_inverse(tri.types, tri.lengths, tol)
    except InvalidTriangle:
        return False
    return True


def _check_signature(G, tol):
    w = np.linalg.eigvalsh(G)
    scale = tol * np.abs(G).max()
    if not (w[0] < -scale and w[1] > scale and w[2] > scale):
        raise InvalidTriangle(f"Gram eigenvalues {w!r} do not have signature (2,1)")


def _simplex_min(H):
    """Minimize g^T H g over the standard 2-simplex (small closed form)."""
    cands = [np.eye(3)[i] for i in range(3)]
    for i, j in ((0, 1), (1, 2), (0, 2)):
        # g = s e_i + (1 - s) e_j
        a = H[i, i] - 2 * H[i, j] + H[j, j]
        if a > 0:
            s = (H[j, j] - H[i, j]) / a
            if 0 < s < 1:
                g = np.zeros(3)
                g[i], g[j] = s, 1 - s
                cands.append(g)
    try:
        g = np.linalg.solve(H, np.ones(3))
        if np.all(g > 0):
            cands.append(g / g.sum())
    except np.linalg.LinAlgError:
        pass
    return min(cands, key=lambda g: g @ H @ g)


def _realize(G, types, G_inv):
    w, V = np.linalg.eigh(G)
    order = [int(np.argmin(w))] + [i for i in range(3) if i != int(np.argmin(w))]
    X = V[:, order] * np.sqrt(np.abs(w[order]))
    timelike = [k for k in range(3) if types[k] != FLARE]
    if timelike:
        if X[timelike[0], 0] < 0:
            X[:, 0] = -X[:, 0]
    else:
        # all flares: the triangle interior {<x, C_k> < 0} must contain
        # future points; those are positive combinations of the dual basis
        g = _simplex_min(G_inv)
        x = -(g @ G_inv) @ X
        if x[0] < 0:
            X[:, 0] = -X[:, 0]
    if np.linalg.det(X) < 0:
        X[:, 2] = -X[:, 2]
    return X


def _inverse_modifier(eps, value):
    if eps == CONE:
        return math.asinh(value) if value > 0 else math.nan
    if eps == CUSP:
        return math.log(2.0 * value) if value > 0 else math.nan
    return math.acosh(value) if value >= 1.0 else math.nan


def _angle(eps, ll, lsum, c_aux, F):
    # ll = <L_a, L_b> with outward normals
    if eps == CONE:
        return math.acos(min(1.0, max(-1.0, -ll)))
    if eps == FLARE:
        return math.acosh(max(1.0, -ll))
    # L_a + L_b is light-like and parallel to the cusp vector
    return abs(mdot(lsum, F) / mdot(c_aux, F))


def lift_triangle(tri, tol=EIG_TOL):
    """Realize the triangle in Minkowski space."""
    G = gram_matrix(tri)
    _check_signature(G, tol)
    kernels.gram_inverse(tri.types, tri.lengths, tol)
    if np.linalg.cond(G) > COND_MAX:
        raise DegenerateSystem(f"Gram condition number {np.linalg.cond(G):.3g}")
    G_inv = np.linalg.inv(G)
    C = _realize(G, tri.types, G_inv)

    L = np.empty((3, 3))
    for k in range(3):
        L[k] = -(G_inv[k] @ C) / math.sqrt(G_inv[k, k])
    F = -(G_inv.sum(axis=1)) @ C

    angles = []
    for k in range(3):
        a, b = _OTHERS[k]
        angles.append(
            _angle(tri.types[k], mdot(L[a], L[b]), L[a] + L[b], tri.weights[k] * C[k], F)
        )
    feet = tuple(
        _inverse_modifier(tri.types[k], -mdot(C[k], L[k]) * tri.weights[k]) for k in range(3)
    )
    return TriangleLift(C=C, L=L, F=F, angles=tuple(angles), feet=feet, gram=G, gram_inv=G_inv)


def triangle_angles(tri):
    """Generalized angle at each corner, measured according to the vertex type.

    Cusp arcs are measured on the unit-weight horocycle so that the angles
    do not depend on the decoration.
    """
    return lift_triangle(tri).angles


def cosine_law_angle(tri, k):
    """Cone angle at corner ``k`` from the edge lengths alone."""
    if tri.types[k] != CONE:
        raise ValueError("the cosine law applies to cone corners")
    u, w = _OTHERS[k]
    eu, ew = tri.types[u], tri.types[w]
    l_uv = tri.lengths[w]  # side k-u is opposite w
    l_vw = tri.lengths[u]
    l_wu = tri.lengths[k]
    num = -tau_prime(ew * eu, l_wu) + tau(eu, l_uv) * tau(ew, l_vw)
    den = tau_prime(eu, l_uv) * tau_prime(ew, l_vw)
    return math.acos(min(1.0, max(-1.0, num / den)))


def is_genuine(tri, tol=EIG_TOL):
    try:
        return lift_triangle(tri, tol).genuine
    except DecHypError:
        return False


def tilts(tri):
    """Tilts ``t_n = <F, L_n>`` of the face plane along the three edges."""
    lift = lift_triangle(tri)
    return tuple(mdot(lift.F, lift.L[n]) for n in range(3))


def angle_matrix(tri, lift=None):
    """Gram matrix of the edge lines written through generalized angles."""
    lift = lift or lift_triangle(tri)
    R = np.eye(3)
    for k in range(3):
        a, b = _OTHERS[k]
        R[a, b] = R[b, a] = -rho_prime(tri.types[k], lift.angles[k])
    return R


def tilt_coefficients(tri):
    """Matrix ``M`` with ``tilts(tri) == M @ weights`` for every weight vector."""
    lift = lift_triangle(tri)
    if not lift.genuine:
        raise InvalidTriangle("a foot distance is undefined for this configuration")
    R = angle_matrix(tri, lift)
    scale = np.array([1.0 / tau_prime(tri.types[k], lift.feet[k]) for k in range(3)])
    return R * scale[None, :]


def tilts_matrix_route(tri):
    return tuple(float(x) for x in tilt_coefficients(tri) @ np.array(tri.weights))


def face_vector(C):
    """Solve ``<C_i, F> = -1`` for three stacked cycle vectors."""
    A = np.asarray(C, dtype=float) @ METRIC
    return np.linalg.solve(A, -np.ones(3))


def support_value(lift, X, tol=EIG_TOL):
    """Support function ``1 / <X, F>^2`` at a hyperboloid point ``X``."""
    p = mdot(X, lift.F if isinstance(lift, TriangleLift) else lift)
    if p >= -tol:
        raise SupportUndefined(f"<X, F> = {p!r} is not negative")
    return 1.0 / (p * p)


def is_elliptic(F, tol=EIG_TOL):
    return mnorm2(F) < -tol
