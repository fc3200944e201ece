"""Minkowski-space model of hyperbolic cycles.

Real symmetric 2x2 matrices ``[[t + b, a], [a, t - b]]`` are stored as
3-vectors ``(t, a, b)`` with the bilinear form

    <X, Y> = -t_X t_Y + a_X a_Y + b_X b_Y,

so that ``|X|^2 = -det X``.  The hyperboloid sheet ``|x|^2 = -1, t > 0`` is
the hyperbolic plane.  A cycle is stored as a vector ``C`` whose squared
norm encodes its type and radius.

Examples
--------
>>> mdot(vec(1, 0, 0), vec(1, 0, 0))
-1.0
>>> classify_cycle(vec(1, 1, 0)).name
'HOROCYCLE'
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import (
    BadCenterNorm,
    BadPointNorm,
    NonFiniteInput,
    NonPositiveProduct,
    NonPositiveWeight,
    NoOrthogeodesic,
    NoRadicalLine,
)

TOL_CLASS = 1e-9
CENTER_NORM_TOL = 1e-9

# metric tensor diag(-1, 1, 1)
METRIC = np.diag([-1.0, 1.0, 1.0])

CONE, CUSP, FLARE = -1, 0, 1
VERTEX_TYPES = (CONE, CUSP, FLARE)


class CycleClass(enum.Enum):
    POINT = "point"
    CIRCLE = "circle"
    HOROCYCLE = "horocycle"
    HYPERCYCLE = "hypercycle"
    INVALID = "invalid"


class PairPosition(enum.Enum):
    INTERSECTING = "intersecting"
    TANGENT = "tangent"
    DISJOINT = "disjoint"


def vec(t, a, b):
    """Build a Minkowski vector from its three coordinates."""
    return np.array([t, a, b], dtype=float)


def as_vec(X):
    v = np.asarray(X, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteInput(f"non-finite coordinates {v!r}")
    return v


def mdot(X, Y):
    """Minkowski inner product of two (t, a, b) vectors."""
    return float(-X[0] * Y[0] + X[1] * Y[1] + X[2] * Y[2])


def mnorm2(X):
    return mdot(X, X)


def mcross(X, Y):
    """Vector N with ``<N, Z> = det[X, Y, Z]`` for every Z."""
    return METRIC @ np.cross(X, Y)


def mdet(X, Y, Z):
    return float(np.linalg.det(np.array([X, Y, Z], dtype=float)))


def _check_type(eps):
    if eps not in VERTEX_TYPES:
        raise ValueError(f"vertex type must be -1, 0 or 1, got {eps!r}")


def tau(eps, x):
    """Length modifier applied to a radius."""
    if eps == CONE:
        return math.cosh(x)
    if eps == CUSP:
        return 0.5 * math.exp(x)
    if eps == FLARE:
        return math.sinh(x)
    _check_type(eps)


def tau_prime(eps, x):
    """Length modifier applied to a distance; ``eps`` may be a product of types."""
    if eps == CONE:
        return math.sinh(x)
    if eps == CUSP:
        return 0.5 * math.exp(x)
    if eps == FLARE:
        return math.cosh(x)
    _check_type(eps)


def rho_prime(eps, x):
    """Angle modifier: cos, 1 or cosh depending on the vertex type."""
    if eps == CONE:
        return math.cos(x)
    if eps == CUSP:
        return 1.0
    if eps == FLARE:
        return math.cosh(x)
    _check_type(eps)


_MODIFIERS = {"tau": tau, "tau_prime": tau_prime, "rho_prime": rho_prime}


def modifier(kind, eps, x):
    """Dispatch to one of ``tau``, ``tau_prime``, ``rho_prime`` by name."""
    try:
        fn = _MODIFIERS[kind]
    except KeyError:
        raise ValueError(f"unknown modifier {kind!r}") from None
    if not math.isfinite(x):
        raise NonFiniteInput(f"non-finite argument {x!r}")
    return fn(eps, x)


def classify_cycle(C, tol=TOL_CLASS):
    C = as_vec(C)
    n2 = mnorm2(C)
    future = C[0] > tol
    if n2 > tol:
        return CycleClass.HYPERCYCLE
    if not future or n2 < -1.0 - tol:
        return CycleClass.INVALID
    if abs(n2) <= tol:
        return CycleClass.HOROCYCLE
    if abs(n2 + 1.0) <= tol:
        return CycleClass.POINT
    return CycleClass.CIRCLE


def cycle_from_weight(center, eps, omega):
    """Scale a normalized centre by ``1 / omega``.

    For cones the centre is a hyperboloid point, for cusps a future light-like
    vector (its scale fixes the auxiliary horocycle) and for flares a unit
    space-like normal of the axis.
    """
    _check_type(eps)
    center = as_vec(center)
    if not (omega > 0 and math.isfinite(omega)):
        raise NonPositiveWeight(f"weight must be positive, got {omega!r}")
    n2 = mnorm2(center)
    if abs(n2 - eps) > CENTER_NORM_TOL:
        raise BadCenterNorm(f"|center|^2 = {n2!r}, expected {eps}")
    if eps != FLARE and center[0] <= 0:
        raise BadCenterNorm("centre must be future-pointing")
    return center / omega


def pair_product(eps_u, omega_u, eps_v, omega_v, length):
    """Return ``-<C_u, C_v>`` for two cycles at generalized distance ``length``."""
    if omega_u <= 0 or omega_v <= 0:
        raise NonPositiveWeight("weights must be positive")
    return tau_prime(eps_u * eps_v, length) / (omega_u * omega_v)


def length_from_product(eps_u, omega_u, eps_v, omega_v, q, tol=TOL_CLASS):
    """Invert :func:`pair_product`; the flare-flare branch is nonnegative."""
    if omega_u <= 0 or omega_v <= 0:
        raise NonPositiveWeight("weights must be positive")
    if not math.isfinite(q):
        raise NonFiniteInput(f"non-finite product {q!r}")
    s = q * omega_u * omega_v
    eps = eps_u * eps_v
    if eps == CONE:
        return math.asinh(s)
    if eps == CUSP:
        if s <= 0:
            raise NonPositiveProduct(f"product {q!r} must be positive")
        return math.log(2.0 * s)
    if s < 1.0 - tol:
        raise NoOrthogeodesic(f"scaled product {s!r} < 1")
    return math.acosh(max(s, 1.0))


def tangent_distance(C, x):
    """Modified tangent distance ``-<C, x>`` from a point to a cycle."""
    C = as_vec(C)
    x = as_vec(x)
    n2 = mnorm2(x)
    if abs(n2 + 1.0) > CENTER_NORM_TOL or x[0] <= 0:
        raise BadPointNorm(f"not a hyperboloid point: |x|^2 = {n2!r}")
    return -mdot(C, x)


def radical_line(C1, C2, tol=TOL_CLASS):
    """Unit space-like normal of the line of equal tangent distance."""
    C1 = as_vec(C1)
    C2 = as_vec(C2)
    D = C1 - C2
    n2 = mnorm2(D)
    if n2 <= tol:
        raise NoRadicalLine(f"|C1 - C2|^2 = {n2!r} is not positive")
    return D / math.sqrt(n2)


def _herm_lift(C):
    # cycles live in the real slice; the Moebius circle adds a unit
    # imaginary component orthogonal to it
    return mnorm2(C) + 1.0


def pair_position(C1, C2, tol=TOL_CLASS):
    """Intersection pattern of two cycles from their Gramian determinant."""
    C1 = as_vec(C1)
    C2 = as_vec(C2)
    if np.linalg.norm(np.cross(C1, C2)) <= tol * np.linalg.norm(C1) * np.linalg.norm(C2):
        # concentric cycles only meet when equal
        return PairPosition.DISJOINT
    gram = _herm_lift(C1) * _herm_lift(C2) - (mdot(C1, C2) + 1.0) ** 2
    if gram > tol:
        return PairPosition.INTERSECTING
    if gram < -tol:
        return PairPosition.DISJOINT
    return PairPosition.TANGENT
