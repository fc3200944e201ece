"""Configuration space of decorations and its decomposition into cones.

For a fixed triangulation every edge tilt sum is a linear form in the
weight vector, so the weights for which the triangulation is weighted
Delaunay form a polyhedral cone ``{omega : A @ omega <= 0}``.  Sampling the
weight simplex and running the flip algorithm at each sample recovers the
cones that meet the (edge-relaxed) proper region.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NotConverged
from .flipper import (
    DEFAULT_MAX_FLIPS,
    DEFAULT_TOL,
    FlipCache,
    flip_to_delaunay,
    signature_from_flat,
)
from .minkcore import CONE
from .surface import is_proper, tilt_sum_matrix

ROW_TOL = 1e-9


@dataclass(frozen=True)
class ConeSpec:
    A: np.ndarray
    labels: tuple

    def evaluate(self, omega):
        return self.A @ np.asarray(omega, dtype=float)

    def contains(self, omega, tol=DEFAULT_TOL):
        return bool(np.all(self.evaluate(omega) <= tol))

    def max_violation(self, omega):
        return float(np.max(self.evaluate(omega)))


def delaunay_cone(S, omega0=None, tol=DEFAULT_TOL):
    """Tilt-sum inequalities of the triangulation ``S``.

    Raises ``NotConverged`` if ``S`` is not Delaunay at ``omega0``.
    """
    omega0 = S.weights if omega0 is None else np.asarray(omega0, dtype=float)
    cone = ConeSpec(tilt_sum_matrix(S), tuple(range(S.n_edges)))
    if not cone.contains(omega0, tol):
        raise NotConverged("the triangulation is not Delaunay at the given weights")
    return cone


def simplex_grid(n_vertices, resolution):
    """Interior points ``k / resolution`` of the standard simplex."""
    for head in itertools.product(range(1, resolution), repeat=n_vertices - 1):
        last = resolution - sum(head)
        if last >= 1:
            yield np.array(head + (last,), dtype=float) / resolution


def realizable_weights(S, bary):
    """Scale a simplex point so that cone weights exceed one."""
    bary = np.asarray(bary, dtype=float)
    if any(v.type == CONE for v in S.vertices):
        return bary * (2.0 / bary.min())
    return bary / bary.max()


@dataclass
class FanGroup:
    signature: object
    count: int
    maximal: bool
    bary_min: np.ndarray
    bary_max: np.ndarray
    max_violation: float
    cone: np.ndarray = field(repr=False)


@dataclass
class FanReport:
    resolution: int
    groups: list
    skipped: int
    samples: int
    caveat: str = field(default="properness uses the edge relaxation")

    @property
    def n_signatures(self):
        return len(self.groups)

    @property
    def n_maximal(self):
        return sum(1 for g in self.groups if g.maximal)

    @property
    def max_violation(self):
        return max((g.max_violation for g in self.groups), default=float("-inf"))


def fan_sample(S, resolution, tol=DEFAULT_TOL, max_flips=DEFAULT_MAX_FLIPS):
    """Sample the weight simplex and group samples by tessellation.

    A signature is maximal when every flat edge of the tessellation is flat
    for all weights (its tilt-sum row vanishes), i.e. the sample lies in the
    interior of a full-dimensional cone.  Every sample is checked against
    the cone of the first triangulation recorded for its group.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    cache = FlipCache()
    groups = {}
    skipped = 0
    samples = 0
    for bary in simplex_grid(S.n_vertices, resolution):
        omega = realizable_weights(S, bary)
        if not is_proper(S, omega):
            skipped += 1
            continue
        samples += 1
        result = flip_to_delaunay(S, omega, tol, max_flips, cache=cache, audit=False)
        final = result.surface
        A = cache.matrix(final)
        sums = A @ omega
        flat = {e for e in range(final.n_edges) if abs(sums[e]) <= tol}
        sig = signature_from_flat(final, flat)
        maximal = all(np.abs(A[e]).max() <= ROW_TOL for e in flat)
        g = groups.get(sig)
        if g is None:
            g = groups[sig] = FanGroup(sig, 0, maximal, bary.copy(), bary.copy(), -np.inf, A)
        g.count += 1
        g.maximal = g.maximal and maximal
        g.bary_min = np.minimum(g.bary_min, bary)
        g.bary_max = np.maximum(g.bary_max, bary)
        g.max_violation = max(g.max_violation, float((g.cone @ omega).max()))
    ordered = sorted(groups.values(), key=lambda g: g.signature.faces)
    return FanReport(resolution, ordered, skipped, samples)


__all__ = [
    "ConeSpec",
    "FanGroup",
    "FanReport",
    "delaunay_cone",
    "fan_sample",
    "realizable_weights",
    "simplex_grid",
]
