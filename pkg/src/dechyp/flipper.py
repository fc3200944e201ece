"""Edge flips and the flip algorithm built from them.

Flips only depend on the hyperbolic metric, not on the decoration, so the
quadrilateral geometry used to compute a new diagonal is laid out with unit
weights.  The decoration enters through the tilt sums that decide which
edges to flip.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .dectri import face_vector, gram_matrix, lift_triangle
from .errors import (
    DegenerateQuad,
    ImproperDecoration,
    InvalidTriangle,
    MaxFlipsExceeded,
    NotConverged,
    NotFlippable,
)
from .minkcore import CONE, CUSP, length_from_product, mcross, mdot, mnorm2
from .surface import EdgeClass, delaunay_report, edge_tilt_sum, tilt_sum_matrix

DEFAULT_TOL = 1e-9
DEFAULT_MAX_FLIPS = 1_000_000
ORIENT_TOL = 1e-12


@dataclass(frozen=True)
class QuadLift:
    """Cycles ``C = [C1, C2, C3, C4]``; ``C2``-``C3`` is the diagonal."""

    C: np.ndarray
    L_e: np.ndarray
    F_left: np.ndarray
    F_right: np.ndarray
    vertices: tuple


class FlipRecord(NamedTuple):
    edge: int
    tilt_sum: float
    old_length: float
    new_length: float
    support_before: float
    support_after: float

    def format(self):
        return (
            f"flip edge={self.edge} tilt_sum={self.tilt_sum:.12e} "
            f"old_length={self.old_length:.12f} new_length={self.new_length:.12f} "
            f"support_before={self.support_before:.12e} "
            f"support_after={self.support_after:.12e}"
        )


@dataclass
class FlipResult:
    surface: object
    flips: int
    log: list
    reason: str
    omega: np.ndarray

    @property
    def converged(self):
        return self.reason == "Converged"


def place_across(C_p, C_a, C_b, q_a, q_b, n_q, tol=1e-9):
    """Place the cycle across the line through ``C_a``, ``C_b`` from ``C_p``.

    ``q_a``, ``q_b`` are the required products with ``C_a``, ``C_b`` and
    ``n_q`` the required squared norm.  The new cycle lies on the side of the
    line opposite to ``C_p``.
    """
    N = mcross(C_a, C_b)
    N = N / math.sqrt(mnorm2(N))
    if mdot(N, C_p) > 0:
        N = -N
    g = np.array([[mnorm2(C_a), mdot(C_a, C_b)], [mdot(C_a, C_b), mnorm2(C_b)]])
    y = np.linalg.solve(g, [q_a, q_b])
    rest = n_q - y @ g @ y
    scale = max(1.0, abs(n_q), float(np.abs(g).max() * np.abs(y).max() ** 2))
    if rest < -tol * scale:
        raise DegenerateQuad(f"no real placement (x^2 = {rest!r})")
    x = math.sqrt(max(rest, 0.0))
    return x * N + y[0] * C_a + y[1] * C_b


def layout_quad(S, e, omega=None):
    """Lift the two triangles at edge ``e`` into one chart."""
    omega = S.weights if omega is None else np.asarray(omega, dtype=float)
    h1, h2 = S.edges[e]
    t, k = divmod(h1, 3)
    t2, k2 = divmod(h2, 3)
    left = S.triangle(t, omega)
    lift = lift_triangle(left)
    idx = (k, (k + 1) % 3, (k + 2) % 3)
    C_p, C_a, C_b = (lift.C[i] for i in idx)
    G_r = gram_matrix(S.triangle(t2, omega))
    # right triangle corners are (q, b, a) starting at k2
    qb = G_r[k2, (k2 + 1) % 3]
    qa = G_r[k2, (k2 + 2) % 3]
    C_q = place_across(C_p, C_a, C_b, qa, qb, G_r[k2, k2])
    C = np.array([C_p, C_a, C_b, C_q])
    verts = (
        S.corners[t][k],
        S.corners[t][(k + 1) % 3],
        S.corners[t][(k + 2) % 3],
        S.corners[t2][k2],
    )
    return QuadLift(
        C=C,
        L_e=lift.L[k],
        F_left=lift.F,
        F_right=face_vector([C_q, C_b, C_a]),
        vertices=verts,
    )


def _orient(X, Y, Z):
    det = float(np.linalg.det(np.array([X, Y, Z])))
    return det / (np.linalg.norm(X) * np.linalg.norm(Y) * np.linalg.norm(Z))


def _retriangulate(S, e, new_length):
    h1, h2 = S.edges[e]
    t, k = divmod(h1, 3)
    t2, k2 = divmod(h2, 3)
    p, a, b = S.corners[t][k], S.corners[t][(k + 1) % 3], S.corners[t][(k + 2) % 3]
    q = S.corners[t2][k2]
    ha = 3 * t + (k + 1) % 3  # b -> p
    hb = 3 * t + (k + 2) % 3  # p -> a
    hb2 = 3 * t2 + (k2 + 1) % 3  # a -> q
    ha2 = 3 * t2 + (k2 + 2) % 3  # q -> b
    # new slot <- old half-edge; new triangles are (p, a, q) and (q, b, p)
    assign = {3 * t: hb2, 3 * t + 2: hb, 3 * t2: ha, 3 * t2 + 2: ha2}
    remap = {old: new for new, old in assign.items()}
    partner = list(S.partner)
    edge_of = list(S.edge_of)
    for new, old in assign.items():
        x = S.partner[old]
        x = remap.get(x, x)
        partner[new] = x
        partner[x] = new
        edge_of[new] = S.edge_of[old]
    d1, d2 = 3 * t + 1, 3 * t2 + 1
    partner[d1], partner[d2] = d2, d1
    edge_of[d1] = edge_of[d2] = e

    edges = list(S.edges)
    for eid, (x1, x2) in enumerate(S.edges):
        if eid == e:
            edges[eid] = (d1, d2)
        elif x1 in remap or x2 in remap:
            y1 = remap.get(x1, x1)
            edges[eid] = (y1, partner[y1])
    corners = list(S.corners)
    corners[t] = (p, a, q)
    corners[t2] = (q, b, p)
    lengths = list(S.lengths)
    lengths[e] = new_length
    return S.replace(
        corners=tuple(corners),
        partner=tuple(partner),
        edge_of=tuple(edge_of),
        edges=tuple(edges),
        lengths=tuple(lengths),
    )


def _flip(S, e, tol=DEFAULT_TOL):
    h1, h2 = S.edges[e]
    if h1 // 3 == h2 // 3:
        raise NotFlippable(f"edge {e} lies inside a self-folded triangle")
    unit = np.ones(S.n_vertices)
    try:
        quad = layout_quad(S, e, unit)
    except (InvalidTriangle, DegenerateQuad) as exc:
        raise NotFlippable(f"edge {e}: {exc}") from exc
    C_p, C_a, C_b, C_q = quad.C
    if _orient(C_p, C_a, C_q) <= ORIENT_TOL or _orient(C_q, C_b, C_p) <= ORIENT_TOL:
        raise NotFlippable(f"edge {e}: quadrilateral is not strictly convex")
    p, _, _, q = quad.vertices
    new_length = length_from_product(
        S.vertices[p].type, 1.0, S.vertices[q].type, 1.0, -mdot(C_p, C_q)
    )
    S2 = _retriangulate(S, e, new_length)
    t, t2 = h1 // 3, h2 // 3
    for tt in (t, t2):
        types, lens = S2.triangle_data(tt)
        try:
            kernels.gram_inverse(types, lens, tol)
        except InvalidTriangle as exc:
            raise NotFlippable(f"edge {e}: new triangle {tt} is invalid ({exc})") from exc
    return S2, quad


def flip_edge(S, e, omega=None, tol=DEFAULT_TOL):
    """Replace diagonal ``e`` of its quadrilateral by the other diagonal.

    ``omega`` is accepted for symmetry with the other operations; flips do
    not depend on the decoration.
    """
    return _flip(S, e, tol)[0]


def _diagonal_end(C, other):
    """Future causal vector where the diagonal meets the cycle ``C``."""
    n2 = mnorm2(C)
    if n2 > ORIENT_TOL * (C @ C):
        # flare: foot of the common perpendicular on the axis
        C = other - (mdot(C, other) / n2) * C
        n2 = mnorm2(C)
        if n2 >= 0:
            return None
    return C if C[0] > 0 else -C


def _diagonal_point(C_a, C_b):
    """Unit time-like point halfway along the diagonal between two cycles."""
    ends = [_diagonal_end(C_a, C_b), _diagonal_end(C_b, C_a)]
    if any(e is None for e in ends):
        return None
    X = sum(e / math.sqrt(max(-mnorm2(e), 0.0)) if mnorm2(e) < 0 else e for e in ends)
    n2 = mnorm2(X)
    if n2 >= 0:
        return None
    return X / math.sqrt(-n2)


def _support(X, F):
    if X is None:
        return math.nan
    p = mdot(X, F)
    if p >= 0:
        return math.nan
    return 1.0 / (p * p)


def _support_audit(S, quad, omega):
    """Support at a point of the old diagonal before and after the flip."""
    w = np.array([omega[v] for v in quad.vertices])
    C = quad.C / w[:, None]
    C_p, C_a, C_b, C_q = C
    X = _diagonal_point(quad.C[1], quad.C[2])
    before = _support(X, face_vector([C_p, C_a, C_b]))
    if X is None:
        return before, math.nan
    N = mcross(C_p, C_q)
    if mdot(N, X) * mdot(N, C_a) >= 0:
        F_new = face_vector([C_p, C_a, C_q])
    else:
        F_new = face_vector([C_q, C_b, C_p])
    return before, _support(X, F_new)


class FlipCache:
    """Memoized tilt-sum matrices and flips keyed by surface state.

    Both only depend on the triangulation and its lengths, so one cache can
    be shared across many weight vectors on the same surface.
    """

    def __init__(self):
        self._matrices = {}
        self._flips = {}

    def matrix(self, S):
        key = S.state_key()
        A = self._matrices.get(key)
        if A is None:
            A = self._matrices[key] = tilt_sum_matrix(S)
        return A

    def flip(self, S, e, tol=DEFAULT_TOL):
        key = (S.state_key(), e)
        out = self._flips.get(key)
        if out is None:
            out = self._flips[key] = _flip(S, e, tol)
        return out

    def __len__(self):
        return len(self._matrices)


def _radius(eps, w):
    if eps == CONE:
        return math.acosh(max(w, 1.0))
    if eps == CUSP:
        return math.log(2.0 * w)
    return math.asinh(w)


def _bound_diagnostic(S, omega, log):
    supports = [r.support_before for r in log if math.isfinite(r.support_before)]
    h_max = max(supports, default=math.nan)
    e_max = max(range(S.n_edges), key=lambda e: abs(S.lengths[e]))
    u, v = S.edge_endpoints(e_max)
    bound = (
        _radius(S.vertices[u].type, omega[u])
        + _radius(S.vertices[v].type, omega[v])
        + 2.0 * math.acosh(max(h_max, 1.0))
        if math.isfinite(h_max)
        else math.nan
    )
    return f"max edge length {abs(S.lengths[e_max]):.6f} (edge {e_max}); length bound {bound:.6f}"


def flip_to_delaunay(S, omega=None, tol=DEFAULT_TOL, max_flips=DEFAULT_MAX_FLIPS, cache=None,
                     audit=True):
    """Flip violating edges until every edge satisfies the local Delaunay condition.

    Edges are processed from a FIFO queue seeded in index order; a popped
    edge is re-checked and flipped only if its tilt sum exceeds ``tol``, and
    the four edges of the flipped quadrilateral are re-enqueued.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_flips < 1:
        raise ValueError("max_flips must be at least 1")
    omega = S.weights if omega is None else np.asarray(omega, dtype=float)
    queue = deque(range(S.n_edges))
    queued = set(queue)
    log = []
    flips = 0
    sums = cache.matrix(S) @ omega if cache is not None else None
    while queue:
        e = queue.popleft()
        queued.discard(e)
        s = float(sums[e]) if sums is not None else edge_tilt_sum(S, e, omega)
        if s <= tol:
            continue
        if flips >= max_flips:
            result = FlipResult(S, flips, log, "MaxFlips", omega)
            raise MaxFlipsExceeded(
                f"no convergence after {flips} flips; " + _bound_diagnostic(S, omega, log),
                result,
            )
        try:
            S2, quad = cache.flip(S, e, tol) if cache is not None else _flip(S, e, tol)
        except NotFlippable as exc:
            raise ImproperDecoration(
                f"violating edge {e} (tilt sum {s:.3e}) cannot be flipped: {exc}"
            ) from exc
        if audit:
            before, after = _support_audit(S, quad, omega)
        else:
            before = after = math.nan
        log.append(FlipRecord(e, s, S.lengths[e], S2.lengths[e], before, after))
        flips += 1
        h1, h2 = S2.edges[e]
        t, t2 = h1 // 3, h2 // 3
        for h in (3 * t, 3 * t + 2, 3 * t2, 3 * t2 + 2):
            n = S2.edge_of[h]
            if n not in queued:
                queue.append(n)
                queued.add(n)
        S = S2
        if cache is not None:
            sums = cache.matrix(S) @ omega
    return FlipResult(S, flips, log, "Converged", omega)


def format_log(log):
    return "\n".join(r.format() for r in log)


# fingerprints


@dataclass(frozen=True)
class TessellationSignature:
    faces: tuple

    @property
    def n_faces(self):
        return len(self.faces)

    def face_sizes(self):
        return tuple(len(f) for f in self.faces)

    def __str__(self):
        parts = []
        for face in self.faces:
            parts.append("(" + " ".join(f"{v}:{x:.6f}" for v, x in face) + ")")
        return " ".join(parts)


def _flat_edges(S, omega, tol):
    report = delaunay_report(S, omega, tol)
    if any(r.status is EdgeClass.VIOLATING for r in report):
        bad = [r.edge for r in report if r.status is EdgeClass.VIOLATING]
        raise NotConverged(f"edges {bad} violate the local Delaunay condition")
    return {r.edge for r in report if r.status is EdgeClass.FLAT}, report


def _next(h):
    t, k = divmod(h, 3)
    return 3 * t + (k + 1) % 3


def _face_boundaries(S, flat):
    visited = set()
    faces = []
    for h in range(3 * S.n_triangles):
        if h in visited or S.edge_of[h] in flat:
            continue
        cycle = []
        cur = h
        while True:
            cycle.append(cur)
            visited.add(cur)
            nxt = _next(cur)
            while S.edge_of[nxt] in flat:
                nxt = _next(S.partner[nxt])
            cur = nxt
            if cur == h:
                break
        faces.append(cycle)
    return faces


def _canonical(seq):
    return min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))


def signature_from_flat(S, flat):
    faces = []
    for cycle in _face_boundaries(S, flat):
        seq = [
            (S.vertices[S.endpoints(h)[0]].id, round(S.lengths[S.edge_of[h]], 6) + 0.0)
            for h in cycle
        ]
        faces.append(_canonical(seq))
    return TessellationSignature(tuple(sorted(faces)))


def tessellation_signature(S, omega=None, tol=DEFAULT_TOL):
    """Canonical fingerprint of the tessellation after merging flat edges."""
    flat, _ = _flat_edges(S, omega, tol)
    return signature_from_flat(S, flat)


# Voronoi dual


class DualVertex(NamedTuple):
    face: int
    triangles: tuple
    F: np.ndarray
    norm2: float
    center: object


class DualEdge(NamedTuple):
    edge: int
    faces: tuple


@dataclass
class DualComplex:
    vertices: list
    edges: list
    n_faces: int

    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + self.n_faces


def _merged_faces(S, flat):
    parent = list(range(S.n_triangles))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in flat:
        h1, h2 = S.edges[e]
        r1, r2 = find(h1 // 3), find(h2 // 3)
        if r1 != r2:
            parent[max(r1, r2)] = min(r1, r2)
    roots = sorted({find(t) for t in range(S.n_triangles)})
    label = {r: i for i, r in enumerate(roots)}
    members = [[] for _ in roots]
    for t in range(S.n_triangles):
        members[label[find(t)]].append(t)
    return [label[find(t)] for t in range(S.n_triangles)], members


def voronoi_dual(S, omega=None, tol=DEFAULT_TOL):
    """Dual complex of the weighted Delaunay tessellation.

    One 0-cell per merged face, located at the face vector's time-like
    direction (in the chart of the face's first triangle); one 1-cell per
    non-flat edge.
    """
    omega = S.weights if omega is None else np.asarray(omega, dtype=float)
    flat, _ = _flat_edges(S, omega, tol)
    face_of, members = _merged_faces(S, flat)
    verts = []
    for f, tris in enumerate(members):
        F = lift_triangle(S.triangle(tris[0], omega)).F
        n2 = mnorm2(F)
        center = None
        if n2 < -tol:
            center = F / math.sqrt(-n2)
            if center[0] < 0:
                center = -center
        verts.append(DualVertex(f, tuple(tris), F, n2, center))
    edges = [
        DualEdge(e, (face_of[h1 // 3], face_of[h2 // 3]))
        for e, (h1, h2) in enumerate(S.edges)
        if e not in flat
    ]
    return DualComplex(verts, edges, S.n_vertices)


def face_vectors(S, omega=None):
    omega = S.weights if omega is None else np.asarray(omega, dtype=float)
    return [lift_triangle(S.triangle(t, omega)).F for t in range(S.n_triangles)]


def random_flips(S, n, rng, tol=DEFAULT_TOL, max_attempts=None):
    """Apply up to ``n`` random geometrically valid flips."""
    attempts = 0
    max_attempts = max_attempts or 20 * n + 20
    done = 0
    while done < n and attempts < max_attempts:
        attempts += 1
        e = int(rng.integers(S.n_edges))
        try:
            S = flip_edge(S, e, tol=tol)
        except NotFlippable:
            continue
        done += 1
    return S


__all__ = [
    "DualComplex",
    "FlipCache",
    "FlipRecord",
    "FlipResult",
    "QuadLift",
    "TessellationSignature",
    "face_vectors",
    "flip_edge",
    "flip_to_delaunay",
    "format_log",
    "layout_quad",
    "place_across",
    "random_flips",
    "signature_from_flat",
    "tessellation_signature",
    "voronoi_dual",
]
