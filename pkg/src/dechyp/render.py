"""SVG rendering of developed tessellations in the Poincare disc."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .dectri import face_vector, gram_matrix, lift_triangle
from .errors import NotConverged
from .flipper import DEFAULT_TOL, place_across
from .minkcore import CONE, CUSP, mcross, mnorm2
from .surface import EdgeClass, delaunay_report

STROKE = 0.004
FMT = "{:.6f}"


@dataclass
class PlacedTriangle:
    t: int
    C: np.ndarray
    layer: int


@dataclass
class RenderScene:
    """Developed copies plus everything projected to the disc."""

    copies: list
    cycles: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    duals: list = field(default_factory=list)
    points: list = field(default_factory=list)


def boost_to_origin(x):
    """Orientation-preserving Lorentz transform sending the point ``x`` to (1, 0, 0)."""
    g = x[0]
    p = x[1:]
    B = np.eye(3)
    B[0, 0] = g
    B[0, 1:] = -p
    B[1:, 0] = -p
    B[1:, 1:] += np.outer(p, p) / (1 + g)
    return B


def _timelike_unit(X):
    n2 = mnorm2(X)
    if n2 >= 0:
        return None
    x = X / math.sqrt(-n2)
    return x if x[0] > 0 else -x


def _key(t, C):
    return (t,) + tuple(np.round(C.ravel(), 6) + 0.0)


def develop(S, omega, depth, seed=0):
    """Breadth-first development of ``depth`` layers of triangle copies."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    C0 = lift_triangle(S.triangle(seed, omega)).C
    x0 = _timelike_unit(face_vector(C0))
    if x0 is None:
        x0 = _timelike_unit(C0.sum(axis=0))
    if x0 is not None:
        C0 = C0 @ boost_to_origin(x0).T
    grams = [gram_matrix(S.triangle(t, omega)) for t in range(S.n_triangles)]
    first = PlacedTriangle(seed, C0, 0)
    copies = [first]
    seen = {_key(seed, C0)}
    queue = deque([first])
    while queue:
        cur = queue.popleft()
        if cur.layer + 1 >= depth:
            continue
        for k in range(3):
            t2, k2 = divmod(S.partner[3 * cur.t + k], 3)
            C_new = _across(cur, k, t2, k2, grams[t2])
            key = _key(t2, C_new)
            if key in seen:
                continue
            seen.add(key)
            nxt = PlacedTriangle(t2, C_new, cur.layer + 1)
            copies.append(nxt)
            queue.append(nxt)
    return copies


def _across(cur, k, t2, k2, G):
    C_p, C_a, C_b = cur.C[k], cur.C[(k + 1) % 3], cur.C[(k + 2) % 3]
    C_q = place_across(C_p, C_a, C_b, G[k2, (k2 + 2) % 3], G[k2, (k2 + 1) % 3], G[k2, k2])
    out = np.empty((3, 3))
    out[k2] = C_q
    out[(k2 + 1) % 3] = C_b
    out[(k2 + 2) % 3] = C_a
    return out


# projection


def to_disc(x):
    return np.array([x[1], x[2]]) / (1.0 + x[0])


def _ideal(x):
    return np.array([x[1], x[2]]) / x[0]


def _endpoint(eps, C, L):
    """Disc point where an edge with line ``L`` meets its vertex ``C``."""
    if eps == CONE:
        return to_disc(_timelike_unit(C))
    if eps == CUSP:
        return _ideal(C if C[0] > 0 else -C)
    x = _timelike_unit(mcross(L, C))
    return to_disc(x)


def _num(x):
    s = FMT.format(x)
    return "0.000000" if s == "-0.000000" else s


def _pt(p):
    # SVG y axis points down
    return f"{_num(p[0])} {_num(-p[1])}"


def _geodesic(p, q):
    A = 2.0 * np.array([p, q])
    rhs = np.array([1.0 + p @ p, 1.0 + q @ q])
    det = np.linalg.det(A)
    if abs(det) < 1e-9:
        return f'<line x1="{_num(p[0])}" y1="{_num(-p[1])}" x2="{_num(q[0])}" y2="{_num(-q[1])}"/>'
    o = np.linalg.solve(A, rhs)
    r = math.sqrt(max(o @ o - 1.0, 0.0))
    cross = (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])
    sweep = 0 if cross > 0 else 1
    return f'<path d="M {_pt(p)} A {_num(r)} {_num(r)} 0 0 {sweep} {_pt(q)}"/>'


def _cycle_circle(C):
    denom = 1.0 + C[0]
    if abs(denom) < 1e-12:
        return None
    r2 = 1.0 + mnorm2(C)
    if r2 < 0:
        return None
    center = np.array([C[1], C[2]]) / denom
    return center, math.sqrt(r2) / abs(denom)


def _round_key(*pts):
    return frozenset(tuple(np.round(p, 6) + 0.0) for p in pts)


def build_scene(S, omega=None, depth=4, tol=DEFAULT_TOL):
    omega = S.weights if omega is None else np.asarray(omega, dtype=float)
    report = delaunay_report(S, omega, tol)
    if any(r.status is EdgeClass.VIOLATING for r in report):
        raise NotConverged("render needs a weighted Delaunay triangulation")
    flat = {r.edge for r in report if r.status is EdgeClass.FLAT}
    scene = RenderScene(develop(S, omega, depth))
    types = [[S.vertices[c].type for c in S.corners[t]] for t in range(S.n_triangles)]
    grams = [gram_matrix(S.triangle(t, omega)) for t in range(S.n_triangles)]
    seen = set()

    for cp in scene.copies:
        center = _timelike_unit(face_vector(cp.C))
        for k in range(3):
            C = cp.C[k]
            key = ("cycle", _round_key(C))
            if key in seen:
                continue
            seen.add(key)
            circ = _cycle_circle(C)
            if circ is not None:
                scene.cycles.append(circ)
            if types[cp.t][k] == CONE:
                scene.points.append(to_disc(_timelike_unit(C)))
        for k in range(3):
            if S.edge_of[3 * cp.t + k] in flat:
                continue
            a, b = (k + 1) % 3, (k + 2) % 3
            L = mcross(cp.C[a], cp.C[b])
            p = _endpoint(types[cp.t][a], cp.C[a], L)
            q = _endpoint(types[cp.t][b], cp.C[b], L)
            key = ("edge", _round_key(p, q))
            if key not in seen:
                seen.add(key)
                scene.edges.append((p, q))
            if center is None:
                continue
            t2, k2 = divmod(S.partner[3 * cp.t + k], 3)
            other = _timelike_unit(face_vector(_across(cp, k, t2, k2, grams[t2])))
            if other is None:
                continue
            u, v = to_disc(center), to_disc(other)
            key = ("dual", _round_key(u, v))
            if key not in seen:
                seen.add(key)
                scene.duals.append((u, v))
    return scene


def render_svg(S, omega=None, depth=4, tol=DEFAULT_TOL):
    """Draw the weighted Delaunay tessellation and its dual.

    Delaunay edges are solid geodesic arcs, dual edges dashed, decoration
    cycles are Euclidean circles clipped to the disc.
    """
    scene = build_scene(S, omega, depth, tol)
    cycles = [
        f'<circle cx="{_num(c[0])}" cy="{_num(-c[1])}" r="{_num(r)}"/>' for c, r in scene.cycles
    ]
    dots = [f'<circle cx="{_num(p[0])}" cy="{_num(-p[1])}" r="0.008"/>' for p in scene.points]
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="-1.05 -1.05 2.1 2.1">',
        '<defs><clipPath id="disc"><circle cx="0" cy="0" r="1"/></clipPath></defs>',
        f'<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="{STROKE}"/>',
        f'<g clip-path="url(#disc)" fill="none" stroke="#2a7ab0" stroke-width="{STROKE}">',
        *cycles,
        "</g>",
        f'<g fill="none" stroke="black" stroke-width="{STROKE}">',
        *(_geodesic(p, q) for p, q in scene.edges),
        "</g>",
        f'<g fill="none" stroke="#c0392b" stroke-width="{STROKE}" stroke-dasharray="0.02 0.015">',
        *(_geodesic(p, q) for p, q in scene.duals),
        "</g>",
        '<g fill="black">',
        *dots,
        "</g>",
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


__all__ = [
    "PlacedTriangle",
    "RenderScene",
    "boost_to_origin",
    "build_scene",
    "develop",
    "render_svg",
    "to_disc",
]
