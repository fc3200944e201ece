"""Orbit checks for the convex-hull picture of weighted Delaunay tessellations.

``SL(2, R)`` acts on symmetric matrices by ``X -> g X g^T``; in (t, a, b)
coordinates this is a Minkowski isometry.  For a Fuchsian group given by
generators, the vertex cycles of a decorated surface lift to an orbit, and
every weighted Delaunay face vector ``F`` satisfies ``<C, F> <= -1`` for all
orbit cycles ``C``.  This module checks that inequality up to a bounded word
length; it never certifies more than "no violation up to depth d".
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import BadDeterminant, FormatVersionError, ParseError, SingularFace
from .minkcore import METRIC, mnorm2

FORMAT = "dechyp-orbit-v1"
DET_TOL = 1e-12
DEDUP_DECIMALS = 9
COND_MAX = 1e12


def group_element(m):
    g = np.asarray(m, dtype=float)
    if g.shape != (2, 2):
        raise BadDeterminant(f"expected a 2x2 matrix, got shape {g.shape}")
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if abs(det - 1.0) > DET_TOL:
        raise BadDeterminant(f"det = {det!r}")
    return g


def to_matrix(X):
    t, a, b = X
    return np.array([[t + b, a], [a, t - b]])


def from_matrix(M):
    return np.array([(M[0, 0] + M[1, 1]) / 2, (M[0, 1] + M[1, 0]) / 2, (M[0, 0] - M[1, 1]) / 2])


def sym2_action(g, X):
    """Apply ``X -> g X g^T`` in (t, a, b) coordinates."""
    g = group_element(g)
    return from_matrix(g @ to_matrix(X) @ g.T)


def action_matrix(g):
    """3x3 matrix of :func:`sym2_action` acting on column vectors."""
    return np.column_stack([sym2_action(g, e) for e in np.eye(3)])


def inverse(g):
    g = group_element(g)
    return np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])


def rotation_about_origin(phi):
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    return np.array([[c, -s], [s, c]])


def boost(s):
    """Translation by ``s`` along the geodesic through the origin in direction b."""
    return np.diag([math.exp(s / 2), math.exp(-s / 2)])


def _sqrt_spd(M):
    root_det = math.sqrt(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    return (M + root_det * np.eye(2)) / math.sqrt(M[0, 0] + M[1, 1] + 2 * root_det)


def rotation_about(center, phi):
    """Rotation by ``phi`` about a hyperboloid point."""
    c = np.asarray(center, dtype=float)
    c = c / math.sqrt(-mnorm2(c))
    h = _sqrt_spd(to_matrix(c))
    g = h @ rotation_about_origin(phi) @ np.linalg.inv(h)
    det = np.linalg.det(g)
    return g / math.sqrt(det)


@dataclass
class OrbitStore:
    vectors: np.ndarray
    depth: int
    words: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.vectors)


def _key(v):
    return tuple(np.round(v, DEDUP_DECIMALS) + 0.0)


def orbit_generate(gens, seeds, depth):
    """Breadth-first closure of ``seeds`` under ``gens`` and their inverses."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    mats = []
    for g in gens:
        mats.append(action_matrix(g))
        mats.append(action_matrix(inverse(g)))
    seen = {}
    vectors = []
    words = []
    frontier = deque()
    for s in seeds:
        s = np.asarray(s, dtype=float)
        k = _key(s)
        if k not in seen:
            seen[k] = len(vectors)
            vectors.append(s)
            words.append(0)
            frontier.append(s)
    for level in range(1, depth + 1):
        nxt = deque()
        for v in frontier:
            for A in mats:
                w = A @ v
                k = _key(w)
                if k not in seen:
                    seen[k] = len(vectors)
                    vectors.append(w)
                    words.append(level)
                    nxt.append(w)
        frontier = nxt
    return OrbitStore(np.array(vectors).reshape(-1, 3), depth, words)


class Violation(NamedTuple):
    face: int
    cycle: int
    product: float


class FaceCheck(NamedTuple):
    F: np.ndarray
    norm2: float
    elliptic: bool
    max_product: float


@dataclass
class HullReport:
    faces: list
    violations: list
    depth: int
    orbit_size: int
    tol: float

    @property
    def ok(self):
        return not self.violations and all(f.elliptic for f in self.faces)

    def summary(self):
        verdict = "no violation found" if self.ok else f"{len(self.violations)} violations"
        return f"{verdict} up to depth {self.depth} ({self.orbit_size} orbit cycles)"


def hull_face_vector(triple):
    C = np.asarray(triple, dtype=float)
    A = C @ METRIC
    if np.linalg.cond(A) > COND_MAX:
        raise SingularFace("face cycles are linearly dependent")
    return np.linalg.solve(A, -np.ones(3))


def hull_support_verify(faces, orbit, tol=1e-7):
    """Check ``<C, F> <= -1 + tol`` for every face and orbit cycle."""
    vecs = orbit.vectors if isinstance(orbit, OrbitStore) else np.asarray(orbit, dtype=float)
    depth = orbit.depth if isinstance(orbit, OrbitStore) else 0
    checks = []
    violations = []
    for i, triple in enumerate(faces):
        F = hull_face_vector(triple)
        products = vecs @ (METRIC @ F)
        n2 = mnorm2(F)
        checks.append(FaceCheck(F, n2, n2 < -tol, float(products.max())))
        for j in np.nonzero(products > -1.0 + tol)[0]:
            violations.append(Violation(i, int(j), float(products[j])))
    return HullReport(checks, violations, depth, len(vecs), tol)


# file format


@dataclass
class OrbitSpec:
    generators: list
    seeds: list
    depth: int
    faces: list


def _matrix_list(value, shape, where):
    arr = np.asarray(value, dtype=float)
    if arr.shape[1:] != shape or not np.all(np.isfinite(arr)):
        raise ParseError(f"expected entries of shape {shape}", field=where)
    return arr


def parse_orbit(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", line=1)
    if doc.get("format") != FORMAT:
        raise FormatVersionError(f"unsupported format {doc.get('format')!r}, expected {FORMAT!r}")
    keys = {"format", "generators", "seeds", "depth", "faces"}
    unknown = set(doc) - keys
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}", field="<root>")
    missing = keys - set(doc)
    if missing:
        raise ParseError(f"missing fields {sorted(missing)}", field="<root>")
    try:
        gens = [group_element(g) for g in _matrix_list(doc["generators"], (2, 2), "generators")]
        seeds = list(_matrix_list(doc["seeds"], (3,), "seeds"))
        faces = list(_matrix_list(doc["faces"], (3, 3), "faces"))
    except (ParseError, BadDeterminant):
        raise
    except (ValueError, IndexError, TypeError) as exc:
        raise ParseError(str(exc)) from None
    depth = doc["depth"]
    if isinstance(depth, bool) or not isinstance(depth, int) or depth < 0:
        raise ParseError("depth must be a nonnegative integer", field="depth")
    return OrbitSpec(gens, seeds, depth, faces)


def load_orbit(path):
    with open(path, encoding="utf-8") as fh:
        return parse_orbit(fh.read())


def dump_orbit(spec):
    return json.dumps(
        {
            "format": FORMAT,
            "generators": [np.asarray(g).tolist() for g in spec.generators],
            "seeds": [np.asarray(s).tolist() for s in spec.seeds],
            "depth": spec.depth,
            "faces": [np.asarray(f).tolist() for f in spec.faces],
        },
        indent=1,
    )


__all__ = [
    "HullReport",
    "OrbitSpec",
    "OrbitStore",
    "action_matrix",
    "boost",
    "dump_orbit",
    "group_element",
    "hull_support_verify",
    "inverse",
    "load_orbit",
    "orbit_generate",
    "parse_orbit",
    "rotation_about",
    "rotation_about_origin",
    "sym2_action",
]
