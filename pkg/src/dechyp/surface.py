"""Half-edge model of a decorated surface of finite type.

A half-edge is the pair ``(t, k)``: the side of triangle ``t`` opposite its
corner ``k``.  It runs from ``corners[t][(k + 1) % 3]`` to
``corners[t][(k + 2) % 3]`` (corners are counterclockwise), and is stored
flat as ``h = 3 * t + k``.  Every half-edge is glued to exactly one other
half-edge with the reverse orientation; each gluing pair is an edge and
carries one signed generalized length.  Loops and multi-edges are allowed.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .dectri import DecoratedTriangle, lift_triangle
from .errors import FormatVersionError, InvalidTriangle, ParseError, TopologyError
from .minkcore import CONE, CUSP, FLARE, VERTEX_TYPES, tau

FORMAT = "dechyp-surface-v1"
DEFAULT_TOL = 1e-9


class Vertex(NamedTuple):
    id: int
    type: int
    weight: float


def half_edge(t, k):
    return 3 * t + k


@dataclass(frozen=True, eq=False)
class DecoratedSurface:
    vertices: tuple
    corners: tuple
    partner: tuple
    edge_of: tuple
    edges: tuple
    lengths: tuple
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v.id: i for i, v in enumerate(self.vertices)})

    @classmethod
    def build(cls, vertices, corners, gluing, lengths):
        """Assemble and check a surface.

        ``corners`` lists vertex indices (not ids); ``gluing`` lists pairs of
        flat half-edge indices, one pair per edge.
        """
        vertices = tuple(Vertex(int(v[0]), int(v[1]), float(v[2])) for v in vertices)
        corners = tuple(tuple(int(c) for c in tri) for tri in corners)
        n_half = 3 * len(corners)
        partner = [-1] * n_half
        edge_of = [-1] * n_half
        edges = []
        for e, (h1, h2) in enumerate(gluing):
            for h in (h1, h2):
                if not 0 <= h < n_half:
                    raise TopologyError(f"edge {e}: half-edge {divmod(h, 3)} does not exist")
                if partner[h] != -1:
                    raise TopologyError(f"half-edge {divmod(h, 3)} is glued twice")
            if h1 == h2:
                raise TopologyError(f"edge {e}: half-edge {divmod(h1, 3)} is glued to itself")
            partner[h1], partner[h2] = h2, h1
            edge_of[h1] = edge_of[h2] = e
            edges.append((h1, h2))
        missing = [divmod(h, 3) for h in range(n_half) if partner[h] == -1]
        if missing:
            raise TopologyError(f"unglued half-edges {missing}")
        if len(lengths) != len(edges):
            raise TopologyError("one length per edge is required")
        surf = cls(
            vertices=vertices,
            corners=corners,
            partner=tuple(partner),
            edge_of=tuple(edge_of),
            edges=tuple(edges),
            lengths=tuple(float(x) for x in lengths),
        )
        surf._check_topology()
        return surf

    def _check_topology(self):
        nv = len(self.vertices)
        for t, tri in enumerate(self.corners):
            if any(not 0 <= c < nv for c in tri):
                raise TopologyError(f"triangle {t} references an unknown vertex")
        for h in range(len(self.partner)):
            u, v = self.endpoints(h)
            pu, pv = self.endpoints(self.partner[h])
            if (pu, pv) != (v, u):
                raise TopologyError(
                    f"gluing of {divmod(h, 3)} with {divmod(self.partner[h], 3)} "
                    "does not reverse orientation"
                )
        # every vertex must have a single cyclic link
        seen = set()
        links = [0] * nv
        for t in range(len(self.corners)):
            for k in range(3):
                if (t, k) in seen:
                    continue
                links[self.corners[t][k]] += 1
                for corner in self.corner_cycle(t, k):
                    seen.add(corner)
        bad = [self.vertices[i].id for i in range(nv) if links[i] != 1]
        if bad:
            raise TopologyError(f"vertices {bad} do not have a single disc neighbourhood")

    # combinatorics

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_triangles(self):
        return len(self.corners)

    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_triangles

    @property
    def types(self):
        return tuple(v.type for v in self.vertices)

    @property
    def weights(self):
        return np.array([v.weight for v in self.vertices])

    def index_of(self, vertex_id):
        return self._index[vertex_id]

    def endpoints(self, h):
        t, k = divmod(h, 3)
        tri = self.corners[t]
        return tri[(k + 1) % 3], tri[(k + 2) % 3]

    def edge_endpoints(self, e):
        return self.endpoints(self.edges[e][0])

    def corner_cycle(self, t, k):
        """Corners around the vertex at corner ``(t, k)``, in rotation order."""
        out = []
        while True:
            out.append((t, k))
            t2, j = divmod(self.partner[half_edge(t, (k + 2) % 3)], 3)
            t, k = t2, (j + 2) % 3
            if (t, k) == out[0]:
                return out

    def triangle(self, t, omega=None):
        omega = self.weights if omega is None else omega
        tri = self.corners[t]
        return DecoratedTriangle(
            tuple(self.vertices[c].type for c in tri),
            tuple(float(omega[c]) for c in tri),
            tuple(self.lengths[self.edge_of[half_edge(t, k)]] for k in range(3)),
        )

    def triangle_data(self, t):
        """Types and lengths of triangle ``t`` as plain tuples (kernel input)."""
        tri = self.corners[t]
        types = (self.vertices[tri[0]].type, self.vertices[tri[1]].type, self.vertices[tri[2]].type)
        base = 3 * t
        lens = (
            self.lengths[self.edge_of[base]],
            self.lengths[self.edge_of[base + 1]],
            self.lengths[self.edge_of[base + 2]],
        )
        return types, lens

    def state_key(self):
        return (self.corners, self.partner, self.lengths)

    def replace(self, **changes):
        data = dict(
            vertices=self.vertices,
            corners=self.corners,
            partner=self.partner,
            edge_of=self.edge_of,
            edges=self.edges,
            lengths=self.lengths,
        )
        data.update(changes)
        return DecoratedSurface(**data)

    def with_weights(self, omega):
        verts = tuple(v._replace(weight=float(w)) for v, w in zip(self.vertices, omega, strict=True))
        return self.replace(vertices=verts)

    # serialization

    def to_dict(self):
        ids = [v.id for v in self.vertices]
        return {
            "format": FORMAT,
            "vertices": [{"id": v.id, "type": v.type, "weight": v.weight} for v in self.vertices],
            "triangles": [{"corners": [ids[c] for c in tri]} for tri in self.corners],
            "gluing": [[list(divmod(h1, 3)), list(divmod(h2, 3))] for h1, h2 in self.edges],
            "lengths": [{"pair": e, "value": x} for e, x in enumerate(self.lengths)],
        }

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2)


# parsing

_TOP_KEYS = {"format", "vertices", "triangles", "gluing", "lengths"}


def _number(value, where, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError("expected a number", field=where)
    if integer and not (isinstance(value, int) or float(value).is_integer()):
        raise ParseError("expected an integer", field=where)
    if not math.isfinite(value):
        raise ParseError("non-finite number", field=where)
    return int(value) if integer else float(value)


def _object(value, keys, where):
    if not isinstance(value, dict):
        raise ParseError("expected an object", field=where)
    unknown = set(value) - keys
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}", field=where)
    missing = keys - set(value)
    if missing:
        raise ParseError(f"missing fields {sorted(missing)}", field=where)
    return value


def _list(value, where):
    if not isinstance(value, list):
        raise ParseError("expected a list", field=where)
    return value


def parse_surface(text):
    """Parse the ``dechyp-surface-v1`` JSON format."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", line=1)
    if doc.get("format") != FORMAT:
        raise FormatVersionError(f"unsupported format {doc.get('format')!r}, expected {FORMAT!r}")
    _object(doc, _TOP_KEYS, "<root>")

    vertices = []
    index = {}
    for i, raw in enumerate(_list(doc["vertices"], "vertices")):
        where = f"vertices[{i}]"
        _object(raw, {"id", "type", "weight"}, where)
        vid = _number(raw["id"], where + ".id", integer=True)
        vtype = _number(raw["type"], where + ".type", integer=True)
        if vtype not in VERTEX_TYPES:
            raise ParseError("type must be -1, 0 or 1", field=where + ".type")
        weight = _number(raw["weight"], where + ".weight")
        if vid in index:
            raise ParseError(f"duplicate vertex id {vid}", field=where + ".id")
        index[vid] = len(vertices)
        vertices.append((vid, vtype, weight))

    corners = []
    for i, raw in enumerate(_list(doc["triangles"], "triangles")):
        where = f"triangles[{i}]"
        _object(raw, {"corners"}, where)
        cs = _list(raw["corners"], where + ".corners")
        if len(cs) != 3:
            raise ParseError("a triangle has three corners", field=where + ".corners")
        tri = []
        for j, c in enumerate(cs):
            c = _number(c, f"{where}.corners[{j}]", integer=True)
            if c not in index:
                raise ParseError(f"unknown vertex id {c}", field=f"{where}.corners[{j}]")
            tri.append(index[c])
        corners.append(tri)

    gluing = []
    n_tri = len(corners)
    for i, raw in enumerate(_list(doc["gluing"], "gluing")):
        where = f"gluing[{i}]"
        pair = _list(raw, where)
        if len(pair) != 2:
            raise ParseError("a gluing entry has two half-edges", field=where)
        hs = []
        for j, he in enumerate(pair):
            he = _list(he, f"{where}[{j}]")
            if len(he) != 2:
                raise ParseError("a half-edge is [triangle, corner]", field=f"{where}[{j}]")
            t = _number(he[0], f"{where}[{j}][0]", integer=True)
            k = _number(he[1], f"{where}[{j}][1]", integer=True)
            if not (0 <= t < n_tri and 0 <= k < 3):
                raise ParseError(f"half-edge ({t}, {k}) does not exist", field=f"{where}[{j}]")
            hs.append(half_edge(t, k))
        gluing.append(tuple(hs))

    lengths = [None] * len(gluing)
    for i, raw in enumerate(_list(doc["lengths"], "lengths")):
        where = f"lengths[{i}]"
        _object(raw, {"pair", "value"}, where)
        pair = _number(raw["pair"], where + ".pair", integer=True)
        value = _number(raw["value"], where + ".value")
        if not 0 <= pair < len(gluing):
            raise ParseError(f"no gluing entry {pair}", field=where + ".pair")
        if lengths[pair] is not None and lengths[pair] != value:
            raise ParseError(f"conflicting lengths for pair {pair}", field=where)
        lengths[pair] = value
    missing = [e for e, x in enumerate(lengths) if x is None]
    if missing:
        raise ParseError(f"no length for gluing entries {missing}", field="lengths")

    return DecoratedSurface.build(vertices, corners, gluing, lengths)


def load_surface(path):
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read())


# validation


class EdgeClass(enum.Enum):
    STRICT = "strict"
    FLAT = "flat"
    VIOLATING = "violating"


class EdgeStatus(NamedTuple):
    edge: int
    tilt_sum: float
    status: EdgeClass


class ProperCheck(NamedTuple):
    edge: int
    u: int
    v: int
    lhs: float
    rhs: float
    ok: bool


@dataclass
class ValidationReport:
    triangles: list
    weights_ok: list
    angle_totals: list
    properness: list
    euler_characteristic: int

    @property
    def triangles_ok(self):
        return all(ok for _, ok, _ in self.triangles)

    @property
    def proper(self):
        return all(c.ok for c in self.properness)

    @property
    def ok(self):
        return self.triangles_ok and all(self.weights_ok) and self.proper


def _weight_ok(eps, w):
    if eps == CONE:
        return w > 1.0
    return w > 0.0


def properness_checks(S, omega=None):
    """Edge relaxation of the properness constraints.

    For every edge ``{u, v}`` with ``v`` a cone vertex require
    ``omega_u < tau_{eps_u}(l) * omega_v``.  Since an edge is at least as long
    as the shortest path between its endpoints, this is necessary but not
    sufficient.
    """
    omega = S.weights if omega is None else np.asarray(omega, dtype=float)
    out = []
    for e in range(S.n_edges):
        a, b = S.edge_endpoints(e)
        length = S.lengths[e]
        for u, v in ((a, b), (b, a)):
            if S.vertices[v].type != CONE:
                continue
            lhs = float(omega[u])
            rhs = tau(S.vertices[u].type, length) * float(omega[v])
            out.append(ProperCheck(e, u, v, lhs, rhs, lhs < rhs))
            if a == b:
                break
    return out


def is_proper(S, omega=None):
    return all(c.ok for c in properness_checks(S, omega))


def validate_surface(S, omega=None, tol=DEFAULT_TOL):
    omega = S.weights if omega is None else np.asarray(omega, dtype=float)
    tri_reports = []
    totals = [0.0] * S.n_vertices
    for t in range(S.n_triangles):
        try:
            lift = lift_triangle(S.triangle(t, omega), tol)
        except (InvalidTriangle, ValueError) as exc:
            tri_reports.append((t, False, str(exc)))
            continue
        tri_reports.append((t, True, ""))
        for k, c in enumerate(S.corners[t]):
            totals[c] += lift.angles[k]
    weights_ok = [_weight_ok(v.type, float(omega[i])) for i, v in enumerate(S.vertices)]
    return ValidationReport(
        triangles=tri_reports,
        weights_ok=weights_ok,
        angle_totals=totals,
        properness=properness_checks(S, omega),
        euler_characteristic=S.euler_characteristic(),
    )


# tilts


def triangle_tilts(S, omega=None):
    omega = S.weights if omega is None else omega
    out = []
    for t, tri in enumerate(S.corners):
        types, lens = S.triangle_data(t)
        w = (float(omega[tri[0]]), float(omega[tri[1]]), float(omega[tri[2]]))
        out.append(kernels.tilts(types, w, lens))
    return out


def edge_tilt_sum(S, e, omega=None):
    """Sum of the tilts of edge ``e`` in its two incident triangles."""
    omega = S.weights if omega is None else omega
    total = 0.0
    for h in S.edges[e]:
        t, k = divmod(h, 3)
        types, lens = S.triangle_data(t)
        tri = S.corners[t]
        w = (float(omega[tri[0]]), float(omega[tri[1]]), float(omega[tri[2]]))
        total += kernels.tilts(types, w, lens)[k]
    return total


def classify(tilt_sum, tol):
    if tilt_sum > tol:
        return EdgeClass.VIOLATING
    if tilt_sum < -tol:
        return EdgeClass.STRICT
    return EdgeClass.FLAT


def delaunay_report(S, omega=None, tol=DEFAULT_TOL):
    tilts = triangle_tilts(S, omega)
    out = []
    for e, (h1, h2) in enumerate(S.edges):
        t1, k1 = divmod(h1, 3)
        t2, k2 = divmod(h2, 3)
        s = tilts[t1][k1] + tilts[t2][k2]
        out.append(EdgeStatus(e, s, classify(s, tol)))
    return out


def tilt_sum_matrix(S):
    """Matrix ``A`` (edges x vertices) with ``A @ omega`` the edge tilt sums.

    The rows only depend on vertex types and lengths.
    """
    A = np.zeros((S.n_edges, S.n_vertices))
    for t, tri in enumerate(S.corners):
        types, lens = S.triangle_data(t)
        m = kernels.tilt_matrix(types, lens)
        for k in range(3):
            e = S.edge_of[3 * t + k]
            for j in range(3):
                A[e, tri[j]] += m[3 * k + j]
    return A


def cusp_gauge(S, v, delta):
    """Move the auxiliary centre of cusp ``v`` (vertex index) by ``delta``."""
    if S.vertices[v].type != CUSP:
        raise ValueError("the gauge freedom only exists at cusps")
    lengths = list(S.lengths)
    for e in range(S.n_edges):
        a, b = S.edge_endpoints(e)
        lengths[e] += delta * ((a == v) + (b == v))
    weights = S.weights
    weights[v] *= math.exp(delta)
    return S.replace(lengths=tuple(lengths)).with_weights(weights)


__all__ = [
    "CONE",
    "CUSP",
    "FLARE",
    "DecoratedSurface",
    "EdgeClass",
    "EdgeStatus",
    "ValidationReport",
    "Vertex",
    "cusp_gauge",
    "delaunay_report",
    "edge_tilt_sum",
    "is_proper",
    "load_surface",
    "parse_surface",
    "properness_checks",
    "tilt_sum_matrix",
    "triangle_tilts",
    "validate_surface",
]
