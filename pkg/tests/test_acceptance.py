"""Acceptance criteria 1-12.

Each test carries a ``criterion`` marker; the pytest summary prints one
PASS/FAIL line per criterion.  Run standalone with
``python tests/test_acceptance.py``.
"""

import itertools
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from conftest import FIXTURES, data_path, load_fixture
from triangles import TYPE_TRIPLES, corpus

from dechyp.confspace import delaunay_cone, fan_sample, realizable_weights
from dechyp.dectri import (
    cosine_law_angle,
    lift_triangle,
    support_value,
    tilt_coefficients,
    tilts,
    tilts_matrix_route,
)
from dechyp.flipper import (
    DEFAULT_MAX_FLIPS,
    face_vectors,
    flip_edge,
    flip_to_delaunay,
    layout_quad,
    random_flips,
    tessellation_signature,
    voronoi_dual,
)
from dechyp.hull import hull_support_verify, orbit_generate, parse_orbit
from dechyp.minkcore import CONE, length_from_product, mdot, mnorm2, tau_prime
from dechyp.surface import (
    EdgeClass,
    cusp_gauge,
    delaunay_report,
    edge_tilt_sum,
    is_proper,
)

TOL = 1e-9
N_WEIGHTS = 100
N_STARTS = 5


@pytest.fixture(scope="module")
def triangles():
    tris = corpus(n_per_triple=40, seed=20240601)
    assert len(tris) >= 1000
    return tris


def proper_weights(S, rng, n):
    out = []
    while len(out) < n:
        if S.n_vertices == 1:
            w = np.array([rng.uniform(0.2, 5.0)])
        else:
            w = realizable_weights(S, rng.dirichlet(np.ones(S.n_vertices))) * rng.uniform(0.6, 2.0)
        if is_proper(S, w):
            out.append(w)
    return out


@pytest.fixture(scope="module")
def flip_runs():
    """(fixture, weights, [results from the original and scrambled starts])."""
    rng = np.random.default_rng(31337)
    runs = []
    for name in FIXTURES:
        S = load_fixture(name)
        for w in proper_weights(S, rng, N_WEIGHTS):
            starts = [S] + [random_flips(S, int(rng.integers(1, 7)), rng) for _ in range(N_STARTS)]
            runs.append((name, w, [flip_to_delaunay(S0, w, TOL, DEFAULT_MAX_FLIPS) for S0 in starts]))
    return runs


@pytest.mark.criterion(1, "formula identities on randomized triangles")
def test_formula_identities(triangles):
    for tri in triangles:
        lift = lift_triangle(tri)
        for k in range(3):
            # norm identity
            assert mnorm2(lift.C[k]) == pytest.approx(tri.types[k] / tri.weights[k] ** 2, abs=1e-9)
            # product and length round trip
            a, b = (k + 1) % 3, (k + 2) % 3
            q = -mdot(lift.C[a], lift.C[b])
            back = length_from_product(tri.types[a], tri.weights[a], tri.types[b], tri.weights[b], q)
            expected = abs(tri.lengths[k]) if tri.types[a] * tri.types[b] == 1 else tri.lengths[k]
            assert back == pytest.approx(expected, abs=1e-9)
            # cosine law against the line-product angle
            if tri.types[k] == CONE:
                assert lift.angles[k] == pytest.approx(cosine_law_angle(tri, k), abs=1e-9)
            # dual basis
            scaled = -(tri.weights[k] / tau_prime(tri.types[k], lift.feet[k])) * lift.C[k]
            for m in range(3):
                assert mdot(scaled, lift.L[m]) == pytest.approx(float(k == m), abs=1e-9)
    ordered = {(u, v) for tri in triangles for u, v in itertools.permutations(tri.types, 2)}
    assert ordered == set(itertools.product((-1, 0, 1), repeat=2))
    assert {tri.types for tri in triangles} == set(TYPE_TRIPLES)
    print("criterion 1: PASS")


@pytest.mark.criterion(2, "tilt routes agree and tilts are linear in the weights")
def test_tilt_cross_check(triangles):
    rng = np.random.default_rng(2)
    for tri in triangles:
        assert np.allclose(tilts(tri), tilts_matrix_route(tri), atol=1e-9, rtol=0)
        M = tilt_coefficients(tri)
        for w in rng.uniform(0.2, 5.0, size=(N_WEIGHTS, 3)):
            assert np.allclose(M @ w, tilts(tri.with_weights(w)), atol=1e-9, rtol=0)
    print("criterion 2: PASS")


@pytest.mark.criterion(3, "flip algorithm converges with non-increasing support")
def test_flip_algorithm(flip_runs):
    counts = {name: 0 for name in FIXTURES}
    for name, w, results in flip_runs:
        counts[name] += 1
        for r in results:
            assert r.converged and r.flips < DEFAULT_MAX_FLIPS
            assert all(s.status is not EdgeClass.VIOLATING for s in delaunay_report(r.surface, w, TOL))
            for rec in r.log:
                assert rec.tilt_sum > TOL
                assert math.isfinite(rec.support_before) and math.isfinite(rec.support_after)
                assert rec.support_after < rec.support_before
    assert all(n >= N_WEIGHTS for n in counts.values())
    assert sum(r.flips for _, _, rs in flip_runs for r in rs) > 0
    print("criterion 3: PASS")


@pytest.mark.criterion(4, "scrambled starts reach the same tessellation")
def test_uniqueness(flip_runs):
    for _, w, results in flip_runs:
        sigs = {tessellation_signature(r.surface, w, TOL) for r in results}
        assert len(results) == N_STARTS + 1 and len(sigs) == 1
    print("criterion 4: PASS")


@pytest.mark.criterion(5, "converged face vectors are elliptic")
def test_ellipticity(flip_runs):
    for _, w, results in flip_runs:
        for r in results:
            for F in face_vectors(r.surface, w):
                assert mnorm2(F) < -1e-9
    print("criterion 5: PASS")


@pytest.mark.criterion(6, "flare torus diagonal is flat, one face, one dual vertex")
def test_flat_edge_geometry():
    S = load_fixture("flare_torus")
    rng = np.random.default_rng(6)
    for w in rng.uniform(0.05, 20.0, size=20):
        assert abs(edge_tilt_sum(S, 1, [w])) <= 1e-9
        sig = tessellation_signature(S, [w], TOL)
        assert sig.n_faces == 1 and sig.face_sizes() == (4,)
        assert len(voronoi_dual(S, [w], TOL).vertices) == 1
    print("criterion 6: PASS")


@pytest.mark.criterion(7, "tri444 fan has four maximal cones, stable under refinement")
def test_secondary_fan():
    S = load_fixture("tri444")
    coarse = fan_sample(S, 200)
    assert coarse.n_maximal == 4
    assert coarse.max_violation <= 1e-7
    fine = fan_sample(S, 400)
    assert fine.n_maximal == 4
    assert fine.n_signatures == coarse.n_signatures
    assert fine.max_violation <= 1e-7
    print("criterion 7: PASS")


@pytest.mark.criterion(8, "tessellations and supports scale correctly with the weights")
def test_scaling_invariance():
    S = load_fixture("tri444")
    rng = np.random.default_rng(8)
    for w in proper_weights(S, rng, 20):
        base = flip_to_delaunay(S, w)
        sig = tessellation_signature(base.surface, w)
        for s in (0.5, 2.0, 10.0):
            scaled = flip_to_delaunay(S, s * w)
            assert tessellation_signature(scaled.surface, s * w) == sig
            for t in range(base.surface.n_triangles):
                a = lift_triangle(base.surface.triangle(t, w))
                b = lift_triangle(base.surface.triangle(t, s * w))
                corner_w = np.array([w[c] for c in base.surface.corners[t]])
                centers = corner_w[:, None] * a.C
                for coeffs in rng.dirichlet(np.ones(3), size=5):
                    X = coeffs @ centers
                    X = X / math.sqrt(-mnorm2(X))
                    if mdot(X, a.F) >= -TOL:
                        continue
                    h = support_value(a, X)
                    assert support_value(b, X) == pytest.approx(h / s**2, rel=1e-9)
    print("criterion 8: PASS")


@pytest.mark.criterion(9, "cusp gauge leaves tilt sums unchanged")
def test_cusp_gauge_invariance():
    base = load_fixture("cusp_torus")
    rng = np.random.default_rng(9)
    surfaces = [base] + [random_flips(base, 3, rng) for _ in range(3)]
    for S in surfaces:
        before = [r.tilt_sum for r in delaunay_report(S)]
        for delta in (-1.0, 0.3, 2.0):
            after = [r.tilt_sum for r in delaunay_report(cusp_gauge(S, 0, delta))]
            assert np.allclose(after, before, atol=1e-12, rtol=0)
    print("criterion 9: PASS")


@pytest.mark.criterion(10, "Ptolemy relation for the cusp torus flip")
def test_ptolemy():
    S = load_fixture("cusp_torus")
    e = 1
    new = flip_edge(S, e).lengths[e]
    lam = [math.exp(x / 2) for x in S.lengths]
    # the four sides of the quadrilateral are edges 0 and 2, each used twice
    ptolemy = (lam[0] * lam[0] + lam[2] * lam[2]) / lam[e]
    assert new == pytest.approx(2 * math.log(ptolemy), abs=1e-9)
    assert new == pytest.approx(2 * math.log(2), abs=1e-9)
    # from the products in the lift: -<C_p, C_q> = exp(l) / 2 at unit weight
    quad = layout_quad(S, e)
    assert math.log(-2 * mdot(quad.C[0], quad.C[3])) == pytest.approx(new, abs=1e-9)
    print("criterion 10: PASS")


@pytest.mark.criterion(11, "orbit hull verification and injected counterexample")
def test_hull_verification():
    spec = parse_orbit(data_path("tri444_orbit.json").read_text())
    assert spec.depth == 4
    orbit = orbit_generate(spec.generators, spec.seeds, spec.depth)
    report = hull_support_verify(spec.faces, orbit, tol=1e-7)
    assert report.violations == [] and report.ok
    for k in range(3):
        faces = [np.array(f) for f in spec.faces]
        # weight scaled by 0.9: the cycle grows past the hull
        faces[0][k] = faces[0][k] / 0.9
        assert hull_support_verify(faces, orbit, tol=1e-7).violations
    print("criterion 11: PASS")


def _cli(args, hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    proc = subprocess.run(
        [sys.executable, "-m", "dechyp.cli", *args], capture_output=True, env=env, check=False
    )
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


@pytest.mark.criterion(12, "CLI output is byte-identical across runs")
def test_determinism():
    tri = str(data_path("tri444.json"))
    cusp = str(data_path("cusp_torus.json"))
    commands = [
        ["delaunay", tri],
        ["delaunay", cusp, "--scramble", "5", "--seed", "3"],
        ["fan", tri, "--samples", "200"],
        ["render", tri],
        ["render", cusp, "--depth", "5"],
    ]
    for args in commands:
        first = _cli(args, 0)
        assert first
        assert _cli(args, 1) == first
        assert _cli(args, 12345) == first
    print("criterion 12: PASS")


def test_cone_of_converged_triangulation():
    # the cone attached to a converged state contains its weights
    S = load_fixture("tri444")
    w = np.array([3.0, 1.3, 1.3])
    final = flip_to_delaunay(S, w).surface
    assert delaunay_cone(final, w).contains(w)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
