import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from triangles import TYPE_TRIPLES, corpus, random_triangle

from dechyp.dectri import (
    DecoratedTriangle,
    cosine_law_angle,
    face_vector,
    gram_matrix,
    is_elliptic,
    is_genuine,
    is_valid,
    lift_triangle,
    support_value,
    tilt_coefficients,
    tilts,
    tilts_matrix_route,
    triangle_angles,
)
from dechyp.errors import InvalidTriangle, NonPositiveWeight, SupportUndefined
from dechyp.minkcore import CONE, CUSP, mdet, mdot, mnorm2, tau_prime

L444 = math.acosh(1 + math.sqrt(2))


@pytest.fixture(scope="module")
def triangles():
    return corpus(n_per_triple=8, seed=2024)


def tri444(w=1.2):
    return DecoratedTriangle((CONE,) * 3, (w,) * 3, (L444,) * 3)


def ideal(lengths=(0.0, 0.0, 0.0), weights=(1.0, 1.0, 1.0)):
    return DecoratedTriangle((CUSP,) * 3, weights, lengths)


def test_constructor_validation():
    with pytest.raises(NonPositiveWeight):
        DecoratedTriangle((CONE,) * 3, (1.2, -1.0, 1.2), (1, 1, 1))
    with pytest.raises(ValueError):
        DecoratedTriangle((CONE, 2, CONE), (1.2,) * 3, (1, 1, 1))
    with pytest.raises(ValueError):
        DecoratedTriangle((CONE,) * 3, (1.2,) * 3, (1, math.inf, 1))


def test_gram_examples():
    G = gram_matrix(ideal())
    assert np.allclose(np.diag(G), 0.0)
    assert np.allclose(G[~np.eye(3, dtype=bool)], -0.5)

    r = 0.7
    G = gram_matrix(DecoratedTriangle((CONE,) * 3, (math.cosh(r),) * 3, (1.0, 1.3, 0.9)))
    assert np.allclose(np.diag(G), -1 / math.cosh(r) ** 2)

    w = math.cosh(0.2)
    assert w == pytest.approx(1.020067, abs=1e-6)
    G = gram_matrix(tri444(w))
    assert np.allclose(G, G.T)
    assert G[0, 1] == pytest.approx(-math.cosh(L444) / w**2)
    assert G[0, 1] == pytest.approx(-2.320, abs=1e-3)


def test_invalid_triangle():
    # violates the triangle inequality
    bad = DecoratedTriangle((CONE,) * 3, (1.2,) * 3, (0.1, 0.1, 3.0))
    assert not is_valid(bad)
    with pytest.raises(InvalidTriangle):
        lift_triangle(bad)


def test_lift_round_trip(triangles):
    for tri in triangles:
        lift = lift_triangle(tri)
        G = np.array([[mdot(a, b) for b in lift.C] for a in lift.C])
        assert np.allclose(G, gram_matrix(tri), atol=1e-10)
        assert mdet(*lift.C) > 0
        for k, eps in enumerate(tri.types):
            if eps in (CONE, CUSP):
                assert lift.C[k][0] > 0


def test_lift_lines_and_face(triangles):
    for tri in triangles[::5]:
        lift = lift_triangle(tri)
        for k in range(3):
            assert mnorm2(lift.L[k]) == pytest.approx(1.0)
            assert mdot(lift.L[k], lift.C[k]) < 0
            for m in range(3):
                if m != k:
                    assert mdot(lift.L[k], lift.C[m]) == pytest.approx(0.0, abs=1e-10)
            assert mdot(lift.C[k], lift.F) == pytest.approx(-1.0)


def test_angles_444():
    assert np.allclose(triangle_angles(tri444()), math.pi / 4)
    for k in range(3):
        assert cosine_law_angle(tri444(), k) == pytest.approx(math.pi / 4)


def test_ideal_triangle_face_vector():
    lift = lift_triangle(ideal())
    assert mnorm2(lift.F) < 0
    assert np.allclose(face_vector(lift.C), lift.F)


def _horocycle_arc(tri):
    # Lambda lengths: the arc at a cusp between sides b, c is lam_a / (lam_b lam_c),
    # lam = exp(delta / 2) with delta the signed distance of the horocycles.
    # A unit horocycle {x : -<C, x> = 1} pair satisfies -<C_u, C_v> = 2 e^delta,
    # and the arcs are read on the unit-weight horocycles.
    lam = [math.sqrt(tau_prime(0, length) / 2.0) for length in tri.lengths]
    return [lam[k] / (lam[(k + 1) % 3] * lam[(k + 2) % 3]) for k in range(3)]


def test_horocycle_convention():
    u, v = np.array([1.0, 1.0, 0.0]), np.array([1.0, -1.0, 0.0])
    # both horocycles pass through (1, 0, 0) and are tangent there
    x = np.array([1.0, 0.0, 0.0])
    assert -mdot(u, x) == -mdot(v, x) == 1.0
    assert -mdot(u, v) == 2.0


def test_ideal_triangle_arcs():
    # all lengths zero: every arc equals 2 on the unit-weight horocycles
    assert np.allclose(triangle_angles(ideal()), 2.0)
    assert np.allclose(_horocycle_arc(ideal()), 2.0)


@given(st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3),
       st.lists(st.floats(0.2, 5.0), min_size=3, max_size=3))
@settings(max_examples=60)
def test_ideal_arcs_match_lambda_lengths(lengths, weights):
    tri = ideal(lengths, weights)
    assert np.allclose(triangle_angles(tri), _horocycle_arc(tri), rtol=1e-9)


def test_right_angle():
    a, b = 0.7, 1.1
    c = math.acosh(math.cosh(a) * math.cosh(b))
    # corner 0 sits between the sides of length a and b
    tri = DecoratedTriangle((CONE,) * 3, (1.5,) * 3, (c, a, b))
    lift = lift_triangle(tri)
    assert mdot(lift.L[1], lift.L[2]) == pytest.approx(0.0, abs=1e-12)
    assert triangle_angles(tri)[0] == pytest.approx(math.pi / 2)


def test_obtuse_cone_angle():
    tri = DecoratedTriangle((CONE,) * 3, (1.5,) * 3, (1.9, 1.0, 1.0))
    theta = triangle_angles(tri)[0]
    assert theta > math.pi / 2
    assert theta == pytest.approx(cosine_law_angle(tri, 0), abs=1e-12)


def test_cosine_law_rejects_non_cone():
    with pytest.raises(ValueError):
        cosine_law_angle(ideal(), 0)


def test_cosine_law_agrees(triangles):
    for tri in triangles:
        angles = triangle_angles(tri)
        for k, eps in enumerate(tri.types):
            if eps == CONE:
                assert angles[k] == pytest.approx(cosine_law_angle(tri, k), abs=1e-9)


def test_equilateral_symmetry():
    tri = DecoratedTriangle((CONE,) * 3, (1.7,) * 3, (1.2,) * 3)
    lift = lift_triangle(tri)
    assert np.allclose(lift.feet, lift.feet[0])
    assert np.allclose(lift.angles, lift.angles[0])
    t = tilts(tri)
    assert np.allclose(t, t[0])


def test_tilts_444_equal_and_negative():
    tri = tri444(1.02)
    t = np.array(tilts(tri))
    assert np.all(t < 0)
    assert np.allclose(t, t[0])
    assert np.allclose(t, tilts_matrix_route(tri), atol=1e-12)


def test_isosceles_legs_negative():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 300:
        leg, base = rng.uniform(0.2, 3.0, size=2)
        w_apex, w_base = rng.uniform(1.01, 4.0, size=2)
        # the radical line of apex and base cycle meets the leg between them
        if not max(w_apex / w_base, w_base / w_apex) < math.cosh(leg):
            continue
        tri = DecoratedTriangle((CONE,) * 3, (w_apex, w_base, w_base), (base, leg, leg))
        if not is_genuine(tri):
            continue
        checked += 1
        t = tilts(tri)
        assert t[1] < 0 and t[2] < 0
        assert t[1] == pytest.approx(t[2])


def test_tilt_routes_agree(triangles):
    for tri in triangles:
        assert np.allclose(tilts(tri), tilts_matrix_route(tri), atol=1e-9, rtol=0)


def test_tilt_coefficients(triangles):
    rng = np.random.default_rng(5)
    for tri in triangles[::7]:
        M = tilt_coefficients(tri)
        assert np.all(np.diag(M) > 0)
        lift = lift_triangle(tri)
        for k in range(3):
            assert M[k, k] == pytest.approx(1 / tau_prime(tri.types[k], lift.feet[k]))
        w = np.array(tri.weights)
        assert np.allclose(tilts(tri.with_weights(2 * w)), 2 * np.array(tilts(tri)))
        for _ in range(20):
            w2 = w * rng.uniform(0.9, 1.1, size=3)
            t2 = tri.with_weights(w2)
            if not is_valid(t2):
                continue
            assert np.allclose(M @ w2, tilts(t2), atol=1e-9, rtol=0)


def test_tilt_coefficients_reject_non_genuine():
    rng = np.random.default_rng(1)
    for _ in range(5000):
        tri = DecoratedTriangle((CONE, CONE, 1), rng.uniform(1.05, 3, 3), rng.uniform(0.2, 3, 3))
        if is_valid(tri) and not is_genuine(tri):
            break
    else:
        pytest.fail("no non-genuine sample found")
    with pytest.raises(InvalidTriangle):
        tilt_coefficients(tri)


def test_support_value():
    lift = lift_triangle(tri444())
    X = lift.C[0] / math.sqrt(-mnorm2(lift.C[0]))
    # cone centres sit strictly below the face plane
    assert support_value(lift, X) == pytest.approx(1.0 / mdot(X, lift.F) ** 2)
    F = np.array([1.0, 0.0, 0.0])
    assert support_value(F, np.array([1.0, 0.0, 0.0])) == 1.0
    with pytest.raises(SupportUndefined):
        support_value(-F, np.array([1.0, 0.0, 0.0]))
    assert is_elliptic(lift.F)


@pytest.mark.parametrize("s", [0.5, 2.0, 10.0])
def test_support_scaling(s):
    tri = DecoratedTriangle((CONE,) * 3, (1.3, 1.6, 2.1), (1.1, 1.4, 1.2))
    a, b = lift_triangle(tri), lift_triangle(tri.with_weights(np.array(tri.weights) * s))
    # same point, expressed through the decoration-independent centres
    centers = np.array(tri.weights)[:, None] * a.C
    X = centers.sum(axis=0)
    X /= math.sqrt(-mnorm2(X))
    assert np.allclose(np.array(tri.weights)[:, None] * a.C, s * np.array(tri.weights)[:, None] * b.C)
    assert support_value(b, X) == pytest.approx(support_value(a, X) / s**2, rel=1e-12)


@pytest.mark.parametrize("types", TYPE_TRIPLES)
def test_every_type_triple_samples(types):
    tri = random_triangle(np.random.default_rng(TYPE_TRIPLES.index(types)), types)
    lift = lift_triangle(tri)
    assert lift.genuine
    assert len(lift.angles) == 3 and all(a >= 0 for a in lift.angles)
