"""Pure-Python per-triangle kernels (fallback for the compiled module).

All routines work on the unit-weight Gram matrix

    G0_kk = eps_k,   G0_ij = -tau'_{eps_i eps_j}(l_k),

which is congruent to the weighted Gram matrix via diag(1 / omega).  The
tilt of side n is ``sum_m Ginv_nm omega_m / sqrt(Ginv_nn)`` where ``Ginv``
is the inverse of G0.
"""

from math import cosh, exp, sinh, sqrt

from .errors import InvalidTriangle

_OPP = ((1, 2), (0, 2), (0, 1))


def _tau_prime(eps, x):
    if eps < 0:
        return sinh(x)
    if eps == 0:
        return 0.5 * exp(x)
    return cosh(x)


def gram_unit(eps, lengths):
    """Row-major unit-weight Gram matrix as a 9-tuple."""
    e0, e1, e2 = eps
    g01 = -_tau_prime(e0 * e1, lengths[2])
    g02 = -_tau_prime(e0 * e2, lengths[1])
    g12 = -_tau_prime(e1 * e2, lengths[0])
    return (float(e0), g01, g02, g01, float(e1), g12, g02, g12, float(e2))


def _inverse(g, tol):
    a, b, c, _, e, f, _, _, i = g
    # cofactors of a symmetric matrix
    c00 = e * i - f * f
    c11 = a * i - c * c
    c22 = a * e - b * b
    c01 = c * f - b * i
    c02 = b * f - c * e
    c12 = b * c - a * f
    det = a * c00 + b * c01 + c * c02
    scale = max(abs(x) for x in g)
    if scale == 0.0:
        raise InvalidTriangle("zero Gram matrix")
    # signature (2,1) with every pair of cycles spanning a Lorentzian plane
    if not (det < -tol * scale ** 3):
        raise InvalidTriangle(f"Gram determinant {det!r} is not negative")
    if not (c00 < -tol * scale ** 2 and c11 < -tol * scale ** 2 and c22 < -tol * scale ** 2):
        raise InvalidTriangle("a pair of vertex cycles does not span a Lorentzian plane")
    inv = 1.0 / det
    return (
        c00 * inv, c01 * inv, c02 * inv,
        c01 * inv, c11 * inv, c12 * inv,
        c02 * inv, c12 * inv, c22 * inv,
    )


def gram_inverse(eps, lengths, tol=1e-9):
    return _inverse(gram_unit(eps, lengths), tol)


def tilt_matrix(eps, lengths, tol=1e-9):
    """Matrix M with ``tilts = M @ omega`` (row-major 9-tuple)."""
    h = _inverse(gram_unit(eps, lengths), tol)
    out = []
    for n in range(3):
        s = 1.0 / sqrt(h[4 * n])
        out.extend((h[3 * n] * s, h[3 * n + 1] * s, h[3 * n + 2] * s))
    return tuple(out)


def tilts(eps, omega, lengths, tol=1e-9):
    m = tilt_matrix(eps, lengths, tol)
    w0, w1, w2 = omega
    return (
        m[0] * w0 + m[1] * w1 + m[2] * w2,
        m[3] * w0 + m[4] * w1 + m[5] * w2,
        m[6] * w0 + m[7] * w1 + m[8] * w2,
    )
