# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-triangle kernels; same API as ``_kernels_py``."""

from libc.math cimport cosh, exp, sinh, sqrt, fabs

from .errors import InvalidTriangle


cdef inline double _tau_prime(long eps, double x) nogil:
    if eps < 0:
        return sinh(x)
    if eps == 0:
        return 0.5 * exp(x)
    return cosh(x)


cdef void _gram(long e0, long e1, long e2, double l0, double l1, double l2,
                double *g) nogil:
    g[0] = <double>e0
    g[4] = <double>e1
    g[8] = <double>e2
    g[1] = g[3] = -_tau_prime(e0 * e1, l2)
    g[2] = g[6] = -_tau_prime(e0 * e2, l1)
    g[5] = g[7] = -_tau_prime(e1 * e2, l0)


cdef int _inverse(double *g, double tol, double *h) nogil:
    cdef double a = g[0], b = g[1], c = g[2], e = g[4], f = g[5], i = g[8]
    cdef double c00 = e * i - f * f
    cdef double c11 = a * i - c * c
    cdef double c22 = a * e - b * b
    cdef double c01 = c * f - b * i
    cdef double c02 = b * f - c * e
    cdef double c12 = b * c - a * f
    cdef double det = a * c00 + b * c01 + c * c02
    cdef double scale = 0.0
    cdef int k
    for k in range(9):
        if fabs(g[k]) > scale:
            scale = fabs(g[k])
    if scale == 0.0:
        return 1
    if not (det < -tol * scale * scale * scale):
        return 2
    if not (c00 < -tol * scale * scale and c11 < -tol * scale * scale
            and c22 < -tol * scale * scale):
        return 3
    cdef double inv = 1.0 / det
    h[0] = c00 * inv
    h[1] = h[3] = c01 * inv
    h[2] = h[6] = c02 * inv
    h[4] = c11 * inv
    h[5] = h[7] = c12 * inv
    h[8] = c22 * inv
    return 0


_MESSAGES = {
    1: "zero Gram matrix",
    2: "Gram determinant is not negative",
    3: "a pair of vertex cycles does not span a Lorentzian plane",
}


cdef void _matrix(double *h, double *m) nogil:
    cdef int n
    cdef double s
    for n in range(3):
        s = 1.0 / sqrt(h[4 * n])
        m[3 * n] = h[3 * n] * s
        m[3 * n + 1] = h[3 * n + 1] * s
        m[3 * n + 2] = h[3 * n + 2] * s


def gram_unit(eps, lengths):
    cdef double g[9]
    _gram(eps[0], eps[1], eps[2], lengths[0], lengths[1], lengths[2], g)
    return tuple([g[k] for k in range(9)])


def gram_inverse(eps, lengths, double tol=1e-9):
    cdef double g[9]
    cdef double h[9]
    _gram(eps[0], eps[1], eps[2], lengths[0], lengths[1], lengths[2], g)
    cdef int status = _inverse(g, tol, h)
    if status:
        raise InvalidTriangle(_MESSAGES[status])
    return tuple([h[k] for k in range(9)])


def tilt_matrix(eps, lengths, double tol=1e-9):
    cdef double g[9]
    cdef double h[9]
    cdef double m[9]
    _gram(eps[0], eps[1], eps[2], lengths[0], lengths[1], lengths[2], g)
    cdef int status = _inverse(g, tol, h)
    if status:
        raise InvalidTriangle(_MESSAGES[status])
    _matrix(h, m)
    return (m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8])


def tilts(eps, omega, lengths, double tol=1e-9):
    cdef double g[9]
    cdef double h[9]
    cdef double m[9]
    cdef double w0 = omega[0], w1 = omega[1], w2 = omega[2]
    _gram(eps[0], eps[1], eps[2], lengths[0], lengths[1], lengths[2], g)
    cdef int status = _inverse(g, tol, h)
    if status:
        raise InvalidTriangle(_MESSAGES[status])
    _matrix(h, m)
    return (
        m[0] * w0 + m[1] * w1 + m[2] * w2,
        m[3] * w0 + m[4] * w1 + m[5] * w2,
        m[6] * w0 + m[7] * w1 + m[8] * w2,
    )
