# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the real-order Hermite function.

Same algorithm as _hermite_py: Kummer-series combination for |t| < 4 and
the Tricomi form for t >= 4 (where the series combination cancels).
"""
from libc.math cimport fabs, pow

from scipy.special.cython_special cimport hyperu, rgamma

import numpy as np

cdef double SQRT_PI = 1.7724538509055160273
cdef double T_SWITCH = 4.0
cdef int MAX_TERMS = 800


cdef double _kummer(double a, double b, double x) noexcept nogil:
    cdef double term = 1.0
    cdef double total = 1.0
    cdef int k = 0
    while k < MAX_TERMS:
        term *= (a + k) * x / ((b + k) * (k + 1.0))
        total += term
        k += 1
        if k > 4 and fabs(term) <= 1e-16 * fabs(total):
            break
    return total


cdef double _hermite(double nu, double t) noexcept nogil:
    cdef double x, c1, c2
    if t >= T_SWITCH:
        return pow(2.0, nu) * hyperu(-0.5 * nu, 0.5, t * t)
    x = t * t
    c1 = rgamma(0.5 * (1.0 - nu)) * _kummer(-0.5 * nu, 0.5, x)
    c2 = rgamma(-0.5 * nu) * _kummer(0.5 * (1.0 - nu), 1.5, x)
    return pow(2.0, nu) * SQRT_PI * (c1 - 2.0 * t * c2)


def hermite_scalar(double nu, double t):
    return _hermite(nu, t)


def hermite_array(double nu, t):
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty_like(t)
    cdef double[::1] tv = t
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = tv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _hermite(nu, tv[i])
    return out
