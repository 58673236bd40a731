"""Pure NumPy backend for the real-order Hermite function.

H_nu is computed from the two Kummer solutions of the Hermite equation
with reciprocal-Gamma coefficients,

    H_nu(t) = 2^nu sqrt(pi) [ M(-nu/2, 1/2, t^2) / Gamma((1-nu)/2)
                              - 2 t M((1-nu)/2, 3/2, t^2) / Gamma(-nu/2) ],

the series being summed directly with term-ratio stopping.  The two terms
cancel catastrophically in the recessive direction (t large positive, where
H_nu ~ (2t)^nu while each term grows like exp(t^2)), so for t >= 4 the
Tricomi form H_nu(t) = 2^nu U(-nu/2, 1/2, t^2) is used instead.
"""
import numpy as np
from scipy.special import hyperu, rgamma

SQRT_PI = float(np.sqrt(np.pi))
# switch point between the Kummer-series and Tricomi representations
T_SWITCH = 4.0
_MAX_TERMS = 800


def kummer_series(a, b, x):
    """Confluent hypergeometric M(a; b; x) by direct summation, scalar x >= 0."""
    term = 1.0
    total = 1.0
    k = 0
    while k < _MAX_TERMS:
        term *= (a + k) * x / ((b + k) * (k + 1.0))
        total += term
        k += 1
        if k > 4 and abs(term) <= 1e-16 * abs(total):
            return total
    return total


def _kummer_batch(a, b, x):
    """Vectorized Kummer series over an array of non-negative arguments."""
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(_MAX_TERMS):
        term = term * ((a + k) * x / ((b + k) * (k + 1.0)))
        total += term
        if k > 4 and np.all(np.abs(term) <= 1e-16 * np.abs(total)):
            break
    return total


def hermite_scalar(nu, t):
    if t >= T_SWITCH:
        return 2.0**nu * float(hyperu(-0.5 * nu, 0.5, t * t))
    x = t * t
    c1 = rgamma(0.5 * (1.0 - nu)) * kummer_series(-0.5 * nu, 0.5, x)
    c2 = rgamma(-0.5 * nu) * kummer_series(0.5 * (1.0 - nu), 1.5, x)
    return 2.0**nu * SQRT_PI * (c1 - 2.0 * t * c2)


def hermite_array(nu, t):
    """H_nu evaluated over a 1-D array of arguments."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    hi = t >= T_SWITCH
    if np.any(hi):
        th = t[hi]
        out[hi] = 2.0**nu * hyperu(-0.5 * nu, 0.5, th * th)
    lo = ~hi
    if np.any(lo):
        tl = t[lo]
        x = tl * tl
        c1 = rgamma(0.5 * (1.0 - nu)) * _kummer_batch(-0.5 * nu, 0.5, x)
        c2 = rgamma(-0.5 * nu) * _kummer_batch(0.5 * (1.0 - nu), 1.5, x)
        out[lo] = 2.0**nu * SQRT_PI * (c1 - 2.0 * tl * c2)
    return out
