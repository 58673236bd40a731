"""Shared numerical primitives.

Bracketing root finding, 1-D minimization, trapezoid quadrature on grids,
a symmetric tridiagonal eigensolver, and the real-order Hermite function.
All routines are pure functions of their inputs and bit-deterministic.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import errors

# Backend selection for the Hermite hot kernel: compiled extension when
# available, NumPy fallback otherwise.  DGL_PURE_PYTHON=1 forces the fallback.
if os.environ.get("DGL_PURE_PYTHON"):
    from . import _hermite_py as _hermite_backend

    HERMITE_BACKEND = "python"
else:
    try:
        from . import _hermite_cy as _hermite_backend

        HERMITE_BACKEND = "cython"
    except ImportError:
        from . import _hermite_py as _hermite_backend

        HERMITE_BACKEND = "python"

EPS = float(np.finfo(float).eps)
_GOLD = 0.5 * (3.0 - np.sqrt(5.0))  # golden-section fraction


@dataclass(frozen=True)
class GridSpec:
    """Uniform discretization of [0, t_max] with n nodes."""

    t_max: float
    n: int
    spacing: str = "uniform"

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.n < 3:
            raise ValueError("need at least 3 nodes")
        if self.spacing != "uniform":
            raise ValueError(f"unknown spacing rule {self.spacing!r}")

    @property
    def h(self) -> float:
        return self.t_max / (self.n - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n)

    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights (half weight at both endpoints)."""
        w = np.full(self.n, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w


@dataclass(frozen=True)
class RootBracket:
    """Sign-change interval for a scalar root."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if self.f_lo * self.f_hi > 0:
            raise errors.NoSignChange(
                f"f({self.lo}) = {self.f_lo} and f({self.hi}) = {self.f_hi} "
                "have the same sign")

    @classmethod
    def from_function(cls, f, lo: float, hi: float) -> "RootBracket":
        return cls(lo, hi, f(lo), f(hi))


def find_root(f, bracket: RootBracket, tol: float = 1e-12,
              max_iter: int = 200) -> float:
    """Locate the sign change of f inside `bracket` to abscissa width <= tol.

    Brent's method: inverse quadratic / secant steps with a bisection
    safeguard.  Deterministic; raises MaxIterations if the budget runs out.
    """
    a, b = bracket.lo, bracket.hi
    fa, fb = bracket.f_lo, bracket.f_hi
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else (tol1 if xm > 0 else -tol1)
        fb = f(b)
    raise errors.MaxIterations(f"root not located to {tol} in {max_iter} iterations")


def minimize_1d(f, lo: float, hi: float, tol: float = 1e-10,
                max_iter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal f on [lo, hi]; returns (x*, f(x*)).

    Golden-section search with parabolic acceleration (Brent).  Unimodality
    is the caller's contract; on a monotone function the nearest endpoint
    region is returned, so f(x*) <= min(f(lo), f(hi)) still holds.
    """
    a, b = (lo, hi) if lo < hi else (hi, lo)
    x = w = v = a + _GOLD * (b - a)
    fx = fw = fv = f(x)
    d = e = 0.0
    for _ in range(max_iter):
        xm = 0.5 * (a + b)
        tol1 = EPS * abs(x) + tol / 3.0
        tol2 = 2.0 * tol1
        if abs(x - xm) <= tol2 - 0.5 * (b - a):
            return x, fx
        if abs(e) > tol1:
            # trial parabola through (v, w, x)
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0:
                p = -p
            q = abs(q)
            e_prev = e
            e = d
            if abs(p) >= abs(0.5 * q * e_prev) or p <= q * (a - x) or p >= q * (b - x):
                e = (a - x) if x >= xm else (b - x)
                d = _GOLD * e
            else:
                d = p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = tol1 if xm > x else -tol1
        else:
            e = (a - x) if x >= xm else (b - x)
            d = _GOLD * e
        u = x + d if abs(d) >= tol1 else x + (tol1 if d > 0 else -tol1)
        fu = f(u)
        if fu <= fx:
            if u >= x:
                a = x
            else:
                b = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, w = w, u
                fv, fw = fw, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    raise errors.MaxIterations(f"minimum not located to {tol} in {max_iter} iterations")


def quad(grid: GridSpec, samples: np.ndarray) -> float:
    """Composite trapezoid rule on the grid; exact for affine integrands."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.n,):
        raise errors.LengthMismatch(
            f"expected {grid.n} samples, got {samples.shape}")
    return float(np.dot(grid.weights(), samples))


def hermite_h(nu: float, t: float) -> float:
    """Hermite function H_nu(t): the polynomially bounded Hermite-equation
    solution, normalized so integer orders give the classical polynomials.

    Supported for |t| <= 30.  On the strongly negative side the value grows
    like exp(t^2) and may overflow for |t| larger than about 26.
    """
    if abs(t) > 30.0:
        raise errors.UnsupportedRange(f"|t| = {abs(t)} exceeds supported range 30")
    val = _hermite_backend.hermite_scalar(float(nu), float(t))
    if not np.isfinite(val) and abs(t) < 26.0:
        raise errors.PoleOrder(
            f"H_{nu}({t}) evaluation hit a non-finite Gamma/series configuration")
    return val


def hermite_h_array(nu: float, t: np.ndarray) -> np.ndarray:
    """Vectorized H_nu over a 1-D array of arguments (same range rules)."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 30.0):
        raise errors.UnsupportedRange("argument outside |t| <= 30")
    return _hermite_backend.hermite_array(float(nu), t)


def _refine_pair(d, e, val, vec):
    """One inverse-iteration pass for a tridiagonal eigenpair."""
    n = d.size
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[1] = d - val
    ab[2, :-1] = e
    # small diagonal shift keeps the shifted solve well posed at the eigenvalue
    ab[1] += 1e-13 * max(1.0, abs(val))
    try:
        w = scipy.linalg.solve_banded((1, 1), ab, vec)
    except scipy.linalg.LinAlgError:
        return val, vec
    w /= np.linalg.norm(w)
    tv = d * w
    tv[:-1] += e * w[1:]
    tv[1:] += e * w[:-1]
    lam = float(w @ tv)
    return lam, w


def eig_tridiag(diag, offdiag, k: int, vectors: bool = False):
    """k smallest eigenvalues (ascending) of a symmetric tridiagonal matrix.

    With vectors=True also returns the inverse-iteration eigenvectors
    (columns) and their residual norms ||Av - lambda v||.
    """
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    n = d.size
    if e.size != n - 1:
        raise errors.LengthMismatch("offdiag must have length n-1")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    try:
        vals, vecs = scipy.linalg.eigh_tridiagonal(
            d, e, select="i", select_range=(0, k - 1))
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise errors.ConvergenceFailure(f"tridiagonal eigensolve failed: {exc}")
    residuals = np.empty(k)
    for i in range(k):
        val, vec = vals[i], vecs[:, i]
        lam, w = _refine_pair(d, e, val, vec)
        tv = d * w
        tv[:-1] += e * w[1:]
        tv[1:] += e * w[:-1]
        r = float(np.linalg.norm(tv - lam * w))
        # keep the refined pair only if it actually improved the residual
        tv0 = d * vec
        tv0[:-1] += e * vec[1:]
        tv0[1:] += e * vec[:-1]
        r0 = float(np.linalg.norm(tv0 - val * vec))
        if r < r0:
            vals[i], vecs[:, i], residuals[i] = lam, w, r
        else:
            residuals[i] = r0
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    residuals = residuals[order]
    if vectors:
        return vals, vecs, residuals
    return vals
