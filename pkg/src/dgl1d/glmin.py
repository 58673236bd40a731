"""Nonlinear half-line energy and its positive ground profile.

For offset z and coupling lam the energy of a profile phi is

    integral |phi'|^2 + (t-z)^2 phi^2 + (lam/2) phi^4 - lam phi^2 dt,

whose non-negative minimizer f is nontrivial exactly when lam exceeds the
bottom linear eigenvalue mu_1(z), and then solves

    -f'' + (t-z)^2 f + lam f^3 = lam f,   f'(0) = 0.

The energy is discretized with first-difference stiffness and trapezoid
weights; the discrete stationarity system is solved by damped Newton from
the optimally scaled linear ground state.  A discrete minimizer then makes
the discrete energy identity exact, and the optimal offset zeta(lam) is
located by a coarse scan followed by derivative-free refinement.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from . import degennes, errors, kernel
from .kernel import GridSpec
from .report import CertificateReport

DEFAULT_N = 12001
DECAY_WINDOW = 11.0
SCAN_STEP = 0.02
SCAN_PAD = 0.1
NEWTON_TOL = 1e-9
# rounding noise in the second difference puts a floor near 1e-10 on the
# discrete residual; a stall below this level still counts as converged
STALL_TOL = 1e-8
IDENTITY_TOL = 1e-5
# scan minima within this energy of the best are reported as co-minima
CO_MINIMUM_BAND = 1e-4


@dataclass(frozen=True)
class MinimizerProfile:
    """Sampled non-negative minimizer with its energy and norms."""

    z: float
    lam: float
    grid: GridSpec
    f: np.ndarray
    energy: float
    l2: float
    l4: float
    linf: float
    f0: float

    @property
    def trivial(self) -> bool:
        return self.l2 <= 1e-6


@dataclass(frozen=True)
class ZetaRecord:
    """A located optimal offset with its profile and the full scan trace."""

    lam: float
    zeta: float
    profile: MinimizerProfile
    bracket: tuple[float, float]
    scan: tuple[tuple[float, float], ...]
    co_minima: tuple[tuple[float, float], ...] = ()


def default_grid(z_max: float, n: int = DEFAULT_N) -> GridSpec:
    return GridSpec(t_max=z_max + DECAY_WINDOW, n=n)


def kinetic_form(profile: MinimizerProfile) -> float:
    """Discrete Dirichlet energy sum (f_{i+1}-f_i)^2 / h of the profile."""
    f = profile.f
    return float(np.sum((f[1:] - f[:-1]) ** 2) / profile.grid.h)


def _gradient(f, h, w, V, lam):
    g = np.empty_like(f)
    g[1:-1] = (2.0 * f[1:-1] - f[:-2] - f[2:]) / h
    g[0] = (f[0] - f[1]) / h
    g[-1] = (f[-1] - f[-2]) / h
    g += w * (V + lam * f * f - lam) * f
    return g


def _residual_norm(g, w):
    # quadrature L2 norm of the pointwise stationarity defect g / w
    return float(np.sqrt(np.sum(g * g / w)))


def _newton_solve(f, h, w, V, lam, tol=NEWTON_TOL, max_iter=80):
    n = f.size
    ab = np.zeros((3, n))
    ab[0, 1:] = -1.0 / h
    ab[2, :-1] = -1.0 / h
    rn_prev = np.inf
    for _ in range(max_iter):
        g = _gradient(f, h, w, V, lam)
        rn = _residual_norm(g, w)
        if rn <= tol:
            return f
        dmain = 2.0 / h + w * (V + 3.0 * lam * f * f - lam)
        dmain[0] -= 1.0 / h
        dmain[-1] -= 1.0 / h
        ab[1] = dmain
        delta = solve_banded((1, 1), ab, -g)
        step = 1.0
        for _ in range(40):
            f_try = f + step * delta
            rn_try = _residual_norm(_gradient(f_try, h, w, V, lam), w)
            if rn_try < rn:
                break
            step *= 0.5
        else:
            if rn <= STALL_TOL:
                return f
            raise errors.ConvergenceFailure(
                f"stationarity residual stalled at {rn:.3e}")
        f = f_try
        rn_prev = rn
    raise errors.ConvergenceFailure(
        f"residual {rn_prev:.3e} > {tol} after {max_iter} Newton steps")


def minimize_functional(z: float, lam: float,
                        grid: GridSpec | None = None) -> MinimizerProfile:
    """Positive minimizer f of the energy at offset z and coupling lam.

    Returns the trivial profile (f = 0, energy 0) when lam <= mu_1(z).
    """
    if not 0.0 < lam <= 1.2:
        raise ValueError("coupling must be in (0, 1.2]")
    if not -2.0 <= z <= 4.0:
        raise ValueError("offset must be in [-2, 4]")
    if grid is None:
        grid = default_grid(max(z, 0.0))
    t = grid.nodes()
    h = grid.h
    w = grid.weights()

    ground = degennes.mu(1, z, grid=grid)
    if lam <= ground.mu:
        zero = np.zeros(grid.n)
        return MinimizerProfile(z=z, lam=lam, grid=grid, f=zero, energy=0.0,
                                l2=0.0, l4=0.0, linf=0.0, f0=0.0)

    u1 = ground.u
    l44 = kernel.quad(grid, u1 ** 4)
    rho = np.sqrt((lam - ground.mu) / (lam * l44))
    V = (t - z) ** 2
    f = _newton_solve(rho * u1, h, w, V, lam)
    f = np.clip(f, 0.0, None)

    kin = float(np.sum((f[1:] - f[:-1]) ** 2) / h)
    fsq = f * f
    l2sq = float(np.dot(w, fsq))
    l4q = float(np.dot(w, fsq * fsq))
    energy = kin + float(np.dot(w, (V - lam) * fsq)) + 0.5 * lam * l4q
    return MinimizerProfile(z=z, lam=lam, grid=grid, f=f, energy=energy,
                            l2=float(np.sqrt(l2sq)), l4=float(l4q ** 0.25),
                            linf=float(np.max(f)), f0=float(f[0]))


def zeta(lam: float, grid: GridSpec | None = None) -> ZetaRecord:
    """Optimal offset: coarse energy scan then 1-D refinement.

    The scan covers [sqrt(lam/2) - 0.1, sqrt(lam) + 0.1]; every scan point
    is recorded so additional near-optimal minima are detectable (their
    presence triggers MultipleMinimaWarning, non-fatal).
    """
    c = degennes.universal_constants()
    if not c.theta0 < lam <= 1.0:
        raise ValueError("coupling must be in (theta0, 1]")
    scan_lo = np.sqrt(0.5 * lam) - SCAN_PAD
    scan_hi = np.sqrt(lam) + SCAN_PAD
    if grid is None:
        grid = default_grid(scan_hi)

    def energy_at(z):
        return minimize_functional(float(z), lam, grid).energy

    zs = np.arange(scan_lo, scan_hi + 1e-12, SCAN_STEP)
    es = np.array([energy_at(z) for z in zs])
    interior = np.arange(1, len(zs) - 1)
    minima = [i for i in interior if es[i] < es[i - 1] and es[i] <= es[i + 1]]
    if not minima:
        raise errors.ConvergenceFailure(
            "no interior energy minimum found in the scan window")
    best = min(minima, key=lambda i: es[i])

    co = tuple((float(zs[i]), float(es[i])) for i in minima
               if i != best and es[i] - es[best] <= CO_MINIMUM_BAND)
    if co:
        warnings.warn(
            f"found {len(co)} additional near-optimal scan minima at lam={lam}",
            errors.MultipleMinimaWarning)

    bracket = (float(zs[best - 1]), float(zs[best + 1]))
    z_star, _ = kernel.minimize_1d(energy_at, bracket[0], bracket[1], tol=1e-10)
    profile = minimize_functional(float(z_star), lam, grid)
    return ZetaRecord(lam=lam, zeta=float(z_star), profile=profile,
                      bracket=bracket,
                      scan=tuple((float(z), float(e)) for z, e in zip(zs, es)),
                      co_minima=co)


def profile_on_grid(rec: ZetaRecord, grid: GridSpec) -> MinimizerProfile:
    """Profile of rec re-solved on another grid (same offset and coupling)."""
    if (grid.t_max, grid.n) == (rec.profile.grid.t_max, rec.profile.grid.n):
        return rec.profile
    return minimize_functional(rec.zeta, rec.lam, grid)


def identity_suite(rec: ZetaRecord) -> list[CertificateReport]:
    """Six exact relations of the optimal profile, each checked to 1e-5
    relative.  For the trivial profile all hold as 0 = 0.

    (a) energy balance      kin + pot + lam |f|_4^4 = lam |f|_2^2
    (b) scaling balance     kin - pot + (lam/4) |f|_4^4 = 0
    (c) kinetic form        2 kin + (5 lam/4) |f|_4^4 = lam |f|_2^2
    (d) potential form      2 pot + (3 lam/4) |f|_4^4 = lam |f|_2^2
    (e) boundary amplitude  f(0)^2 = (2/lam)(lam - zeta^2)
    (f) zero moment         integral (t - zeta) f^2 = 0
    """
    p = rec.profile
    lam, zt = rec.lam, rec.zeta
    grid = p.grid
    t = grid.nodes()
    w = grid.weights()
    f = p.f
    fsq = f * f
    kin = kinetic_form(p)
    pot = float(np.dot(w, (t - zt) ** 2 * fsq))
    l2sq = p.l2 ** 2
    l4q = p.l4 ** 4
    moment = float(np.dot(w, (t - zt) * fsq))

    scale = max(lam * l2sq, 1e-30)
    b_scale = max(p.f0 ** 2, 1e-30) if not p.trivial else 1.0
    checks = [
        ("energy-balance", (kin + pot + lam * l4q - lam * l2sq) / scale),
        ("scaling-balance", (kin - pot + 0.25 * lam * l4q) / scale),
        ("kinetic-quartic-balance",
         (2.0 * kin + 1.25 * lam * l4q - lam * l2sq) / scale),
        ("potential-quartic-balance",
         (2.0 * pot + 0.75 * lam * l4q - lam * l2sq) / scale),
        ("boundary-amplitude",
         (p.f0 ** 2 - 2.0 / lam * (lam - zt * zt)) / b_scale
         if not p.trivial else 0.0),
        ("zero-moment", moment / scale),
    ]
    point = {"lambda": lam, "zeta": zt}
    return [CertificateReport.make(name, point, IDENTITY_TOL - abs(dev))
            for name, dev in checks]


def norm_bounds(rec: ZetaRecord,
                constants: degennes.UniversalConstants | None = None
                ) -> list[CertificateReport]:
    """Two-sided sup-norm and quartic-norm chains plus the L2 bound, all
    raw-difference margins (positive = holds)."""
    c = constants if constants is not None else degennes.universal_constants()
    p = rec.profile
    lam, zt = rec.lam, rec.zeta
    if not c.theta0 <= lam <= 1.0 + 1e-12:
        raise ValueError("coupling must be in [theta0, 1]")
    mu1z = degennes._mu_value(1, zt)
    u4sq = c.u1_l4_sq
    l4sq = p.l4 ** 2

    sup_sq = lam * p.linf ** 2
    sup_ub = (9.0 / 2.0 ** (4.0 / 3.0)) * zt ** (2.0 / 3.0) * lam ** (1.0 / 3.0) \
        * (0.5 - 5.0 * (lam - c.theta0) / (12.0 * np.sqrt(zt) * lam * u4sq)) ** (1.0 / 3.0) \
        * (lam - mu1z)
    point = {"lambda": lam, "zeta": zt}
    return [
        CertificateReport.make("sup-lower", point, sup_sq - 2.0 * (lam - zt * zt)),
        CertificateReport.make("sup-upper", point, sup_ub - sup_sq),
        CertificateReport.make("quartic-lower", point,
                               lam * l4sq - (lam - c.theta0) / u4sq),
        CertificateReport.make("quartic-upper", point,
                               1.5 * np.sqrt(zt) * (lam - mu1z) - lam * l4sq),
        CertificateReport.make("l2-upper", point,
                               1.5 * np.sqrt(zt) * np.sqrt((lam - mu1z) / lam) - p.l2),
    ]


def surface_energy(lam: float, rec: ZetaRecord | None = None) -> float:
    """Boundary energy density (lam/2) |f|_4^4 of the optimal profile;
    equals minus the minimal energy."""
    if rec is None:
        rec = zeta(lam)
    elif abs(rec.lam - lam) > 1e-12:
        raise ValueError("record was computed for a different coupling")
    return 0.5 * lam * rec.profile.l4 ** 4


def profile_to_csv(profile: MinimizerProfile, path: str) -> None:
    """Write (t, f) samples with a metadata header."""
    t = profile.grid.nodes()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# z={profile.z:.12g} lambda={profile.lam:.12g} "
                 f"energy={profile.energy:.12g} l2={profile.l2:.12g} "
                 f"l4={profile.l4:.12g} linf={profile.linf:.12g} "
                 f"f0={profile.f0:.12g}\n")
        fh.write("t,f\n")
        for ti, fi in zip(t, profile.f):
            fh.write(f"{ti:.12g},{fi:.12g}\n")
