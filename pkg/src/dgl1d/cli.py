"""Command-line front end.

Subcommands compute the universal constants, single eigenvalues, nonlinear
profiles and optimal offsets, perturbed spectra, certification sweeps and
figure data files.  Exit codes: 0 success (and, for certify, all checks
passed), 1 at least one failed certificate, 2 usage error.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import degennes, glmin, kernel, perturbed, report
from .errors import UsageError
from .kernel import GridSpec

THEOREMS = ("largenu-i", "largenu-ii", "nuzeta-local", "identities",
            "norm-bounds", "sandwich")
FIGURES = ("whatweknow", "zetabound", "mu1mu2", "mu12prime")
DEFAULT_LAMBDAS = (0.65, 0.8, 1.0)


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation: subcommand, validated numeric parameters,
    output destination and format."""

    subcommand: str
    params: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str = "csv"


def parse_grid(text: str) -> list[float]:
    """Parse lo:hi:step with exact decimal arithmetic, inclusive endpoints."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"non-numeric grid specification {text!r}")
    if step <= 0 or hi < lo:
        raise UsageError(f"need lo <= hi and step > 0 in {text!r}")
    values = []
    k = 0
    while lo + k * step <= hi:
        values.append(float(lo + k * step))
        k += 1
    if values and Fraction(0) < hi - (lo + (k - 1) * step):
        values.append(float(hi))
    return values


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".dgl1d-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{x:.12g}" for x in row))
    return "\n".join(lines) + "\n"


def figure_data(name: str) -> tuple[list[str], list[tuple]]:
    """Data behind the four standard plots, as (header, rows)."""
    if name == "mu1mu2":
        rows = []
        for xi in np.arange(0.0, 3.0 + 1e-12, 0.01):
            xi = float(xi)
            rows.append((xi, degennes._mu_value(1, xi), degennes._mu_value(2, xi)))
        return ["xi", "mu1", "mu2"], rows

    if name == "mu12prime":
        rows = []
        for xi in np.arange(0.0, 3.0 + 1e-12, 0.01):
            xi = float(xi)
            rows.append((xi, degennes.mu_prime(1, xi), degennes.mu_prime(2, xi)))
        return ["xi", "mu1_prime", "mu2_prime"], rows

    if name == "zetabound":
        c = degennes.universal_constants()
        rows = []
        lam_values = [c.theta0]
        k = int(np.ceil(c.theta0 / 0.005))
        while k * 0.005 <= 1.0 + 1e-12:
            lam_values.append(round(k * 0.005, 10))
            k += 1
        for lam in lam_values:
            lo_lemma = np.sqrt(0.5 * lam)
            hi_lemma = np.sqrt(lam)
            if lam <= c.theta0 + 1e-15:
                rows.append((lam, lo_lemma, hi_lemma, c.xi0, c.xi0, c.xi0))
                continue
            xi1, xi2 = degennes.mu1_level_interval(lam)
            lo_sharp = _zeta_region_lower(lam, c)
            xi2_out = xi2 if np.isfinite(xi2) else float("inf")
            rows.append((lam, lo_lemma, hi_lemma, lo_sharp, xi1, xi2_out))
        return ["lambda", "zeta_lower", "zeta_upper", "zeta_lower_region",
                "xi1", "xi2"], rows

    if name == "whatweknow":
        lams = (0.7, 0.8)
        nus = [float(x) for x in np.arange(0.0, 4.0 + 1e-12, 0.05)]
        curves = []
        for lam in lams:
            rec = glmin.zeta(lam)
            wide = perturbed._operator_grid(rec, max(nus))
            rec_wide = glmin.ZetaRecord(
                lam=rec.lam, zeta=rec.zeta,
                profile=glmin.profile_on_grid(rec, wide),
                bracket=rec.bracket, scan=rec.scan, co_minima=rec.co_minima)
            curves.append([perturbed.lam1_value(lam, nu, rec_wide) for nu in nus])
        rows = [(nu, degennes._mu_value(1, nu), curves[0][i], curves[1][i])
                for i, nu in enumerate(nus)]
        return ["nu", "mu1", "lam1_lambda0.7", "lam1_lambda0.8"], rows

    raise UsageError(f"unknown figure {name!r}")


def _zeta_region_lower(lam: float, c) -> float:
    """Smallest offset admitted by the two-sided sup-norm chain."""
    def gap(zt):
        mu1z = degennes._mu_value(1, zt)
        ub = glmin_sup_upper(lam, zt, c, mu1z)
        return ub - 2.0 * (lam - zt * zt)

    lo = max(np.sqrt(0.5 * lam) - 0.05, 0.05)
    hi = np.sqrt(lam)
    f_lo, f_hi = gap(lo), gap(hi)
    if f_lo > 0:
        return lo
    return kernel.find_root(gap, kernel.RootBracket(lo, hi, f_lo, f_hi), tol=1e-9)


def glmin_sup_upper(lam: float, zt: float, c, mu1z: float) -> float:
    """Upper end of the sup-norm chain for lam |f|_inf^2 at offset zt."""
    inner = 0.5 - 5.0 * (lam - c.theta0) / (12.0 * np.sqrt(zt) * lam * c.u1_l4_sq)
    return (9.0 / 2.0 ** (4.0 / 3.0)) * zt ** (2.0 / 3.0) * lam ** (1.0 / 3.0) \
        * np.cbrt(inner) * (lam - mu1z)


def _certify(cfg: RunConfig) -> tuple[list[report.CertificateReport], list[str]]:
    """Run one certification theorem; returns (reports, extra summary lines)."""
    name = cfg.params["theorem"]
    extra = []

    if name in ("largenu-i", "largenu-ii"):
        if name == "largenu-i":
            lam_grid = cfg.params.get("lambda_grid") or parse_grid("0.60:1.0:0.05")
            nu_grid = cfg.params.get("nu_grid") or parse_grid("0:1.33:0.05")
        else:
            lam_grid = cfg.params.get("lambda_grid") or parse_grid("0.60:0.80:0.05")
            lam_grid = [x for x in lam_grid if x <= 0.8 + 1e-12]
            nu_grid = cfg.params.get("nu_grid") or parse_grid("0:1.5:0.05")
        reports = perturbed.certify_theorem_largenu(lam_grid, nu_grid)
        wanted = {"largenu-i": ("direct-lower-capped", "numerator-condition",
                                "gap-condition"),
                  "largenu-ii": ("direct-lower-capped", "direct-lower-window",
                                 "numerator-condition", "gap-condition")}[name]
        reports = [r for r in reports if r.name in wanted]
        pc = perturbed.proof_constants()
        for key, val in sorted(pc.items()):
            extra.append(f"{key} = {val:.6g}")
        return reports, extra

    lams = cfg.params.get("lambdas") or list(DEFAULT_LAMBDAS)

    if name == "identities":
        reports = []
        for lam in lams:
            reports.extend(glmin.identity_suite(glmin.zeta(lam)))
        return reports, extra

    if name == "norm-bounds":
        reports = []
        for lam in lams:
            reports.extend(glmin.norm_bounds(glmin.zeta(lam)))
        return reports, extra

    if name == "nuzeta-local":
        lams = cfg.params.get("lambdas") or [0.8, 1.0]
        return [perturbed.certify_local_minimum(lam) for lam in lams], extra

    if name == "sandwich":
        lam_grid = cfg.params.get("lambda_grid") or [0.7, 0.9]
        nu_grid = cfg.params.get("nu_grid") or parse_grid("0:3:0.5")
        return certify_sandwich(lam_grid, nu_grid), extra

    raise UsageError(f"unknown theorem {name!r}")


def certify_sandwich(lambda_grid, nu_grid) -> list[report.CertificateReport]:
    """Two-sided perturbation bounds mu_j(nu) <= lam_j(nu) <= mu_j(nu) + shift,
    with the crude shift lam |f|_inf^2, its closed-form refinement, and the
    interpolation-based first-eigenvalue bound."""
    c = degennes.universal_constants()
    out = []
    for lam in lambda_grid:
        lam = float(lam)
        rec = glmin.zeta(lam)
        zt = rec.zeta
        mu1z = degennes._mu_value(1, zt)
        shift_crude = lam * rec.profile.linf ** 2
        shift_sharp = glmin_sup_upper(lam, zt, c, mu1z)
        for nu in nu_grid:
            nu = float(nu)
            sp = perturbed.spectrum(lam, nu, rec, k=2)
            point = {"lambda": lam, "nu": nu, "zeta": zt}
            for j, lamj in ((1, sp.lam1), (2, sp.lam2)):
                muj = degennes._mu_value(j, nu)
                pj = dict(point, j=j)
                out.append(report.CertificateReport.make(
                    "sandwich-lower", pj, lamj - muj))
                out.append(report.CertificateReport.make(
                    "sandwich-upper", pj, muj + shift_crude - lamj))
                out.append(report.CertificateReport.make(
                    "sandwich-upper-sharp", pj, muj + shift_sharp - lamj))
            mu1n = degennes._mu_value(1, nu)
            mp1n = degennes.mu_prime(1, nu)
            nagy = mu1n + (3.0 ** 0.75 / np.sqrt(2.0)) * np.sqrt(zt) \
                * (lam - mu1z) * (0.5 * mu1n - 0.25 * nu * mp1n) ** 0.25
            out.append(report.CertificateReport.make(
                "interpolation-upper", point, nagy - sp.lam1))
    out.sort(key=lambda r: (r.name, r.point))
    return out


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgl1d", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, *names):
        if "lambda" in names:
            sp.add_argument("--lambda", dest="lam", type=float)
        if "nu" in names:
            sp.add_argument("--nu", type=float)
        if "z" in names:
            sp.add_argument("--z", type=float)
        if "j" in names:
            sp.add_argument("--j", type=int, default=1)
        if "grid" in names:
            sp.add_argument("--tmax", type=float)
            sp.add_argument("--n", type=int)
        if "tol" in names:
            sp.add_argument("--tol", type=float, default=1e-10)
        if "out" in names:
            sp.add_argument("--out")
            sp.add_argument("--format", choices=("csv", "json"))

    sp = sub.add_parser("mu", help="one Neumann eigenvalue and eigenfunction")
    common(sp, "j", "z", "grid", "tol", "out")
    sp.add_argument("--method", choices=("characteristic", "finite_difference"),
                    default="characteristic")
    sp.add_argument("--digits", type=int, default=12)

    sp = sub.add_parser("theta0", help="universal constants")
    sp.add_argument("--digits", type=int, default=8)

    sp = sub.add_parser("minimize", help="nonlinear profile at one offset")
    common(sp, "lambda", "z", "grid", "out")

    sp = sub.add_parser("zeta", help="optimal offset for one coupling")
    common(sp, "lambda", "out")

    sp = sub.add_parser("spectrum", help="perturbed-operator eigenvalues")
    common(sp, "lambda", "nu", "out")

    sp = sub.add_parser("certify", help="run a certification suite")
    sp.add_argument("--theorem", choices=THEOREMS, required=True)
    sp.add_argument("--lambda-grid", dest="lambda_grid")
    sp.add_argument("--nu-grid", dest="nu_grid")
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"))

    sp = sub.add_parser("figure", help="emit plot data as CSV")
    sp.add_argument("--name", choices=FIGURES, required=True)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"))
    return p


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _finite(**kwargs) -> None:
    for key, val in kwargs.items():
        if val is not None and not np.isfinite(val):
            raise UsageError(f"--{key} must be finite, got {val}")


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        try:
            ns = parser.parse_args(argv)
        except SystemExit as exc:
            # argparse already printed a diagnostic
            return 0 if exc.code == 0 else 2
        return _dispatch(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _grid_override(ns, default_builder):
    if getattr(ns, "tmax", None) or getattr(ns, "n", None):
        _require(ns.tmax is not None and ns.n is not None,
                 "--tmax and --n must be given together")
        _finite(tmax=ns.tmax)
        return GridSpec(t_max=ns.tmax, n=ns.n)
    return default_builder()


def _dispatch(ns) -> int:
    cmd = ns.subcommand

    if cmd == "theta0":
        c = degennes.universal_constants()
        d = ns.digits
        print(f"theta0 = {c.theta0:.{d}g}")
        print(f"xi0 = {c.xi0:.{d}g}")
        print(f"u1_l4_fourth = {c.u1_l4_fourth:.{d}g}")
        print(f"xi0_2 = {c.xi0_2:.{d}g}  mu2_min = {c.mu2_min:.{d}g}")
        print(f"xi0_3 = {c.xi0_3:.{d}g}  mu3_min = {c.mu3_min:.{d}g}")
        print(f"xihat2 = {c.xihat2:.{d}g}  xihat3 = {c.xihat3:.{d}g}")
        return 0

    if cmd == "mu":
        _require(ns.z is not None, "mu needs --z")
        _finite(z=ns.z, tol=ns.tol)
        grid = _grid_override(ns, lambda: degennes.default_grid(ns.z))
        r = degennes.mu(ns.j, ns.z, method=ns.method, grid=grid)
        print(f"mu_{ns.j}({ns.z:.{ns.digits}g}) = {r.mu:.{ns.digits}g} "
              f"[{r.method}] residual={r.residual:.3g}")
        if ns.out:
            t = grid.nodes()
            _write_atomic(ns.out, _csv_text(["t", "u"], zip(t, r.u)))
        return 0

    if cmd == "minimize":
        _require(ns.lam is not None and ns.z is not None,
                 "minimize needs --lambda and --z")
        _finite(**{"lambda": ns.lam, "z": ns.z})
        grid = _grid_override(ns, lambda: glmin.default_grid(max(ns.z, 0.0)))
        p = glmin.minimize_functional(ns.z, ns.lam, grid)
        print(f"z={p.z:.12g} lambda={p.lam:.12g} energy={p.energy:.12g} "
              f"l2={p.l2:.12g} l4={p.l4:.12g} linf={p.linf:.12g} f0={p.f0:.12g}")
        if ns.out:
            glmin.profile_to_csv(p, ns.out)
        return 0

    if cmd == "zeta":
        _require(ns.lam is not None, "zeta needs --lambda")
        _finite(**{"lambda": ns.lam})
        rec = glmin.zeta(ns.lam)
        print(f"lambda={rec.lam:.12g} zeta={rec.zeta:.12g} "
              f"energy={rec.profile.energy:.12g} "
              f"bracket=[{rec.bracket[0]:.12g},{rec.bracket[1]:.12g}] "
              f"co_minima={len(rec.co_minima)}")
        if ns.out:
            _write_atomic(ns.out, _csv_text(["z", "energy"], rec.scan))
        return 0

    if cmd == "spectrum":
        _require(ns.lam is not None and ns.nu is not None,
                 "spectrum needs --lambda and --nu")
        _finite(**{"lambda": ns.lam, "nu": ns.nu})
        rec = glmin.zeta(ns.lam)
        sp = perturbed.spectrum(ns.lam, ns.nu, rec)
        print(f"lambda={ns.lam:.12g} nu={ns.nu:.12g} zeta={rec.zeta:.12g} "
              f"lam1={sp.lam1:.12g} lam2={sp.lam2:.12g}")
        if ns.out:
            _write_atomic(ns.out, _csv_text(
                ["lambda", "nu", "zeta", "lam1", "lam2"],
                [(ns.lam, ns.nu, rec.zeta, sp.lam1, sp.lam2)]))
        return 0

    if cmd == "certify":
        params = {"theorem": ns.theorem}
        if ns.lambda_grid:
            params["lambda_grid"] = parse_grid(ns.lambda_grid)
        if ns.nu_grid:
            params["nu_grid"] = parse_grid(ns.nu_grid)
        if ns.lam is not None:
            _finite(**{"lambda": ns.lam})
            params["lambdas"] = [ns.lam]
        cfg = RunConfig(subcommand=cmd, params=params, output_path=ns.out,
                        format=ns.format or "json")
        reports, extra = _certify(cfg)
        n_fail = sum(not r.passed for r in reports)
        for line in extra:
            print(line)
        if reports:
            worst = min(reports, key=lambda r: r.margin)
            print(f"{len(reports) - n_fail}/{len(reports)} certificates passed; "
                  f"smallest margin {worst.margin:.6g} ({worst.name})")
        for r in reports:
            if not r.passed:
                print(r.describe())
        if cfg.output_path:
            if cfg.format == "json":
                _write_atomic(cfg.output_path, report.to_json_lines(reports))
            else:
                rows = [(r.point_dict().get("lambda", float("nan")),
                         r.point_dict().get("nu", float("nan")),
                         r.margin, float(r.passed)) for r in reports]
                _write_atomic(cfg.output_path, _csv_text(
                    ["lambda", "nu", "margin", "pass"], rows))
        return 0 if n_fail == 0 else 1

    if cmd == "figure":
        header, rows = figure_data(ns.name)
        text = _csv_text(header, rows)
        if ns.out:
            _write_atomic(ns.out, text)
        else:
            sys.stdout.write(text)
        return 0

    raise UsageError(f"unknown subcommand {cmd!r}")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
