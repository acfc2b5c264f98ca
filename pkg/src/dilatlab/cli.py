"""``dilatlab`` command-line front end.

Exit codes: 0 success, 2 invalid config or inputs, 3 solver failure,
4 at least one bound violated.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import re
import sys
from pathlib import Path

from . import __version__
from .bounds import (
    THEOREMS,
    _NEEDS_KAPPA,
    applicable,
    classify_undilated,
    rhs,
    verify_suite,
)
from .config import ExperimentConfig, load_config
from .errors import (
    ClassificationUnstable,
    ConfigError,
    DilatLabError,
    NoConvergence,
    NonIntegrable,
    ToleranceNotMet,
)
from .potentials import Gaussian, cphi_condition, gaussian_norm_closed_form, lp_norm_quadrature
from .regions import parse_region
from .reporting import write_csv, write_json
from .spectra import _spectra, classify_spectra, ray_distance, trajectory

log = logging.getLogger("dilatlab")

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_VIOLATED = 0, 2, 3, 4
_SOLVER_ERRORS = (NoConvergence, ToleranceNotMet, ClassificationUnstable)


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name) or "potential"


def _classification(cfg, V, threads):
    """Classification at the largest configured angle, reusing one solve per angle."""
    phi = max(cfg.angles)
    tol = cfg.tolerances
    if phi <= 0 or V.alpha == 0:
        return classify_undilated(V, cfg.grid, scheme=cfg.scheme, tol=tol), {}
    probe = cfg.probe if cfg.probe is not None else phi / 2
    if not 0 < probe < phi:
        raise ConfigError("probe", f"need 0 < probe < {phi}")
    V.check_angle(phi)
    angles = sorted(set(cfg.angles) | {0.0, probe, phi})
    spectra = _spectra(V, cfg.grid, angles, cfg.scheme, tol, threads)
    cls = classify_spectra(spectra[0.0], spectra[probe], spectra[phi], phi, probe, V.is_real, tol)
    return cls, spectra


def cmd_spectrum(cfg: ExperimentConfig, out: Path, threads=None) -> int:
    """Eigenvalues per angle and the classification report."""
    gamma = cfg.constants.gamma if cfg.constants else 1.5
    for name, V in zip(cfg.names, cfg.potentials):
        for a in cfg.angles:
            V.check_angle(a)
        cls, spectra = _classification(cfg, V, threads)
        missing = [a for a in cfg.angles if a not in spectra]
        if missing:
            spectra.update(_spectra(V, cfg.grid, missing, cfg.scheme, cfg.tolerances, threads))
        for k, a in enumerate(cfg.angles):
            rows = [(a, e.value.real, e.value.imag, e.multiplicity, e.residual) for e in spectra[a]]
            rows.sort(key=lambda r: (r[1], r[2]))
            write_csv(out / f"spectrum_{_slug(name)}_{k}.csv",
                      ("phi", "lambda_re", "lambda_im", "multiplicity", "residual"), rows, cfg.sha256)
        write_csv(out / f"classification_{_slug(name)}.csv",
                  ("phi", "lambda_re", "lambda_im", "class", "multiplicity", "residual"),
                  cls.rows(), cfg.sha256)
        report = {"potential": V.describe(), "name": name,
                  "grid": {"L": cfg.grid.L, "N": cfg.grid.N, "scheme": cfg.scheme},
                  "classification": cls.to_dict(), "regions": {}}
        for tag in cfg.regions:
            R = parse_region(tag)
            hits = [e for e in cls.isolated if R.__contains__(e.value)]
            report["regions"][tag] = {
                "count": sum(e.multiplicity for e in hits),
                "sum_abs_pow_gamma": sum(e.multiplicity * abs(e.value) ** gamma for e in hits),
                "gamma": gamma,
            }
        write_json(out / f"classification_{_slug(name)}.json", report, cfg.sha256)
    return EXIT_OK


def cmd_trajectory(cfg: ExperimentConfig, out: Path, threads=None) -> int:
    """Eigenvalue paths across the configured angles."""
    tol = cfg.tolerances
    for name, V in zip(cfg.names, cfg.potentials):
        paths = trajectory(V, cfg.grid, sorted(cfg.angles), scheme=cfg.scheme, tol=tol,
                           threads=threads)
        rows, summary = [], []
        for pid, p in enumerate(paths):
            for phi, z, m in zip(p.phis, p.values, p.multiplicities):
                rows.append((pid, phi, z.real, z.imag, m, p.ambiguous))
            z_end = p.values[-1]
            if ray_distance(z_end, p.phis[-1]) > tol.tol_ray(z_end):
                summary.append({
                    "path_id": pid, "phis": p.phis, "start": p.values[0], "end": z_end,
                    "max_excursion": p.max_excursion, "ambiguous": p.ambiguous,
                    "stationary": p.is_stationary(10 * tol.tol_match),
                })
        write_csv(out / f"trajectory_{_slug(name)}.csv",
                  ("path_id", "phi", "lambda_re", "lambda_im", "multiplicity", "ambiguous"),
                  rows, cfg.sha256)
        write_json(out / f"trajectory_{_slug(name)}.json",
                   {"name": name, "potential": V.describe(), "off_ray_paths": summary}, cfg.sha256)
    return EXIT_OK


def _require_bounds(cfg):
    if cfg.constants is None:
        raise ConfigError("bounds", "this subcommand needs a bounds section")


def cmd_verify(cfg: ExperimentConfig, out: Path, threads=None) -> int:
    """Both sides of every configured estimate; exit 4 on a violation."""
    _require_bounds(cfg)
    reports, skipped = [], []
    for name, V in zip(cfg.names, cfg.potentials):
        for t in cfg.theorems:
            k = cfg.kappa if t in _NEEDS_KAPPA else None
            ph = cfg.resonance_phi if t == "Resonance" else None
            if not applicable(t, cfg.constants, V, kappa=k, phi=ph):
                skipped.append({"name": name, "theorem_id": t})
        suite = verify_suite(
            V, cfg.grid, cfg.constants, cfg.theorems, kappa=cfg.kappa,
            resonance_phi=cfg.resonance_phi, resonance_probe=cfg.resonance_probe,
            phi=max(cfg.angles) if max(cfg.angles) > 0 else None, phi_probe=cfg.probe,
            scheme=cfg.scheme, tol=cfg.tolerances, tol_report=cfg.tol_report, threads=threads,
        )
        reports.extend((name, r) for r in suite)
    cols = ("name",) + tuple(reports[0][1].CSV_FIELDS if reports else ())
    rows = [(n,) + r.csv_row() for n, r in reports]
    write_csv(out / "bounds.csv", cols or ("name",), rows, cfg.sha256)
    write_json(out / "bounds.json",
               {"reports": [dict(name=n, **r.to_dict()) for n, r in reports],
                "skipped": skipped, "constants": cfg.constants.describe()}, cfg.sha256)
    violated = [f"{n}:{r.theorem_id}" for n, r in reports if not r.satisfied]
    if violated:
        log.warning("violated: %s", ", ".join(violated))
        return EXIT_VIOLATED
    return EXIT_OK


def cmd_norms(cfg: ExperimentConfig, out: Path, threads=None) -> int:
    """Dilated L^p norms with closed forms and monotonicity directions."""
    rows = []
    for name, V in zip(cfg.names, cfg.potentials):
        params = json.dumps(V.describe(), sort_keys=True, separators=(",", ":"))
        for p in cfg.norm_p:
            prev = None
            for phi in cfg.norm_phi:
                closed = math.nan
                status = "ok"
                try:
                    norm = lp_norm_quadrature(V, phi, p, tol=cfg.quad_tol)
                except NonIntegrable:
                    norm, status = math.nan, "NonIntegrable"
                if isinstance(V, Gaussian) and type(V) is Gaussian and cphi_condition(V.c, phi):
                    closed = abs(V.amplitude) * gaussian_norm_closed_form(V.c, phi, p)
                if prev is None or math.isnan(norm) or math.isnan(prev):
                    direction = 0
                else:
                    direction = (norm > prev) - (norm < prev)
                prev = norm
                rows.append((name, V.family, params, phi, p, norm, closed, direction, status))
    write_csv(out / "norms.csv",
              ("name", "family", "params", "phi", "p", "norm", "closed_form", "direction", "status"),
              rows, cfg.sha256)
    return EXIT_OK


def cmd_scan(cfg: ExperimentConfig, out: Path, threads=None) -> int:
    """Right-hand sides over kappa and phi grids, no eigensolves."""
    _require_bounds(cfg)
    rows = []
    kappas = cfg.scan_kappa or (cfg.kappa,)
    phis = cfg.scan_phi or ((cfg.resonance_phi,) if cfg.resonance_phi else ())
    for name, V in zip(cfg.names, cfg.potentials):
        for t in cfg.theorems:
            if t in _NEEDS_KAPPA:
                pts = [(k, None) for k in kappas]
            elif t == "Resonance":
                pts = [(None, ph) for ph in phis]
            else:
                pts = [(None, None)]
            for k, ph in pts:
                if not applicable(t, cfg.constants, V, kappa=k, phi=ph):
                    rows.append((name, t, k, ph, math.nan, "inapplicable"))
                    continue
                try:
                    val, status = rhs(t, cfg.constants, V, kappa=k, phi=ph, tol=cfg.quad_tol), "ok"
                except NonIntegrable:
                    val, status = math.nan, "NonIntegrable"
                rows.append((name, t, k, ph, val, status))
    write_csv(out / "scan.csv", ("name", "theorem_id", "kappa", "phi", "rhs", "status"),
              rows, cfg.sha256)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "trajectory": cmd_trajectory,
    "verify": cmd_verify,
    "norms": cmd_norms,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dilatlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dilatlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=(fn.__doc__ or name).splitlines()[0])
        p.add_argument("--config", required=True, type=Path, help="YAML experiment config")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--threads", type=int, default=1, help="concurrent eigensolves")
        p.add_argument("--tol-eig", type=float, default=None, help="residual tolerance")
        p.add_argument("--seedless", action="store_true",
                       help="no-op; nothing in the tool draws random numbers")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        if args.tol_eig is not None:
            if not args.tol_eig > 0:
                raise ConfigError("--tol-eig", "must be positive")
            cfg = dataclasses.replace(
                cfg, tolerances=dataclasses.replace(cfg.tolerances, tol_eig=args.tol_eig))
        if args.threads < 1:
            raise ConfigError("--threads", "must be >= 1")
        out = args.out if args.out is not None else Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out, threads=args.threads)
    except ConfigError as exc:
        print(f"dilatlab: invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except _SOLVER_ERRORS as exc:
        print(f"dilatlab: solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DilatLabError, ValueError) as exc:
        print(f"dilatlab: invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
