"""Experiment configuration files (YAML).

A config mirrors :class:`ExperimentConfig`; complex numbers are written as
``[re, im]`` pairs (a bare number is read as real).  Example::

    potential:
      family: gaussian          # gaussian | x2gauss | rational | sech2 |
      c: [1.0, 0.3]             # finite_well | zero | tabulated
      amplitude: [-1.0, 0.0]
    grid: {L: 20.0, N: 1000, scheme: FD2}
    angles: {start: 0.0, stop: 0.3, num: 4}     # or a plain list
    probe: 0.15
    bounds:
      gamma: 1.5
      d: 1
      L_policy: semiclassical   # semiclassical | semiclassical_times | user
      multiplier: 1.0
      theorems: [FLLSpp, So_all, QII]
      kappa: 1.0
      phi: 0.6                  # angle of the Resonance estimate
    tolerances: {tol_eig: 1.0e-8, tol_match: 1.0e-4}
    norms: {p: [2.0], phi: [0.0, 0.1, 0.2]}
    scan: {kappa: [0.5, 1.0, 2.0], phi: [0.4, 0.6]}
    regions: ["sectorU+:kappa=1.0", "II"]
    output: {dir: out}

``potentials:`` (a list, each entry optionally with ``name``) may replace
``potential:``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .bounds import THEOREMS, LTConstants
from .errors import ConfigError, DilatLabError
from .operators import SCHEMES, Grid
from .potentials import (
    FiniteWell,
    Gaussian,
    Potential,
    QuadraticGaussian,
    Rational,
    Sech2,
    Tabulated,
    zero_potential,
)
from .regions import parse_region
from .spectra import Tolerances

__all__ = ["ExperimentConfig", "load_config", "parse_config", "build_potential"]

_TOL_KEYS = ("tol_eig", "cluster_rel", "tol_ray_rel", "tol_ray_abs", "tol_match")


def _complex(value, where) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(where, "complex numbers are [re, im] pairs")
        re_, im_ = value
        value = complex(_real(re_, where), _real(im_, where))
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number or [re, im], got {value!r}")
    return complex(value)


def _real(value, where) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(where, "must be finite")
    return float(value)


def _section(raw, key, where=None) -> dict:
    sec = raw.get(key, {})
    if sec is None:
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(where or key, "expected a mapping")
    return sec


def _require(sec, key, where):
    if key not in sec:
        raise ConfigError(where, "required field is missing")
    return sec[key]


def _real_list(value, where) -> list:
    if isinstance(value, dict):
        start = _real(_require(value, "start", f"{where}.start"), f"{where}.start")
        stop = _real(_require(value, "stop", f"{where}.stop"), f"{where}.stop")
        num = _require(value, "num", f"{where}.num")
        if isinstance(num, bool) or not isinstance(num, int) or num < 1:
            raise ConfigError(f"{where}.num", "must be a positive integer")
        return [float(v) for v in np.linspace(start, stop, num)]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [_real(value, where)]
    if not isinstance(value, list) or not value:
        raise ConfigError(where, "expected a non-empty list or {start, stop, num}")
    return [_real(v, f"{where}[{i}]") for i, v in enumerate(value)]


def build_potential(spec: dict, where: str = "potential", base_dir: Optional[Path] = None):
    """Construct a :class:`Potential` from its config mapping."""
    if not isinstance(spec, dict):
        raise ConfigError(where, "expected a mapping")
    family = str(_require(spec, "family", f"{where}.family")).lower()
    amp = _complex(spec.get("amplitude", 1.0), f"{where}.amplitude")
    try:
        if family == "gaussian":
            return Gaussian(c=_complex(spec.get("c", 1.0), f"{where}.c"), amplitude=amp)
        if family == "x2gauss":
            return QuadraticGaussian(c=_complex(spec.get("c", 1.0), f"{where}.c"), amplitude=amp)
        if family == "rational":
            return Rational(c=_complex(spec.get("c", 1.0), f"{where}.c"),
                            s=_real(spec.get("s", 1.0), f"{where}.s"), amplitude=amp)
        if family in ("sech2", "poschl_teller"):
            if family == "poschl_teller" and "amplitude" not in spec:
                amp = -2.0
            return Sech2(amplitude=amp)
        if family == "finite_well":
            return FiniteWell(depth=_real(spec.get("depth", 1.0), f"{where}.depth"),
                              halfwidth=_real(spec.get("halfwidth", 1.0), f"{where}.halfwidth"),
                              amplitude=amp)
        if family in ("zero", "free"):
            return zero_potential()
        if family == "tabulated":
            if "file" in spec:
                path = Path(spec["file"])
                if base_dir is not None and not path.is_absolute():
                    path = base_dir / path
                data = np.loadtxt(path, comments="#", delimiter=",", ndmin=2)
                x = data[:, 0]
                samples = data[:, 1] + (1j * data[:, 2] if data.shape[1] > 2 else 0)
            else:
                x = _real_list(_require(spec, "x", f"{where}.x"), f"{where}.x")
                re_ = _real_list(_require(spec, "re", f"{where}.re"), f"{where}.re")
                im_ = _real_list(spec.get("im", [0.0] * len(re_)), f"{where}.im")
                if not len(x) == len(re_) == len(im_):
                    raise ConfigError(f"{where}.x", "x, re and im must have equal length")
                samples = np.array(re_) + 1j * np.array(im_)
            return Tabulated(x=tuple(np.asarray(x, float)), samples=tuple(samples), amplitude=amp)
    except ConfigError:
        raise
    except (DilatLabError, ValueError, OSError) as exc:
        raise ConfigError(where, str(exc)) from exc
    raise ConfigError(f"{where}.family", f"unknown family {family!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description."""

    potentials: tuple
    names: tuple
    grid: Grid
    scheme: str = "FD2"
    angles: tuple = (0.0,)
    probe: Optional[float] = None
    constants: Optional[LTConstants] = None
    theorems: tuple = ()
    kappa: Optional[float] = 1.0
    resonance_phi: Optional[float] = None
    resonance_probe: Optional[float] = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    tol_report: float = 1e-6
    tol_box: float = 1e-4
    check_box: bool = False
    quad_tol: float = 1e-10
    norm_p: tuple = (2.0,)
    norm_phi: tuple = (0.0,)
    scan_kappa: tuple = ()
    scan_phi: tuple = ()
    regions: tuple = ()
    out_dir: str = "out"
    sha256: str = ""

    @property
    def potential(self) -> Potential:
        return self.potentials[0]


def parse_config(raw: dict, *, text: str = "", base_dir: Optional[Path] = None) -> ExperimentConfig:
    """Validate a decoded config mapping; errors name the offending field."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a mapping")

    # potentials
    if "potentials" in raw:
        plist = raw["potentials"]
        if not isinstance(plist, list) or not plist:
            raise ConfigError("potentials", "expected a non-empty list")
        pots, names = [], []
        for i, spec in enumerate(plist):
            pots.append(build_potential(spec, f"potentials[{i}]", base_dir))
            names.append(str(spec.get("name", f"{spec.get('family')}_{i}")))
    else:
        spec = _require(raw, "potential", "potential")
        pots = [build_potential(spec, "potential", base_dir)]
        names = [str(spec.get("name", spec.get("family")))]

    # grid
    g = _section(raw, "grid")
    if not g:
        raise ConfigError("grid", "required section is missing")
    L = _real(_require(g, "L", "grid.L"), "grid.L")
    N = _require(g, "N", "grid.N")
    if isinstance(N, bool) or not isinstance(N, int):
        raise ConfigError("grid.N", "must be an integer")
    scheme = g.get("scheme", "FD2")
    if scheme not in SCHEMES:
        raise ConfigError("grid.scheme", f"must be one of {SCHEMES}")
    try:
        grid = Grid(L, N)
    except ValueError as exc:
        field_ = "grid.L" if "grid.L" in str(exc) else "grid.N"
        raise ConfigError(field_, str(exc)) from exc
    if scheme == "FD4" and N < 6:
        raise ConfigError("grid.N", "FD4 needs N >= 6")

    angles = _real_list(raw.get("angles", [0.0]), "angles")
    probe = raw.get("probe")
    if probe is not None:
        probe = _real(probe, "probe")

    # bounds
    b = _section(raw, "bounds")
    constants = None
    theorems: tuple = ()
    kappa = 1.0
    res_phi = res_probe = None
    if b:
        policy = b.get("L_policy", "semiclassical")
        try:
            constants = LTConstants(
                gamma=_real(b.get("gamma", 1.5), "bounds.gamma"),
                d=b.get("d", 1),
                policy=policy,
                multiplier=_real(b.get("multiplier", 1.0), "bounds.multiplier"),
                value=b.get("L_value"),
            )
        except ValueError as exc:
            raise ConfigError("bounds.gamma" if "gamma" in str(exc) else "bounds.L_policy",
                              str(exc)) from exc
        th = b.get("theorems", list(THEOREMS))
        if th == "all":
            th = list(THEOREMS)
        if not isinstance(th, list):
            raise ConfigError("bounds.theorems", "expected a list of theorem ids")
        for t in th:
            if t not in THEOREMS:
                raise ConfigError("bounds.theorems", f"unknown theorem {t!r}")
        theorems = tuple(th)
        kappa = _real(b.get("kappa", 1.0), "bounds.kappa")
        if not kappa > 0:
            raise ConfigError("bounds.kappa", "must be positive")
        if "phi" in b:
            res_phi = _real(b["phi"], "bounds.phi")
            if not 0 < res_phi < math.pi / 2:
                raise ConfigError("bounds.phi", "must lie in (0, pi/2)")
        elif "Resonance" in theorems:
            raise ConfigError("bounds.phi", "Resonance needs an angle")
        if "probe" in b:
            res_probe = _real(b["probe"], "bounds.probe")

    # tolerances
    t = _section(raw, "tolerances")
    known = set(_TOL_KEYS) | {"tol_report", "tol_box", "quad_tol", "check_box"}
    for k in t:
        if k not in known:
            raise ConfigError(f"tolerances.{k}", "unknown tolerance")
    tol_kw = {k: _real(t[k], f"tolerances.{k}") for k in _TOL_KEYS if k in t}
    for k, v in tol_kw.items():
        if not v > 0:
            raise ConfigError(f"tolerances.{k}", "must be positive")
    tolerances = Tolerances(**tol_kw)

    n = _section(raw, "norms")
    norm_p = _real_list(n.get("p", [2.0]), "norms.p")
    for i, p in enumerate(norm_p):
        if not p >= 1:
            raise ConfigError(f"norms.p[{i}]", "p must be >= 1")
    norm_phi = _real_list(n.get("phi", [0.0]), "norms.phi")

    s = _section(raw, "scan")
    scan_kappa = _real_list(s["kappa"], "scan.kappa") if "kappa" in s else []
    scan_phi = _real_list(s["phi"], "scan.phi") if "phi" in s else []

    regions = raw.get("regions", [])
    if not isinstance(regions, list):
        raise ConfigError("regions", "expected a list of region tags")
    for i, tag in enumerate(regions):
        try:
            parse_region(str(tag))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"regions[{i}]", f"bad region tag {tag!r}: {exc}") from exc

    out = _section(raw, "output")
    return ExperimentConfig(
        potentials=tuple(pots),
        names=tuple(names),
        grid=grid,
        scheme=scheme,
        angles=tuple(angles),
        probe=probe,
        constants=constants,
        theorems=theorems,
        kappa=kappa,
        resonance_phi=res_phi,
        resonance_probe=res_probe,
        tolerances=tolerances,
        tol_report=_real(t.get("tol_report", 1e-6), "tolerances.tol_report"),
        tol_box=_real(t.get("tol_box", 1e-4), "tolerances.tol_box"),
        check_box=bool(t.get("check_box", False)),
        quad_tol=_real(t.get("quad_tol", 1e-10), "tolerances.quad_tol"),
        norm_p=tuple(norm_p),
        norm_phi=tuple(norm_phi),
        scan_kappa=tuple(scan_kappa),
        scan_phi=tuple(scan_phi),
        regions=tuple(str(r) for r in regions),
        out_dir=str(out.get("dir", "out")),
        sha256=hashlib.sha256(text.encode()).hexdigest(),
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"not valid YAML: {exc}") from exc
    return parse_config(raw, text=text, base_dir=path.parent)
