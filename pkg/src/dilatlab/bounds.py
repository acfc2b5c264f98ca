"""Left- and right-hand sides of the Lieb-Thirring-type eigenvalue estimates.

Every estimate has the shape

    sum over eigenvalues in a region of |lambda|^gamma  <=  prefactor * ||f||_p^p

with ``p = gamma + d/2`` and ``f`` a pointwise part (negative real part,
positive imaginary part, modulus, ...) of a phase-rotated dilated potential.
Only the one-dimensional instance is evaluated numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import (
    ClassificationUnstable,
    ConditionViolated,
    InsufficientAlpha,
    KappaDomain,
    WrongRegime,
)
from .operators import Grid
from .potentials import Potential, lp_integral
from .regions import (
    complement,
    left_half_closed,
    lower_half,
    negative_reals,
    nonnegative_reals,
    quadrant,
    right_half_open,
    sector_c,
    sector_u,
    union,
    upper_half,
    upper_imaginary_axis,
    whole_plane,
)
from .spectra import (
    SpectrumClassification,
    Tolerances,
    box_convergence,
    classify,
    classify_spectra,
    spectrum_at,
)

__all__ = [
    "THEOREMS",
    "LTConstants",
    "BoundReport",
    "negative_part",
    "lhs_sum",
    "rhs",
    "alpha_required",
    "theorem_region",
    "applicable",
    "classify_for_bounds",
    "verify",
    "verify_suite",
]

THEOREMS = (
    "rLT", "FLLS", "FLLSprime", "FLLSpp", "So_upper", "So_lower", "So_all",
    "Thm23_plus", "Thm23_minus", "QII", "QIII", "QI", "QIV", "RightHalf", "AllA",
    "Resonance", "ImagAxis", "Embedded",
)  # fmt: skip

_NEEDS_KAPPA = {"FLLS", "FLLSprime", "Thm23_plus", "Thm23_minus"}
_REAL_ONLY = {"rLT", "Embedded"}
PI = math.pi


# ---------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class LTConstants:
    """``L_{gamma,d}`` and ``C_{gamma,d} = 2^{1+gamma/2+d/4} L_{gamma,d}``.

    ``policy`` is ``"semiclassical"`` (the phase-space constant, sharp for
    ``gamma >= 3/2`` in one dimension), ``"semiclassical_times"`` (that constant
    times ``multiplier >= 1``) or ``"user"`` (``value`` given directly).
    """

    gamma: float
    d: int = 1
    policy: str = "semiclassical"
    multiplier: float = 1.0
    value: Optional[float] = None

    def __post_init__(self):
        g, d = self.gamma, self.d
        if int(d) != d or d < 1:
            raise ValueError("d must be a positive integer")
        ok = (d == 1 and g >= 0.5) or (d == 2 and g > 0) or (d >= 3 and g >= 0)
        if not ok:
            raise ValueError(f"(gamma, d) = ({g}, {d}) is outside the admissible range")
        if self.policy not in ("semiclassical", "semiclassical_times", "user"):
            raise ValueError(f"unknown L policy {self.policy!r}")
        if self.policy == "semiclassical_times" and not self.multiplier >= 1:
            raise ValueError("multiplier must be >= 1")
        if self.policy == "user" and not (self.value is not None and self.value > 0):
            raise ValueError("user policy needs a positive value")

    @property
    def p(self) -> float:
        return self.gamma + self.d / 2

    @property
    def semiclassical(self) -> float:
        g, d = self.gamma, self.d
        return gamma_fn(g + 1) / (2**d * PI ** (d / 2) * gamma_fn(g + d / 2 + 1))

    @property
    def L(self) -> float:
        if self.policy == "user":
            return float(self.value)
        if self.policy == "semiclassical_times":
            return self.multiplier * self.semiclassical
        return self.semiclassical

    @property
    def C(self) -> float:
        return 2 ** (1 + self.gamma / 2 + self.d / 4) * self.L

    def describe(self) -> dict:
        return {"gamma": self.gamma, "d": self.d, "policy": self.policy,
                "multiplier": self.multiplier, "L": float(self.L), "C": float(self.C)}


# ---------------------------------------------------------------------------
# pointwise parts


_PARTS: dict = {
    "ReMinus": lambda v: np.maximum(-np.real(v), 0.0),
    "RePlus": lambda v: np.maximum(np.real(v), 0.0),
    "ImPlus": lambda v: np.maximum(np.imag(v), 0.0),
    "AbsWhole": np.abs,
}


def negative_part(f, mode: str):
    """Apply ``(Re f)_-``, ``(Re f)_+``, ``(Im f)_+`` or ``|f|`` pointwise.

    ``f`` may be a callable (a callable is returned) or array-like values.
    """
    try:
        op = _PARTS[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}; expected one of {sorted(_PARTS)}") from None
    if callable(f):
        return lambda x: op(f(x))
    out = op(np.asarray(f))
    return float(out) if np.ndim(out) == 0 else out


def _part_integral(V, dil, phase, mode, p, tol):
    """``|| part(e^{i phase} V_{i dil}) ||_p^p``."""
    rot = cmath.exp(1j * phase)
    op = _PARTS[mode]
    if mode == "AbsWhole":
        return lp_integral(V, dil, p, tol=tol)
    return lp_integral(V, dil, p, tol=tol, transform=lambda v: op(rot * v))


# ---------------------------------------------------------------------------
# theorem table


def _check_kappa(theorem_id, kappa):
    if theorem_id in _NEEDS_KAPPA and (kappa is None or not kappa > 0):
        raise KappaDomain(f"{theorem_id} needs kappa > 0, got {kappa}")


def alpha_required(theorem_id: str, kappa=None, phi=None) -> float:
    """Lower bound on the strip half-width in the theorem's hypothesis (strict)."""
    _check_kappa(theorem_id, kappa)
    if theorem_id in ("rLT", "FLLS", "FLLSprime", "FLLSpp"):
        return 0.0
    if theorem_id in ("So_upper", "So_lower", "So_all", "ImagAxis"):
        return PI / 4
    if theorem_id in ("Thm23_plus", "Thm23_minus"):
        return PI / 4 - math.atan(kappa) / 2
    if theorem_id in ("QII", "QIII"):
        return PI / 8
    if theorem_id in ("QI", "QIV", "RightHalf", "AllA"):
        return 3 * PI / 8
    if theorem_id == "Resonance":
        if phi is None or not 0 < phi < PI / 2:
            raise ValueError("Resonance needs 0 < phi < pi/2")
        return abs(1.5 * phi - PI / 2)
    if theorem_id == "Embedded":
        return PI / 2
    raise ValueError(f"unknown theorem {theorem_id!r}")


def theorem_region(theorem_id: str, kappa=None, phi=None):
    """``(eigenvalue class, region)`` summed on the left-hand side."""
    _check_kappa(theorem_id, kappa)
    table = {
        "rLT": ("isolated", negative_reals()),
        "FLLS": ("isolated", complement(sector_c(1, kappa)) if kappa else None),
        "FLLSprime": ("isolated", sector_c(-1, kappa) if kappa else None),
        "FLLSpp": ("isolated", left_half_closed()),
        "So_upper": ("isolated", union(upper_half(), negative_reals())),
        "So_lower": ("isolated", union(lower_half(), negative_reals())),
        "So_all": ("isolated", whole_plane()),
        "Thm23_plus": ("isolated", sector_u(1, kappa) if kappa else None),
        "Thm23_minus": ("isolated", sector_u(-1, kappa) if kappa else None),
        "QI": ("isolated", quadrant(1)),
        "QII": ("isolated", quadrant(2)),
        "QIII": ("isolated", quadrant(3)),
        "QIV": ("isolated", quadrant(4)),
        "RightHalf": ("isolated", right_half_open()),
        "AllA": ("isolated", whole_plane()),
        "Resonance": ("resonance", complement(nonnegative_reals())),
        "ImagAxis": ("isolated", upper_imaginary_axis()),
        "Embedded": ("embedded", whole_plane()),
    }
    try:
        return table[theorem_id]
    except KeyError:
        raise ValueError(f"unknown theorem {theorem_id!r}") from None


def _check_hypotheses(theorem_id, constants, V, kappa, phi):
    if constants.d != 1:
        raise WrongRegime("right-hand sides are evaluated for d = 1 only")
    if theorem_id != "rLT" and constants.gamma < 1:
        raise WrongRegime(f"{theorem_id} requires gamma >= 1")
    if theorem_id in _REAL_ONLY and not V.is_real:
        raise ConditionViolated(f"{theorem_id} applies to real potentials only")
    need = alpha_required(theorem_id, kappa, phi)
    if need > 0 and not V.alpha > need:
        raise InsufficientAlpha(
            f"{theorem_id} needs alpha > {need:.6g}, potential has alpha = {V.alpha:.6g}"
        )
    if theorem_id == "Resonance" and not phi < V.alpha:
        raise InsufficientAlpha(f"Resonance needs phi < alpha = {V.alpha:.6g}")
    return need


def rhs(theorem_id: str, constants: LTConstants, V: Potential, *, kappa=None, phi=None,
        tol: float = 1e-10) -> float:
    """Right-hand side of the named estimate for potential ``V``."""
    _check_hypotheses(theorem_id, constants, V, kappa, phi)
    p, L, C = constants.p, constants.L, constants.C

    def I(dil, phase, mode):
        return _part_integral(V, dil, phase, mode, p, tol)

    t = theorem_id
    if t == "rLT":
        return L * I(0.0, 0.0, "ReMinus")
    if t == "FLLS":
        return C * (1 + 2 / kappa) ** p * I(0.0, 0.0, "AbsWhole")
    if t == "FLLSprime":
        return (1 + kappa) * L * I(0.0, 0.0, "ReMinus")
    if t == "FLLSpp":
        return C * I(0.0, 0.0, "AbsWhole")
    if t == "So_upper":
        return C * I(PI / 4, 0.0, "AbsWhole")
    if t == "So_lower":
        return C * I(-PI / 4, 0.0, "AbsWhole")
    if t == "So_all":
        return rhs("So_upper", constants, V, tol=tol) + rhs("So_lower", constants, V, tol=tol)
    if t in ("Thm23_plus", "Thm23_minus"):
        s = 1 if t == "Thm23_plus" else -1
        a = math.atan(kappa)
        return (1 + kappa) * L * I(s * (PI / 4 - a / 2), s * (PI / 2 - a), "ReMinus")
    if t == "QII":
        return 2 * L * I(PI / 8, PI / 4, "ReMinus")
    if t == "QIII":
        return 2 * L * I(-PI / 8, -PI / 4, "ReMinus")
    if t == "QI":
        return 2 * L * I(3 * PI / 8, 3 * PI / 4, "ReMinus")
    if t == "QIV":
        return 2 * L * I(-3 * PI / 8, -3 * PI / 4, "ReMinus")
    if t == "RightHalf":
        return 2 * L * (I(3 * PI / 8, 3 * PI / 4, "ReMinus") + I(-3 * PI / 8, -3 * PI / 4, "ReMinus"))
    if t == "AllA":
        return rhs("FLLSpp", constants, V, tol=tol) + rhs("RightHalf", constants, V, tol=tol)
    if t == "Resonance":
        return (1 + math.tan(phi)) * L * I(1.5 * phi - PI / 2, phi - PI / 2, "ReMinus")
    if t == "ImagAxis":
        return L * I(PI / 4, 0.0, "ImPlus")
    if t == "Embedded":
        return L * I(PI / 2, 0.0, "RePlus")
    raise ValueError(f"unknown theorem {theorem_id!r}")


def applicable(theorem_id, constants, V, *, kappa=None, phi=None) -> bool:
    """Whether the theorem's hypotheses hold for ``V`` (no numerics involved)."""
    try:
        _check_hypotheses(theorem_id, constants, V, kappa, phi)
    except (ValueError, KappaDomain):
        return False
    return True


# ---------------------------------------------------------------------------
# left-hand sides and reports


def lhs_sum(classification: SpectrumClassification, region, gamma: float,
            use: str = "isolated") -> float:
    """``sum multiplicity * |lambda|^gamma`` over the class ``use`` inside ``region``.

    For ``use='resonance'`` non-negative reals are always excluded.
    """
    pairs = classification.members({"embedded": "embedded"}.get(use, use))
    excl = nonnegative_reals() if use == "resonance" else None
    total = 0.0
    for e in pairs:
        if region is not None and not region.__contains__(e.value):
            continue
        if excl is not None and excl.__contains__(e.value):
            continue
        total += e.multiplicity * abs(e.value) ** gamma
    return total


def _contributors(classification, use, region):
    return [e for e in classification.members(use)
            if region is None or region.__contains__(e.value)]


def classify_undilated(V, grid, *, scheme="FD2", tol=Tolerances()) -> SpectrumClassification:
    """Classification for potentials that admit no dilation.

    Eigenvalues of ``H`` off the half-line ``[0, inf)`` are taken as isolated;
    no stationarity check is possible.
    """
    spec = spectrum_at(V, grid, 0.0, scheme=scheme, tol=tol)
    from .spectra import ray_distance

    iso = tuple(e for e in spec if ray_distance(e.value, 0.0) > tol.tol_ray(e.value))
    rest = tuple(e for e in spec if e not in iso)
    return SpectrumClassification(phi=0.0, phi_probe=0.0, isolated=iso, continuum=rest,
                                  potential_is_real=V.is_real, tolerances=tol)


def classify_for_bounds(V, grid, *, phi=None, phi_probe=None, scheme="FD2",
                        tol=Tolerances(), threads=None) -> SpectrumClassification:
    """Classification with default angles: ``phi = min(0.3, alpha/2)``, probe ``phi/2``."""
    if V.alpha == 0:
        return classify_undilated(V, grid, scheme=scheme, tol=tol)
    if phi is None:
        phi = min(0.3, V.alpha / 2)
    if phi_probe is None:
        phi_probe = phi / 2
    return classify(V, grid, phi, phi_probe, scheme=scheme, tol=tol, threads=threads)


@dataclass
class BoundReport:
    """One inequality instance and its outcome."""

    theorem_id: str
    lhs: float
    rhs: float
    satisfied: bool
    ratio: float
    alpha_required: float
    gamma: float
    d: int
    L_policy: str
    L: float
    C: float
    kappa: Optional[float] = None
    phi: Optional[float] = None
    n_contributing: int = 0
    contributing: list = field(default_factory=list)
    potential: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    classification_angles: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    tol_report: float = 1e-6

    def to_dict(self) -> dict:
        return asdict(self)

    CSV_FIELDS = ("theorem_id", "gamma", "d", "L_policy", "kappa", "phi", "lhs", "rhs",
                  "ratio", "satisfied", "alpha_required", "n_contributing")

    def csv_row(self) -> tuple:
        return tuple(getattr(self, f) for f in self.CSV_FIELDS)


def _ratio(lhs, rhs):
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


def verify(
    theorem_id: str,
    V: Potential,
    grid: Grid,
    constants: LTConstants,
    *,
    kappa=None,
    phi=None,
    classification: Optional[SpectrumClassification] = None,
    phi_probe=None,
    scheme: str = "FD2",
    tol: Tolerances = Tolerances(),
    tol_report: float = 1e-6,
    quad_tol: float = 1e-10,
    check_box: bool = False,
    tol_box: float = 1e-4,
    threads=None,
) -> BoundReport:
    """Compute both sides of one estimate and compare them.

    ``phi`` is the theorem's angle for ``Resonance``; for the other estimates
    it (with ``phi_probe``) only sets the classification angles.  A supplied
    ``classification`` is reused; for ``Resonance`` it must be taken at ``phi``.
    """
    need = _check_hypotheses(theorem_id, constants, V, kappa, phi)
    if classification is None:
        if theorem_id == "Resonance":
            probe = phi_probe if phi_probe is not None else phi / 2
            classification = classify(V, grid, phi, probe, scheme=scheme, tol=tol,
                                      threads=threads)
        else:
            classification = classify_for_bounds(V, grid, phi=phi, phi_probe=phi_probe,
                                                 scheme=scheme, tol=tol, threads=threads)
    elif theorem_id == "Resonance" and classification.phi != phi:
        raise ValueError("Resonance needs a classification taken at the theorem's phi")
    use, region = theorem_region(theorem_id, kappa, phi)
    contrib = _contributors(classification, use, region)
    if theorem_id == "Resonance":
        contrib = [e for e in contrib if not nonnegative_reals().__contains__(e.value)]
    amb = {complex(z) for z in classification.ambiguous}
    if any(e.value in amb for e in contrib):
        raise ClassificationUnstable(f"{theorem_id}: a contributing eigenvalue is ambiguous")
    left = lhs_sum(classification, region, constants.gamma, use)
    right = rhs(theorem_id, constants, V, kappa=kappa, phi=phi, tol=quad_tol)
    flags = {
        "max_residual": max((e.residual for e in contrib), default=0.0),
        "residuals_ok": all(e.residual <= tol.tol_eig for e in contrib),
        "n_unresolved": len(classification.unresolved),
    }
    if check_box and contrib:
        ok, shift = box_convergence(V, grid, classification.phi, [e.value for e in contrib],
                                    tol_box=tol_box, scheme=scheme, tol=tol)
        flags["box_converged"] = ok
        flags["box_shift"] = shift
    return BoundReport(
        theorem_id=theorem_id,
        lhs=float(left),
        rhs=float(right),
        satisfied=bool(left <= right * (1 + tol_report)),
        ratio=float(_ratio(left, right)),
        alpha_required=need,
        gamma=constants.gamma,
        d=constants.d,
        L_policy=constants.policy,
        L=constants.L,
        C=constants.C,
        kappa=kappa,
        phi=phi,
        n_contributing=sum(e.multiplicity for e in contrib),
        contributing=[[e.value.real, e.value.imag, e.multiplicity] for e in contrib],
        potential=V.describe(),
        grid={"L": grid.L, "N": grid.N, "scheme": scheme},
        classification_angles=[0.0, classification.phi_probe, classification.phi],
        flags=flags,
        tol_report=tol_report,
    )


def verify_suite(
    V: Potential,
    grid: Grid,
    constants: LTConstants,
    theorems=THEOREMS,
    *,
    kappa: float = 1.0,
    resonance_phi=None,
    resonance_probe=None,
    phi=None,
    phi_probe=None,
    scheme: str = "FD2",
    tol: Tolerances = Tolerances(),
    tol_report: float = 1e-6,
    threads=None,
    skip_inapplicable: bool = True,
) -> list:
    """Verify several estimates, sharing one classification between them.

    Theorems whose hypotheses ``V`` does not meet are skipped (or raise when
    ``skip_inapplicable`` is false).
    """
    reports = []
    shared = None
    res_cls = None
    for t in theorems:
        tphi = resonance_phi if t == "Resonance" else None
        if not applicable(t, constants, V, kappa=kappa if t in _NEEDS_KAPPA else None, phi=tphi):
            if skip_inapplicable:
                continue
            _check_hypotheses(t, constants, V, kappa if t in _NEEDS_KAPPA else None, tphi)
        if t == "Resonance":
            if res_cls is None:
                probe = resonance_probe if resonance_probe is not None else tphi / 2
                res_cls = classify(V, grid, tphi, probe, scheme=scheme, tol=tol, threads=threads)
            cls = res_cls
        else:
            if shared is None:
                shared = classify_for_bounds(V, grid, phi=phi, phi_probe=phi_probe,
                                             scheme=scheme, tol=tol, threads=threads)
            cls = shared
        reports.append(
            verify(t, V, grid, constants, kappa=kappa if t in _NEEDS_KAPPA else None,
                   phi=tphi, classification=cls, scheme=scheme, tol=tol,
                   tol_report=tol_report, threads=threads)
        )
    return reports
