"""Dilation-analytic potential families and L^p norms of dilated potentials.

A potential ``V`` is sampled after complex dilation as ``V_theta(x) = V(e^theta x)``
with ``theta = i*phi``.  Every family knows its closed form at complex
arguments, the half-width ``alpha`` of its analyticity strip, and an analytic
upper bound for the tail of ``|V_theta|^p`` that the quadrature uses to pick
its integration window.

Angles are passed either as a plain real number (interpreted as ``phi``) or as
a :class:`ComplexAngle`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, special
from scipy.interpolate import CubicSpline

from .errors import (
    AngleOutOfStrip,
    BranchCut,
    ConditionViolated,
    NonIntegrable,
    ToleranceNotMet,
    WrongRegime,
)

__all__ = [
    "ComplexAngle",
    "Potential",
    "Gaussian",
    "QuadraticGaussian",
    "Rational",
    "Sech2",
    "FiniteWell",
    "Tabulated",
    "Analytic",
    "zero_potential",
    "as_phi",
    "evaluate_dilated",
    "lp_integral",
    "lp_norm_quadrature",
    "gaussian_norm_closed_form",
    "cphi_condition",
    "critical_angle",
    "ScanRow",
    "norm_monotonicity_scan",
]


@dataclass(frozen=True)
class ComplexAngle:
    """Purely imaginary dilation parameter ``theta = i*phi``.

    Angles compose additively, so dilating by ``a`` and then by ``b`` is the
    same as dilating once by ``a + b``.
    """

    phi: float

    @property
    def theta(self) -> complex:
        return 1j * self.phi

    def __add__(self, other):
        return ComplexAngle(self.phi + as_phi(other))

    __radd__ = __add__

    def __neg__(self):
        return ComplexAngle(-self.phi)

    def __float__(self):
        return float(self.phi)


def as_phi(angle) -> float:
    """Return the real angle ``phi`` carried by ``angle``."""
    if isinstance(angle, ComplexAngle):
        return float(angle.phi)
    if isinstance(angle, complex):
        if angle.real != 0.0:
            raise ValueError("only purely imaginary dilations are supported here")
        return float(angle.imag)
    return float(angle)


def _stable_sech(z):
    # sech is even; fold into Re z >= 0 so exp(-w) never overflows.
    w = np.where(np.real(z) >= 0, z, -z)
    e = np.exp(-w)
    return 2.0 * e / (1.0 + e * e)


@dataclass(frozen=True, kw_only=True)
class Potential:
    """Base class of all potential families.

    ``amplitude`` multiplies the family's closed form and may be complex, so
    attractive wells such as ``-1.2*exp(-x^2)`` are ``Gaussian(c=1, amplitude=-1.2)``.
    ``offset`` is a dilation angle already applied to the potential; see
    :meth:`dilated`.
    """

    amplitude: complex = 1.0
    offset: float = 0.0

    family = "base"

    # -- family hooks ---------------------------------------------------
    def _raw(self, z):
        raise NotImplementedError

    @property
    def alpha(self) -> float:
        raise NotImplementedError

    def _abs_tail(self, psi, p, X):
        raise NotImplementedError

    def _params(self) -> dict:
        return {}

    def breakpoints(self, phi=0.0) -> tuple:
        return ()

    @property
    def is_real(self) -> bool:
        return False

    # -- public API -------------------------------------------------------
    def total_angle(self, phi=0.0) -> float:
        return self.offset + as_phi(phi)

    def check_angle(self, phi=0.0) -> float:
        psi = self.total_angle(phi)
        if abs(psi) >= self.alpha:
            raise AngleOutOfStrip(
                f"{self.family}: |phi| = {abs(psi):.6g} is not inside the strip "
                f"of half-width alpha = {self.alpha:.6g}"
            )
        return psi

    def dilated(self, phi) -> "Potential":
        """Return ``V_{i*phi}`` as a new potential object."""
        return replace(self, offset=self.total_angle(phi))

    def values(self, phi, x, *, check: bool = True):
        """Sample ``V(e^{i(offset+phi)} x)`` at real points ``x``."""
        psi = self.check_angle(phi) if check else self.total_angle(phi)
        x = np.asarray(x, dtype=float)
        return self.amplitude * self._raw(cmath.exp(1j * psi) * x)

    def __call__(self, x):
        return self.values(0.0, x)

    def abs_tail(self, phi, p, X) -> float:
        """Upper bound on the integral of ``|V_theta|^p`` over ``|x| > X``."""
        a = abs(self.amplitude)
        if a == 0.0:
            return 0.0
        return a**p * self._abs_tail(self.total_angle(phi), p, X)

    def describe(self) -> dict:
        d = {"family": self.family}
        d.update(self._params())
        d["amplitude"] = _cpair(self.amplitude)
        if self.offset:
            d["offset"] = self.offset
        return d


def _cpair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


@dataclass(frozen=True, kw_only=True)
class Gaussian(Potential):
    """``amplitude * exp(-c x^2)`` with ``Re c > 0``."""

    c: complex = 1.0
    family = "gaussian"

    def __post_init__(self):
        if complex(self.c).real <= 0:
            raise ValueError("Gaussian requires Re c > 0")

    def _raw(self, z):
        return np.exp(-self.c * z * z)

    @property
    def alpha(self) -> float:
        # (Re c) cos 2phi - (Im c) sin 2phi = |c| cos(2phi + arg c) > 0 for |phi| < alpha
        return math.pi / 4 - abs(cmath.phase(complex(self.c))) / 2

    def decay_rate(self, psi) -> float:
        return _gaussian_rate(self.c, psi)

    def _abs_tail(self, psi, p, X):
        F = self.decay_rate(psi)
        if F <= 0:
            return math.inf
        b = p * F
        return math.sqrt(math.pi / b) * special.erfc(X * math.sqrt(b))

    def _params(self):
        return {"c": _cpair(self.c)}

    @property
    def is_real(self):
        return complex(self.c).imag == 0 and complex(self.amplitude).imag == 0


@dataclass(frozen=True, kw_only=True)
class QuadraticGaussian(Gaussian):
    """``amplitude * x^2 exp(-c x^2)``.

    With a positive amplitude this is a double-humped barrier around a well
    at the origin, the standard shape-resonance profile.
    """

    family = "x2gauss"

    def _raw(self, z):
        return z * z * np.exp(-self.c * z * z)

    def _abs_tail(self, psi, p, X):
        F = self.decay_rate(psi)
        if F <= 0:
            return math.inf
        b = p * F
        s = p + 0.5
        return b**-s * special.gamma(s) * special.gammaincc(s, b * X * X)

    def breakpoints(self, phi=0.0):
        F = self.decay_rate(self.total_angle(phi))
        if F <= 0:
            return ()
        r = 1.0 / math.sqrt(F)
        return (-r, r)


@dataclass(frozen=True, kw_only=True)
class Rational(Potential):
    """``amplitude * c / (1 + x^2)^s`` evaluated on the principal branch."""

    c: complex = 1.0
    s: float = 1.0
    family = "rational"

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("Rational requires s > 0")

    def _raw(self, z):
        w = 1.0 + z * z
        on_cut = (np.imag(w) == 0) & (np.real(w) <= 0)
        if np.any(on_cut):
            raise BranchCut("1 + e^{2i phi} x^2 lies on the principal-branch cut")
        return self.c * np.power(w, -self.s)

    @property
    def alpha(self) -> float:
        return math.pi / 2

    def _abs_tail(self, psi, p, X):
        q = 2 * self.s * p
        if abs(psi) >= math.pi / 2 or q <= 1 or X < 2:
            return math.inf
        # |1 + e^{2i psi} x^2|^2 >= (x^2 - 1)^2 >= (3x^2/4)^2 for |x| >= 2
        return 2 * abs(self.c) ** p * (4 / 3) ** (self.s * p) * X ** (1 - q) / (q - 1)

    def breakpoints(self, phi=0.0):
        return (-1.0, 1.0)

    def check_gamma(self, gamma: float):
        if not self.s > 1 / (2 * gamma + 1):
            raise ValueError(f"Rational needs s > 1/(2*gamma+1) = {1 / (2 * gamma + 1):.6g}")

    def _params(self):
        return {"c": _cpair(self.c), "s": self.s}

    @property
    def is_real(self):
        return complex(self.c * self.amplitude).imag == 0


@dataclass(frozen=True, kw_only=True)
class Sech2(Potential):
    """``amplitude * sech^2(x)``; ``amplitude=-2`` is the Poschl-Teller well."""

    family = "sech2"

    def _raw(self, z):
        s = _stable_sech(z)
        return s * s

    @property
    def alpha(self) -> float:
        return math.pi / 2

    def _abs_tail(self, psi, p, X):
        cp = math.cos(psi)
        if cp <= 0 or X <= 0:
            return math.inf
        U = X * cp
        # |cosh(u + iv)| >= sinh(u) >= e^u (1 - e^{-2U}) / 2 for u >= U
        k = (2.0 / -math.expm1(-2 * U)) ** (2 * p)
        return 2 * k * math.exp(-2 * p * U) / (2 * p * cp)

    @property
    def is_real(self):
        return complex(self.amplitude).imag == 0


@dataclass(frozen=True, kw_only=True)
class FiniteWell(Potential):
    """Square well ``-depth`` on ``|x| < halfwidth``; negative depth is a barrier.

    Not dilation analytic, so only ``phi = 0`` is admissible, except for the
    identically zero well which is entire.
    """

    depth: float = 1.0
    halfwidth: float = 1.0
    family = "finite_well"

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise ValueError("FiniteWell requires halfwidth > 0")

    @property
    def alpha(self) -> float:
        return math.inf if self.depth == 0 or self.amplitude == 0 else 0.0

    def check_angle(self, phi=0.0):
        psi = self.total_angle(phi)
        if psi != 0.0 and self.alpha != math.inf:
            raise AngleOutOfStrip("finite_well admits no complex dilation")
        return psi

    def _raw(self, z):
        inside = np.abs(np.real(z)) < self.halfwidth
        return np.where(inside, -float(self.depth), 0.0).astype(complex)

    def _abs_tail(self, psi, p, X):
        return abs(self.depth) ** p * 2 * max(self.halfwidth - X, 0.0)

    def breakpoints(self, phi=0.0):
        return (-self.halfwidth, self.halfwidth)

    def _params(self):
        return {"depth": self.depth, "halfwidth": self.halfwidth}

    @property
    def is_real(self):
        return complex(self.amplitude).imag == 0


def zero_potential() -> FiniteWell:
    """The identically vanishing potential (admits every dilation)."""
    return FiniteWell(depth=0.0)


@dataclass(frozen=True, kw_only=True)
class Tabulated(Potential):
    """Potential given by samples; cubic-spline interpolated, zero outside the table.

    Only the undilated potential (``phi = 0``) can be evaluated.
    """

    x: tuple = ()
    samples: tuple = ()
    family = "tabulated"

    def __post_init__(self):
        if len(self.x) != len(self.samples) or len(self.x) < 4:
            raise ValueError("Tabulated needs matching x/samples with at least 4 points")
        if np.any(np.diff(self.x) <= 0):
            raise ValueError("Tabulated x must be strictly increasing")

    @classmethod
    def from_function(cls, f: Callable, x: Sequence[float], **kw) -> "Tabulated":
        x = np.asarray(x, dtype=float)
        return cls(x=tuple(x), samples=tuple(complex(v) for v in np.asarray(f(x))), **kw)

    @cached_property
    def _splines(self):
        x = np.asarray(self.x)
        y = np.asarray(self.samples, dtype=complex)
        return CubicSpline(x, y.real), CubicSpline(x, y.imag)

    @property
    def alpha(self) -> float:
        return 0.0

    def check_angle(self, phi=0.0):
        psi = self.total_angle(phi)
        if psi != 0.0:
            raise AngleOutOfStrip("tabulated potentials support phi = 0 only")
        return psi

    def _raw(self, z):
        xr = np.real(z)
        sr, si = self._splines
        inside = (xr >= self.x[0]) & (xr <= self.x[-1])
        return np.where(inside, sr(xr) + 1j * si(xr), 0.0)

    def _abs_tail(self, psi, p, X):
        lo, hi = self.x[0], self.x[-1]
        return 0.0 if X >= max(abs(lo), abs(hi)) else math.inf

    def breakpoints(self, phi=0.0):
        return (self.x[0], self.x[-1])

    def _params(self):
        return {"n_samples": len(self.x), "range": [self.x[0], self.x[-1]]}

    @property
    def is_real(self):
        return bool(np.all(np.imag(self.samples) == 0)) and complex(self.amplitude).imag == 0


@dataclass(frozen=True, kw_only=True)
class Analytic(Potential):
    """User-supplied analytic function ``func(z)`` with a declared strip half-width.

    The caller is responsible for ``declared_alpha``.  ``tail(psi, p, X)`` should
    bound the integral of ``|func(e^{i psi} x)|^p`` over ``|x| > X``; without it
    the tail is estimated numerically on ``X < |x| < 16X``.
    """

    func: Callable = field(default=None, compare=False)
    declared_alpha: float = 0.0
    real: bool = False
    tail: Optional[Callable] = field(default=None, compare=False)
    name: str = "analytic"
    family = "analytic"

    def _raw(self, z):
        return np.asarray(self.func(z), dtype=complex)

    @property
    def alpha(self) -> float:
        return self.declared_alpha

    def _abs_tail(self, psi, p, X):
        if self.tail is not None:
            return self.tail(psi, p, X)
        # sampled estimate; growth or overflow anywhere in the band means no decay
        x = np.geomspace(X, 16 * X, 129)
        est = 0.0
        for s in (1.0, -1.0):
            with np.errstate(all="ignore"):
                f = np.abs(self._raw(cmath.exp(1j * psi) * s * x)) ** p
            if not np.all(np.isfinite(f)) or f[-1] > f[0]:
                return math.inf
            est += integrate.trapezoid(f, x)
        return 4 * est

    def _params(self):
        return {"name": self.name, "declared_alpha": self.declared_alpha}

    @property
    def is_real(self):
        return self.real and complex(self.amplitude).imag == 0


def evaluate_dilated(V: Potential, theta, x):
    """Return ``V(e^theta x)``.

    ``theta`` may be a :class:`ComplexAngle`, a real ``phi`` or a complex
    ``theta``; only ``Im theta`` is checked against the strip.
    """
    if isinstance(theta, complex):
        V.check_angle(theta.imag)
        scale = cmath.exp(theta + 1j * V.offset)
        return V.amplitude * V._raw(scale * np.asarray(x, dtype=float))
    return V.values(theta, x)


# ---------------------------------------------------------------------------
# quadrature


def _panel_edges(X, extra):
    edges = [0.0]
    b = 1.0
    while b < X:
        edges.append(b)
        b *= 2
    edges.append(X)
    pos = np.array(edges)
    pts = np.concatenate([-pos[::-1], pos[1:]])
    extra = [e for e in extra if -X < e < X]
    return np.unique(np.concatenate([pts, extra]))


def _integrate_panels(g, edges, epsabs, epsrel, limit):
    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, abserr, info = integrate.quad(
            g, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1
        )[:3]
        total += val
        err += abserr
    return total, err


def lp_integral(
    V: Potential,
    phi,
    p: float,
    *,
    transform: Optional[Callable] = None,
    tol: float = 1e-10,
    limit: int = 200,
    max_window: float = 1e7,
) -> float:
    """Integral of ``|T(V_theta(x))|^p`` over the real line (the norm to the p-th power).

    ``transform`` maps complex potential values to non-negative reals
    (default ``abs``).  The window ``[-X, X]`` is doubled until the family's
    tail bound falls below ``tol`` times the current integral of
    ``|V_theta|^p``; the transformed integrand never exceeds ``|V_theta|``, so
    the same window serves both.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    psi = V.total_angle(phi)
    if isinstance(V, Tabulated):
        return _tabulated_integral(V, p, transform)
    if V.amplitude == 0 or (isinstance(V, FiniteWell) and V.depth == 0):
        return 0.0
    if V.alpha == 0.0:
        V.check_angle(phi)

    def mag(x):
        return abs(complex(V.values(phi, x, check=False))) ** p

    X = 1.0
    extra = V.breakpoints(phi)
    for b in extra:
        X = max(X, 2 * abs(b))
    while not math.isfinite(V.abs_tail(phi, p, X)):
        X *= 2
        if X > max_window:
            raise NonIntegrable(
                f"{V.family}: |V_theta|^p is not integrable at phi = {psi:.6g}, p = {p}"
            )
    while True:
        edges = _panel_edges(X, extra)
        base, err = _integrate_panels(mag, edges, 0.0, tol / 10, limit)
        tail = V.abs_tail(phi, p, X)
        if tail <= tol * base or base == 0.0:
            break
        X *= 2
        if X > max_window:
            raise NonIntegrable(
                f"{V.family}: tail of |V_theta|^p does not decay at phi = {psi:.6g}, p = {p}"
            )
    if err > tol * base:
        raise ToleranceNotMet(f"quadrature error {err:.3g} exceeds tol * {base:.3g}")
    if transform is None:
        return base

    def g(x):
        return float(transform(complex(V.values(phi, x, check=False)))) ** p

    val, err = _integrate_panels(g, edges, tol * base / (10 * len(edges)), tol / 10, limit)
    if err > tol * base:
        raise ToleranceNotMet(f"quadrature error {err:.3g} exceeds tol * {base:.3g}")
    return val


def _tabulated_integral(V: Tabulated, p, transform):
    # accuracy is limited by the table itself; integrate the spline on a refined grid
    x = np.asarray(V.x)
    fine = np.linspace(x[0], x[-1], 8 * (len(x) - 1) + 1)
    vals = V.values(0.0, fine)
    f = np.abs(vals) if transform is None else np.array([transform(v) for v in vals])
    return float(integrate.simpson(np.asarray(f, dtype=float) ** p, x=fine))


def lp_norm_quadrature(V: Potential, phi, p: float, *, tol: float = 1e-10, **kw) -> float:
    """``||V_theta||_{L^p(R)}`` by adaptive Gauss-Kronrod panels."""
    return lp_integral(V, phi, p, tol=tol, **kw) ** (1.0 / p)


# ---------------------------------------------------------------------------
# closed forms for the Gaussian family


def _gaussian_rate(c, phi) -> float:
    """``(Re c) cos 2phi - (Im c) sin 2phi``, with rounding-level values snapped to 0."""
    c = complex(c)
    F = c.real * math.cos(2 * phi) - c.imag * math.sin(2 * phi)
    return 0.0 if abs(F) <= 16 * np.finfo(float).eps * abs(c) else F


def cphi_condition(c: complex, phi: float) -> bool:
    """Integrability condition ``(Re c) cos 2phi > (Im c) sin 2phi``."""
    return _gaussian_rate(c, phi) > 0


def gaussian_norm_closed_form(c: complex, phi: float, p: float) -> float:
    """Exact ``||exp(-c (e^{i phi} x)^2)||_{L^p(R)}``."""
    c = complex(c)
    if c.real <= 0:
        raise ConditionViolated("Re c must be positive")
    F = _gaussian_rate(c, phi)
    if not F > 0:
        raise ConditionViolated(f"(Re c)cos 2phi - (Im c)sin 2phi = {F:.6g} is not positive")
    return (math.pi / (F * p)) ** (1.0 / (2 * p))


def critical_angle(c: complex) -> float:
    """Angle where the Gaussian's dilated norm is smallest (requires Im c < 0)."""
    c = complex(c)
    if c.real <= 0 or c.imag >= 0:
        raise WrongRegime("critical angle is defined for Re c > 0, Im c < 0")
    return 0.5 * math.atan(-c.imag / c.real)


@dataclass(frozen=True)
class ScanRow:
    phi: float
    norm: float
    direction: int  # sign of norm[i] - norm[i-1]; 0 for the first row


def norm_monotonicity_scan(V: Potential, p: float, phi_grid, *, tol: float = 1e-10):
    """Dilated norms along ``phi_grid`` with the sign of successive differences."""
    rows = []
    prev = None
    for phi in phi_grid:
        n = lp_norm_quadrature(V, phi, p, tol=tol)
        direction = 0 if prev is None else int(np.sign(n - prev))
        rows.append(ScanRow(float(phi), n, direction))
        prev = n
    return rows
