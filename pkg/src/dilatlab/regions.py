"""Complex subplanes used as summation domains of the eigenvalue estimates.

Open sectors are described by an interval of arguments ``(lo, hi)`` on the
universal cover; membership reduces ``arg z - lo`` modulo ``2 pi`` so sectors
that straddle the negative real axis need no special casing.  ``z = 0`` is in
no open sector and belongs to ``NonNegativeReals``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import KappaDomain, UnsupportedVariant

__all__ = [
    "Region",
    "sector_c",
    "sector_u",
    "quadrant",
    "upper_half",
    "lower_half",
    "left_half_closed",
    "right_half_open",
    "upper_imaginary_axis",
    "lower_imaginary_axis",
    "negative_reals",
    "nonnegative_reals",
    "resonance_sector",
    "arg_interval",
    "whole_plane",
    "union",
    "complement",
    "contains",
    "rotate_region",
    "parse_region",
    "axis_eps",
]

TWO_PI = 2 * math.pi
_NAMED_TOL = 1e-12


def axis_eps(z: complex, rel: float = 1e-9, abs_: float = 1e-12) -> float:
    """Half-width of the tolerance band used by the axis variants."""
    return rel * abs(z) + abs_


@dataclass(frozen=True)
class Region:
    """A predicate-backed subset of the complex plane.

    ``kind`` selects the variant; ``sign``, ``kappa``, ``phi``, ``lo``/``hi``
    and ``members`` carry its parameters.
    """

    kind: str
    sign: int = 1
    kappa: Optional[float] = None
    phi: Optional[float] = None
    lo: Optional[float] = None
    hi: Optional[float] = None
    members: tuple = ()

    def __contains__(self, z) -> bool:
        return contains(self, z)

    def mask(self, zs) -> np.ndarray:
        return np.array([contains(self, z) for z in np.ravel(zs)], dtype=bool)

    def arg_interval(self) -> tuple:
        """Open argument interval ``(lo, hi)`` of an arg-interval variant."""
        k = self.kind
        if k == "sectorC":
            a = math.atan(self.kappa)
            return (-a, a) if self.sign > 0 else (math.pi - a, math.pi + a)
        if k == "sectorU":
            a = 2 * math.atan(self.kappa)
            half = math.pi / 2
            return (half, half + a) if self.sign > 0 else (-half - a, -half)
        if k == "quadrant":
            lo = (self.sign - 1) * math.pi / 2
            return (lo, lo + math.pi / 2)
        if k == "upper":
            return (0.0, math.pi)
        if k == "lower":
            return (-math.pi, 0.0)
        if k == "right":
            return (-math.pi / 2, math.pi / 2)
        if k == "resonance":
            return (-2 * self.phi, 0.0)
        if k == "arg":
            return (self.lo, self.hi)
        raise UnsupportedVariant(f"{self.tag()} is not an open argument interval")

    def tag(self) -> str:
        k = self.kind
        sgn = "+" if self.sign > 0 else "-"
        if k in ("sectorC", "sectorU"):
            return f"{k}{sgn}:kappa={self.kappa!r}"
        if k == "quadrant":
            return ("", "I", "II", "III", "IV")[self.sign]
        if k == "resonance":
            return f"resonance:phi={self.phi!r}"
        if k == "arg":
            return f"arg:lo={self.lo!r},hi={self.hi!r}"
        if k in ("union", "complement"):
            return f"{k}(" + ",".join(m.tag() for m in self.members) + ")"
        return k


def _check_kappa(kappa):
    if not kappa > 0:
        raise KappaDomain(f"kappa must be positive, got {kappa}")
    return float(kappa)


def sector_c(sign: int, kappa: float) -> Region:
    """``{|Im z| < sign * kappa * Re z}``: sector around the positive (sign=+1)
    or negative (sign=-1) real axis."""
    return Region("sectorC", 1 if sign > 0 else -1, kappa=_check_kappa(kappa))


def sector_u(sign: int, kappa: float) -> Region:
    """``{pi/2 < arg z < pi/2 + 2 arctan kappa}`` for sign=+1, mirrored for -1."""
    return Region("sectorU", 1 if sign > 0 else -1, kappa=_check_kappa(kappa))


def quadrant(n: int) -> Region:
    if n not in (1, 2, 3, 4):
        raise ValueError("quadrant number must be 1..4")
    return Region("quadrant", n)


def upper_half() -> Region:
    return Region("upper")


def lower_half() -> Region:
    return Region("lower")


def left_half_closed() -> Region:
    return Region("left_closed")


def right_half_open() -> Region:
    return Region("right")


def upper_imaginary_axis() -> Region:
    return Region("imag_up")


def lower_imaginary_axis() -> Region:
    return Region("imag_down")


def negative_reals() -> Region:
    return Region("neg_reals")


def nonnegative_reals() -> Region:
    return Region("nonneg_reals")


def resonance_sector(phi: float) -> Region:
    """``{-2 phi < arg z < 0}``, where dilation by ``phi`` uncovers resonances."""
    return Region("resonance", phi=float(phi))


def arg_interval(lo: float, hi: float) -> Region:
    if not 0 < hi - lo <= TWO_PI:
        raise ValueError("need 0 < hi - lo <= 2 pi")
    return Region("arg", lo=float(lo), hi=float(hi))


def whole_plane() -> Region:
    return Region("whole")


def union(*regions: Region) -> Region:
    return Region("union", members=tuple(regions))


def complement(region: Region) -> Region:
    return Region("complement", members=(region,))


def _in_arg_interval(z: complex, lo: float, hi: float) -> bool:
    if z == 0:
        return False
    t = (cmath.phase(z) - lo) % TWO_PI
    return 0.0 < t < hi - lo


def contains(R: Region, z) -> bool:
    z = complex(z)
    k = R.kind
    x, y = z.real, z.imag
    if k == "sectorC":
        return abs(y) < R.sign * R.kappa * x
    if k == "quadrant":
        n = R.sign
        sx = x > 0 if n in (1, 4) else x < 0
        sy = y > 0 if n in (1, 2) else y < 0
        return sx and sy
    if k == "upper":
        return y > 0
    if k == "lower":
        return y < 0
    if k == "right":
        return x > 0
    if k == "left_closed":
        return x <= 0
    if k == "imag_up":
        return abs(x) <= axis_eps(z) and y > 0
    if k == "imag_down":
        return abs(x) <= axis_eps(z) and y < 0
    if k == "neg_reals":
        return abs(y) <= axis_eps(z) and x < 0
    if k == "nonneg_reals":
        return abs(y) <= axis_eps(z) and x >= 0
    if k == "whole":
        return True
    if k == "union":
        return any(contains(m, z) for m in R.members)
    if k == "complement":
        return not contains(R.members[0], z)
    lo, hi = R.arg_interval()
    return _in_arg_interval(z, lo, hi)


def _same_interval(a, b) -> bool:
    d0 = (a[0] - b[0]) % TWO_PI
    d0 = min(d0, TWO_PI - d0)
    return d0 < _NAMED_TOL and abs((a[1] - a[0]) - (b[1] - b[0])) < _NAMED_TOL


def _identify(lo: float, hi: float, kappa_hint=None, phi_hint=None) -> Region:
    """Return the named variant with argument interval ``(lo, hi)`` if one exists.

    ``kappa_hint`` is tried first so that rotations keep the caller's kappa bit-exact.
    """
    width = hi - lo
    iv = (lo, hi)
    candidates = []
    if kappa_hint is not None:
        candidates += [sector_c(1, kappa_hint), sector_c(-1, kappa_hint),
                       sector_u(1, kappa_hint), sector_u(-1, kappa_hint)]
    candidates += [quadrant(n) for n in (1, 2, 3, 4)]
    candidates += [upper_half(), lower_half(), right_half_open()]
    if width < math.pi:
        k = math.tan(width / 2)
        candidates += [sector_c(1, k), sector_c(-1, k), sector_u(1, k), sector_u(-1, k)]
    if 0 < width < math.pi:
        if phi_hint is not None:
            candidates.append(resonance_sector(phi_hint))
        candidates.append(resonance_sector(width / 2))
    for c in candidates:
        if _same_interval(c.arg_interval(), iv):
            return c
    return arg_interval(lo, hi)


def rotate_region(R: Region, phi: float) -> Region:
    """The image ``e^{2 i phi} R``: the argument interval shifted by ``2 phi``.

    A point ``z`` is in ``R`` exactly when ``e^{2 i phi} z`` is in the result.
    """
    lo, hi = R.arg_interval()
    shift = 2 * float(phi)
    lo, hi = lo + shift, hi + shift
    # reduce into (-pi, pi] for the lower end
    k = math.floor((lo + math.pi) / TWO_PI)
    lo, hi = lo - k * TWO_PI, hi - k * TWO_PI
    return _identify(lo, hi, R.kappa, R.phi)


_REGION_RE = re.compile(r"^\s*([A-Za-z_]+)([+-]?)\s*(?::\s*(.*))?$")


def parse_region(text: str) -> Region:
    """Parse a tag such as ``sectorU+:kappa=1.0`` or ``resonance:phi=0.5236``."""
    m = _REGION_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse region {text!r}")
    name, sgn, rest = m.group(1), m.group(2), m.group(3) or ""
    params = {}
    for part in filter(None, (p.strip() for p in rest.split(","))):
        key, _, val = part.partition("=")
        params[key.strip()] = float(val)
    sign = -1 if sgn == "-" else 1
    lname = name.lower()
    if lname == "sectorc":
        return sector_c(sign, params["kappa"])
    if lname == "sectoru":
        return sector_u(sign, params["kappa"])
    if lname == "resonance":
        return resonance_sector(params["phi"])
    if lname == "arg":
        return arg_interval(params["lo"], params["hi"])
    simple = {
        "i": quadrant(1),
        "ii": quadrant(2),
        "iii": quadrant(3),
        "iv": quadrant(4),
        "upper": upper_half(),
        "lower": lower_half(),
        "left_closed": left_half_closed(),
        "right": right_half_open(),
        "imag_up": upper_imaginary_axis(),
        "imag_down": lower_imaginary_axis(),
        "neg_reals": negative_reals(),
        "nonneg_reals": nonnegative_reals(),
        "whole": whole_plane(),
    }
    if lname in simple:
        return simple[lname]
    raise ValueError(f"unknown region variant {name!r}")
