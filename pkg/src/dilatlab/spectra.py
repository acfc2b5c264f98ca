"""Spectra of dilated Hamiltonians, eigenvalue tracking and classification.

Eigenvalues come from LAPACK's dense non-Hermitian driver (Hessenberg
reduction followed by shifted QR).  For the banded finite-difference
matrices the eigenvectors needed for residuals are recovered by inverse
iteration with a banded LU, which is far cheaper than asking LAPACK for the
full eigenvector matrix.
"""

from __future__ import annotations

import cmath
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import AngleOrder, NoConvergence
from .operators import DilatedHamiltonian, Grid, assemble
from .potentials import Potential, as_phi
from .regions import resonance_sector

log = logging.getLogger(__name__)

__all__ = [
    "EigenPair",
    "Tolerances",
    "SpectrumClassification",
    "Path",
    "eigenvalues",
    "rotate_spectrum",
    "ray_distance",
    "spectrum_at",
    "classify",
    "trajectory",
    "box_convergence",
]


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue cluster: centre ``value``, worst member residual and size."""

    value: complex
    residual: float
    multiplicity: int = 1


@dataclass(frozen=True)
class Tolerances:
    """Numerical knobs shared by classification and bound verification."""

    tol_eig: float = 1e-8
    cluster_rel: float = 1e-6
    tol_ray_rel: float = 0.05
    tol_ray_abs: float = 0.01
    tol_match: float = 1e-4

    def tol_ray(self, z) -> float:
        return self.tol_ray_rel * abs(z) + self.tol_ray_abs


# ---------------------------------------------------------------------------
# dense eigensolve


def _bandwidth(A):
    i, j = np.nonzero(A)
    if i.size == 0:
        return 0, 0
    return int(max(0, (i - j).max())), int(max(0, (j - i).max()))


def _to_banded(A, lower, upper):
    N = A.shape[0]
    ab = np.zeros((lower + upper + 1, N), dtype=complex)
    for k in range(-lower, upper + 1):
        d = np.diagonal(A, k)
        if k >= 0:
            ab[upper - k, k:] = d
        else:
            ab[upper - k, : N + k] = d
    return ab


def _banded_matmul(ab, lower, upper, V):
    """``A @ V`` for ``A`` in LAPACK banded storage."""
    N = ab.shape[1]
    out = np.zeros_like(V, dtype=complex)
    for k in range(-lower, upper + 1):
        row = ab[upper - k]
        if k >= 0:
            out[: N - k] += row[k:, None] * V[k:]
        else:
            out[-k:] += row[: N + k, None] * V[: N + k]
    return out


def _inverse_iteration(ab, lower, upper, lam, start, scale, steps=2):
    shifted = ab.copy()
    v = start
    shift = lam
    for attempt in range(4):
        shifted[upper] = ab[upper] - shift
        try:
            with np.errstate(all="ignore"):
                for _ in range(steps):
                    v = sla.solve_banded((lower, upper), shifted, v, check_finite=False)
                    v = v / np.linalg.norm(v)
            if np.all(np.isfinite(v)):
                return v
        except (sla.LinAlgError, ValueError):
            pass
        shift = lam + scale * 4.0 ** attempt * np.finfo(float).eps * (1 + 1j)
        v = start
    raise NoConvergence("inverse iteration failed", index=None)


def _raw_eig(A, want_residuals=True):
    """Eigenvalues and per-eigenvalue residuals of a dense square matrix."""
    N = A.shape[0]
    normA = np.linalg.norm(A, 1)
    if normA == 0:
        return np.zeros(N, dtype=complex), np.zeros(N), 0.0
    try:
        if np.array_equal(A, A.conj().T):
            w, vecs = sla.eigh(A, check_finite=False)
            w = w.astype(complex)
            R = A @ vecs - vecs * w if N < 64 else None
            if R is None:
                lower, upper = _bandwidth(A)
                if lower + upper + 1 <= 16:
                    ab = _to_banded(A, lower, upper)
                    R = _banded_matmul(ab, lower, upper, vecs) - vecs * w
                else:
                    R = A @ vecs - vecs * w
            res = np.linalg.norm(R, axis=0) / (normA * np.linalg.norm(vecs, axis=0))
            return w, res, normA
        lower, upper = _bandwidth(A)
        if N < 64 or lower + upper + 1 > 16 or not want_residuals:
            if not want_residuals:
                return sla.eigvals(A, check_finite=False), np.zeros(N), normA
            w, vecs = sla.eig(A, check_finite=False)
            R = A @ vecs - vecs * w
            res = np.linalg.norm(R, axis=0) / (normA * np.linalg.norm(vecs, axis=0))
            return w, res, normA
        w = sla.eigvals(A, check_finite=False)
    except sla.LinAlgError as exc:
        m = re.search(r"(\d+)", str(exc))
        raise NoConvergence(f"eigensolver failed: {exc}", index=int(m.group(1)) if m else None)
    ab = _to_banded(A, lower, upper)
    k = np.arange(N)
    start = (np.cos(0.7 * k) + 1j * np.sin(1.3 * k) + 1.5) / math.sqrt(N)
    vecs = np.empty((N, N), dtype=complex)
    for idx, lam in enumerate(w):
        vecs[:, idx] = _inverse_iteration(ab, lower, upper, lam, start, normA)
    R = _banded_matmul(ab, lower, upper, vecs) - vecs * w
    res = np.linalg.norm(R, axis=0) / normA
    return w, res, normA


def _cluster(w, res, radius):
    n = w.size
    if n == 0:
        return []
    pts = np.column_stack([w.real, w.imag])
    pairs = cKDTree(pts).query_pairs(r=radius, output_type="ndarray") if radius > 0 else None
    if pairs is None or len(pairs) == 0:
        labels = np.arange(n)
    else:
        g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
        _, labels = connected_components(g, directed=False)
    out = []
    for lab in np.unique(labels):
        idx = np.flatnonzero(labels == lab)
        out.append(EigenPair(complex(w[idx].mean()), float(res[idx].max()), int(idx.size)))
    out.sort(key=lambda e: (e.value.real, e.value.imag))
    return out


def eigenvalues(H, *, cluster_rel: float = 1e-6, tol_eig: float = 1e-8) -> list:
    """All eigenvalues of ``H`` (a :class:`DilatedHamiltonian` or a square array).

    Eigenvalues closer than ``cluster_rel * ||A||_1`` are merged into one
    :class:`EigenPair` whose multiplicity is the cluster size; the residual
    is ``||A v - lam v|| / (||A|| ||v||)`` of the worst member.
    """
    A = H.matrix if isinstance(H, DilatedHamiltonian) else np.asarray(H, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    w, res, normA = _raw_eig(A)
    bad = np.flatnonzero(res > tol_eig)
    if bad.size:
        raise NoConvergence(
            f"eigenpair {bad[0]} has residual {res[bad[0]]:.3g} > tol_eig = {tol_eig:.3g}",
            index=int(bad[0]),
        )
    return _cluster(w, res, cluster_rel * normA)


def rotate_spectrum(eigs, phi):
    """Multiply every eigenvalue by ``e^{2 i phi}`` (eigenvalues of H -> H~)."""
    f = cmath.exp(2j * as_phi(phi))
    out = []
    for e in eigs:
        if isinstance(e, EigenPair):
            out.append(EigenPair(e.value * f, e.residual, e.multiplicity))
        else:
            out.append(complex(e) * f)
    return out


def ray_distance(z: complex, phi: float) -> float:
    """Distance from ``z`` to the rotated half-line ``e^{-2 i phi} [0, inf)``."""
    d = cmath.exp(-2j * phi)
    t = max((z * d.conjugate()).real, 0.0)
    return abs(z - t * d)


def spectrum_at(V, grid, phi, *, scheme="FD2", tol=Tolerances()):
    return eigenvalues(
        assemble(grid, V, phi, "full", scheme), cluster_rel=tol.cluster_rel, tol_eig=tol.tol_eig
    )


def _spectra(V, grid, angles, scheme, tol, threads):
    angles = list(dict.fromkeys(float(a) for a in angles))
    workers = max(1, min(threads or 1, len(angles)))
    if workers == 1:
        results = [spectrum_at(V, grid, a, scheme=scheme, tol=tol) for a in angles]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda a: spectrum_at(V, grid, a, scheme=scheme, tol=tol), angles))
    return dict(zip(angles, results))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class SpectrumClassification:
    """Eigenvalues of ``H(i phi)`` split into classes.

    ``isolated`` entries carry the value of the matching eigenvalue of the
    undilated ``H`` (the operator the estimates are about).  ``unresolved``
    holds off-ray eigenvalues that are neither isolated nor stationary
    resonances, typically truncation artefacts or resonances uncovered only
    between ``phi_probe`` and ``phi``.
    """

    phi: float
    phi_probe: float
    isolated: tuple = ()
    resonance: tuple = ()
    continuum: tuple = ()
    embedded_candidates: tuple = ()
    unresolved: tuple = ()
    ambiguous: tuple = ()
    potential_is_real: bool = False
    tolerances: Tolerances = field(default_factory=Tolerances)

    CLASSES = ("isolated", "resonance", "continuum", "embedded", "unresolved")

    def members(self, cls: str) -> tuple:
        return {
            "isolated": self.isolated,
            "resonance": self.resonance,
            "continuum": self.continuum,
            "embedded": self.embedded_candidates,
            "unresolved": self.unresolved,
        }[cls]

    def rows(self):
        """Flat records ``(phi, lambda_re, lambda_im, class, multiplicity, residual)``."""
        out = []
        for cls in self.CLASSES:
            for e in self.members(cls):
                out.append((self.phi, e.value.real, e.value.imag, cls, e.multiplicity, e.residual))
        out.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
        return out

    def continuum_fraction(self) -> float:
        n = sum(e.multiplicity for c in self.CLASSES for e in self.members(c))
        return sum(e.multiplicity for e in self.continuum) / n if n else 1.0

    def to_dict(self) -> dict:
        def pack(pairs):
            return [
                {"re": e.value.real, "im": e.value.imag, "multiplicity": e.multiplicity,
                 "residual": e.residual}
                for e in pairs
            ]

        return {
            "phi": self.phi,
            "phi_probe": self.phi_probe,
            "potential_is_real": self.potential_is_real,
            "tolerances": asdict(self.tolerances),
            "counts": {c: sum(e.multiplicity for e in self.members(c)) for c in self.CLASSES},
            **{c: pack(self.members(c)) for c in self.CLASSES if c != "continuum"},
            "ambiguous": [[z.real, z.imag] for z in self.ambiguous],
        }


def _nearest(values: np.ndarray, z: complex):
    if values.size == 0:
        return None, math.inf, math.inf
    d = np.abs(values - z)
    if d.size == 1:
        return 0, float(d[0]), math.inf
    two = np.argpartition(d, 1)[:2]
    two = two[np.argsort(d[two])]
    return int(two[0]), float(d[two[0]]), float(d[two[1]])


def classify(
    V: Potential,
    grid: Grid,
    phi: float,
    phi_probe: float,
    *,
    scheme: str = "FD2",
    tol: Tolerances = Tolerances(),
    threads: Optional[int] = None,
) -> SpectrumClassification:
    """Classify the spectrum of ``H(i phi)`` using solves at ``0``, ``phi_probe`` and ``phi``.

    * continuum: within ``tol_ray`` of ``e^{-2 i phi}[0, inf)``;
    * isolated: matched within ``tol_match`` at ``phi_probe`` and at ``0``,
      off the respective rays (dilation-independent discrete spectrum);
    * resonance: matched at ``phi_probe`` but absent from ``H``, inside
      ``-2 phi < arg z < 0``;
    * embedded candidate (real ``V`` only): positive real eigenvalue.
    """
    phi, phi_probe = float(phi), float(phi_probe)
    if not 0 < phi_probe < phi:
        raise AngleOrder(f"need 0 < phi_probe < phi, got phi_probe={phi_probe}, phi={phi}")
    V.check_angle(phi)
    spectra = _spectra(V, grid, [0.0, phi_probe, phi], scheme, tol, threads)
    return classify_spectra(spectra[0.0], spectra[phi_probe], spectra[phi], phi, phi_probe,
                            V.is_real, tol)


def classify_spectra(spec0, spec_probe, spec_phi, phi, phi_probe, is_real, tol=Tolerances()):
    """Classification core working on precomputed cluster lists."""
    v0 = np.array([e.value for e in spec0])
    vp = np.array([e.value for e in spec_probe])
    res_sector = resonance_sector(phi)
    buckets = {c: [] for c in SpectrumClassification.CLASSES}
    ambiguous = []
    for e in spec_phi:
        z = e.value
        if ray_distance(z, phi) <= tol.tol_ray(z):
            buckets["continuum"].append(e)
            continue
        if is_real and z.real > 0 and abs(z.imag) <= tol.tol_match:
            buckets["embedded"].append(e)
            continue
        ip, dp, dp2 = _nearest(vp, z)
        if ip is None or dp > tol.tol_match or ray_distance(vp[ip], phi_probe) <= tol.tol_ray(z):
            buckets["unresolved"].append(e)
            continue
        if dp2 - dp < tol.tol_match:
            ambiguous.append(z)
        i0, d0, d02 = _nearest(v0, z)
        if i0 is not None and d0 <= tol.tol_match and ray_distance(v0[i0], 0.0) > tol.tol_ray(z):
            if d02 - d0 < tol.tol_match:
                ambiguous.append(z)
            buckets["isolated"].append(spec0[i0])
        elif res_sector.__contains__(z):
            buckets["resonance"].append(e)
        else:
            buckets["unresolved"].append(e)
    return SpectrumClassification(
        phi=phi,
        phi_probe=phi_probe,
        isolated=tuple(buckets["isolated"]),
        resonance=tuple(buckets["resonance"]),
        continuum=tuple(buckets["continuum"]),
        embedded_candidates=tuple(buckets["embedded"]),
        unresolved=tuple(buckets["unresolved"]),
        ambiguous=tuple(ambiguous),
        potential_is_real=bool(is_real),
        tolerances=tol,
    )


# ---------------------------------------------------------------------------
# trajectories


@dataclass
class Path:
    """One eigenvalue followed across dilation angles."""

    phis: list
    values: list
    multiplicities: list
    ambiguous: bool = False

    @property
    def displacements(self) -> list:
        return [abs(b - a) for a, b in zip(self.values[:-1], self.values[1:])]

    @property
    def total_displacement(self) -> float:
        return float(sum(self.displacements))

    @property
    def max_excursion(self) -> float:
        """Largest distance from the starting value."""
        return max((abs(v - self.values[0]) for v in self.values), default=0.0)

    def is_stationary(self, tol: float) -> bool:
        return not self.ambiguous and self.max_excursion <= tol


def _match_step(prev_vals, new_vals, tol_match):
    """Greedy minimal-displacement matching; returns (pairs, ambiguous_sources)."""
    if prev_vals.size == 0 or new_vals.size == 0:
        return [], set()
    D = np.abs(prev_vals[:, None] - new_vals[None, :])
    if D.shape[1] >= 2:
        two = np.partition(D, 1, axis=1)[:, :2]
        ambiguous = set(np.flatnonzero(two[:, 1] - two[:, 0] < tol_match).tolist())
    else:
        ambiguous = set()
    order = np.argsort(D, axis=None, kind="stable")
    used_s = np.zeros(D.shape[0], bool)
    used_t = np.zeros(D.shape[1], bool)
    pairs = []
    remaining = min(D.shape)
    for flat in order:
        s, t = divmod(int(flat), D.shape[1])
        if used_s[s] or used_t[t]:
            continue
        used_s[s] = used_t[t] = True
        pairs.append((s, t))
        remaining -= 1
        if remaining == 0:
            break
    return pairs, ambiguous


def trajectory(
    V: Potential,
    grid: Grid,
    phi_grid: Sequence[float],
    *,
    scheme: str = "FD2",
    tol: Tolerances = Tolerances(),
    threads: Optional[int] = None,
    spectra: Optional[dict] = None,
) -> list:
    """Follow every eigenvalue of ``H(i phi)`` along an increasing ``phi_grid``.

    Paths whose next match is ambiguous (two candidates with distances within
    ``tol_match`` of each other) are closed and flagged; the candidate starts
    a fresh path instead of being guessed.
    """
    phis = [float(p) for p in phi_grid]
    if any(b <= a for a, b in zip(phis[:-1], phis[1:])):
        raise ValueError("phi_grid must be strictly increasing")
    for p in phis:
        V.check_angle(p)
    if spectra is None:
        spectra = _spectra(V, grid, phis, scheme, tol, threads)
    first = spectra[phis[0]]
    open_paths = [Path([phis[0]], [e.value], [e.multiplicity]) for e in first]
    closed = []
    for phi in phis[1:]:
        new = spectra[phi]
        prev_vals = np.array([p.values[-1] for p in open_paths])
        new_vals = np.array([e.value for e in new])
        pairs, amb = _match_step(prev_vals, new_vals, tol.tol_match)
        matched_t = set()
        next_open = []
        for s, t in pairs:
            path = open_paths[s]
            if s in amb:
                path.ambiguous = True
                continue
            path.phis.append(phi)
            path.values.append(new[t].value)
            path.multiplicities.append(new[t].multiplicity)
            next_open.append(path)
            matched_t.add(t)
        matched_s = {s for s, t in pairs if s not in amb}
        closed.extend(p for i, p in enumerate(open_paths) if i not in matched_s)
        for t, e in enumerate(new):
            if t not in matched_t:
                next_open.append(Path([phi], [e.value], [e.multiplicity]))
        open_paths = next_open
    paths = closed + open_paths
    paths.sort(key=lambda p: (p.phis[0], p.values[0].real, p.values[0].imag))
    return paths


def box_convergence(V, grid, phi, values, *, tol_box=1e-4, scheme="FD2", tol=Tolerances()):
    """Re-solve on the doubled box (same spacing) and report the largest shift of ``values``.

    Returns ``(converged, max_shift)``.
    """
    big = spectrum_at(V, grid.doubled_box(), phi, scheme=scheme, tol=tol)
    bv = np.array([e.value for e in big])
    shift = max((float(np.min(np.abs(bv - complex(z)))) for z in values), default=0.0)
    return shift <= tol_box, shift
