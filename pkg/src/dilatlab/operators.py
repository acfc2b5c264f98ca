"""Dense finite-difference matrices for the dilated Hamiltonians.

On the box ``[-L, L]`` with Dirichlet walls,

    H~(i phi) = -Laplacian + e^{2 i phi} V_{i phi}
    H(i phi)  = e^{-2 i phi} H~(i phi)

Both forms coincide at ``phi = 0``.
"""

from __future__ import annotations

import cmath
import struct
from dataclasses import dataclass
from typing import Any

import numpy as np

from .potentials import ComplexAngle, Potential, as_phi

__all__ = [
    "Grid",
    "DilatedHamiltonian",
    "laplacian_matrix",
    "assemble",
    "dump_matrix",
    "load_matrix",
]

SCHEMES = ("FD2", "FD4")
FORMS = ("full", "tilde")


@dataclass(frozen=True)
class Grid:
    """``N`` interior points of ``[-L, L]``, spacing ``h = 2L/(N+1)``."""

    L: float
    N: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("grid.L must be positive")
        if int(self.N) != self.N or self.N < 3:
            raise ValueError("grid.N must be an integer >= 3")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.N + 1)

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.h * np.arange(1, self.N + 1)

    def doubled_box(self) -> "Grid":
        """Same spacing on ``[-2L, 2L]``."""
        return Grid(2 * self.L, 2 * self.N + 1)


def laplacian_matrix(grid: Grid, scheme: str = "FD2") -> np.ndarray:
    """``-d^2/dx^2`` with Dirichlet walls as a dense real matrix.

    FD2 is the 3-point stencil.  FD4 is the 5-point fourth-order stencil; the
    first and last rows use the one-sided closure
    ``u''(x_1) ~ (10 u_0 - 15 u_1 - 4 u_2 + 14 u_3 - 6 u_4 + u_5) / (12 h^2)``
    with ``u_0 = 0``, so the FD4 matrix is not symmetric.
    """
    N, h2 = grid.N, grid.h**2
    if scheme == "FD2":
        A = 2.0 * np.eye(N) - np.eye(N, k=1) - np.eye(N, k=-1)
        return A / h2
    if scheme == "FD4":
        if N < 6:
            raise ValueError("FD4 needs N >= 6")
        A = (
            30.0 * np.eye(N)
            - 16.0 * (np.eye(N, k=1) + np.eye(N, k=-1))
            + (np.eye(N, k=2) + np.eye(N, k=-2))
        )
        closure = np.array([15.0, 4.0, -14.0, 6.0, -1.0])
        A[0, :] = 0.0
        A[0, :5] = closure
        A[-1, :] = 0.0
        A[-1, -5:] = closure[::-1]
        return A / (12.0 * h2)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


@dataclass(frozen=True, eq=False)
class DilatedHamiltonian:
    """Immutable dense discretisation of ``H(theta)`` or ``H~(theta)``."""

    theta: ComplexAngle
    form: str
    matrix: np.ndarray
    grid: Grid
    scheme: str
    potential: Any = None

    @property
    def phi(self) -> float:
        return self.theta.phi

    @property
    def N(self) -> int:
        return self.grid.N


def assemble(
    grid: Grid, V: Potential, phi=0.0, form: str = "full", scheme: str = "FD2"
) -> DilatedHamiltonian:
    """Assemble ``H(i phi)`` (``form='full'``) or ``H~(i phi)`` (``form='tilde'``)."""
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}; expected one of {FORMS}")
    phi = as_phi(phi)
    v = V.values(phi, grid.x)
    A = laplacian_matrix(grid, scheme).astype(complex)
    A[np.diag_indices(grid.N)] += cmath.exp(2j * phi) * v
    if form == "full":
        A *= cmath.exp(-2j * phi)
    A.setflags(write=False)
    return DilatedHamiltonian(ComplexAngle(phi), form, A, grid, scheme, V)


# ---------------------------------------------------------------------------
# binary layout:
#   8s   magic b"DLHMAT01"
#   <Q   N
#   <d   L
#   <d   phi
#   <B   form   (0 = full, 1 = tilde)
#   <B   scheme (2 = FD2, 4 = FD4)
#   6x   padding
#   N*N  little-endian complex128, row-major (re, im pairs)

_MAGIC = b"DLHMAT01"
_HEADER = struct.Struct("<8sQddBB6x")


def dump_matrix(H: DilatedHamiltonian, path) -> None:
    header = _HEADER.pack(
        _MAGIC, H.grid.N, H.grid.L, H.phi, FORMS.index(H.form), int(H.scheme[2])
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(H.matrix, dtype="<c16").tobytes())


def load_matrix(path) -> DilatedHamiltonian:
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, N, L, phi, form, scheme = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise ValueError(f"{path}: not a dilated-Hamiltonian dump")
    data = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
    if data.size != N * N:
        raise ValueError(f"{path}: expected {N * N} entries, found {data.size}")
    A = data.reshape(N, N).astype(complex)
    A.setflags(write=False)
    return DilatedHamiltonian(ComplexAngle(phi), FORMS[form], A, Grid(L, N), f"FD{scheme}")
