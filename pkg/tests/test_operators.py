import cmath
import math

import numpy as np
import pytest

from dilatlab.errors import AngleOutOfStrip
from dilatlab.operators import Grid, assemble, dump_matrix, laplacian_matrix, load_matrix
from dilatlab.potentials import Gaussian, Sech2, Tabulated, zero_potential


def test_grid_spacing_and_points():
    g = Grid(2.0, 3)
    assert g.h == 1.0
    assert np.allclose(g.x, [-1.0, 0.0, 1.0])
    assert g.doubled_box().h == pytest.approx(g.h)
    with pytest.raises(ValueError):
        Grid(1.0, 2)
    with pytest.raises(ValueError):
        Grid(-1.0, 10)


def test_fd2_small_matrix():
    A = laplacian_matrix(Grid(2.0, 3), "FD2")
    assert np.array_equal(A, [[2, -1, 0], [-1, 2, -1], [0, -1, 2]])


@pytest.mark.parametrize("N,L", [(16, 1.0), (50, 3.0), (101, 20.0)])
def test_fd2_closed_form_spectrum(N, L):
    g = Grid(L, N)
    A = laplacian_matrix(g, "FD2")
    assert np.array_equal(A, A.T)
    k = np.arange(1, N + 1)
    want = 4 / g.h**2 * np.sin(k * np.pi / (2 * (N + 1))) ** 2
    assert np.allclose(np.linalg.eigvalsh(A), want, rtol=1e-12, atol=1e-12 * want.max())


def test_fd4_is_fourth_order():
    # lowest Dirichlet eigenvalue of -u'' on [-1, 1] is (pi/2)^2
    exact = (math.pi / 2) ** 2
    errs = []
    for N in (40, 80, 160):
        w = np.linalg.eigvals(laplacian_matrix(Grid(1.0, N), "FD4"))
        errs.append(abs(np.min(w.real) - exact))
    rates = [math.log2(a / b) for a, b in zip(errs[:-1], errs[1:])]
    assert all(r > 3.5 for r in rates)


def test_unknown_scheme():
    with pytest.raises(ValueError):
        laplacian_matrix(Grid(1.0, 10), "FD6")


def test_free_operator_is_rotated_laplacian():
    g = Grid(5.0, 40)
    phi = 0.37
    H = assemble(g, zero_potential(), phi, "full")
    assert np.array_equal(H.matrix, cmath.exp(-2j * phi) * laplacian_matrix(g).astype(complex))


def test_zero_angle_gaussian_real_symmetric():
    g = Grid(5.0, 40)
    H = assemble(g, Gaussian(c=1.0), 0.0)
    A = H.matrix
    assert np.all(A.imag == 0)
    assert np.array_equal(A, A.T)
    assert np.allclose(np.diag(A).real, 2 / g.h**2 + np.exp(-g.x**2), rtol=0, atol=1e-12)
    assert np.array_equal(assemble(g, Gaussian(c=1.0), 0.0, "tilde").matrix, A)


@pytest.mark.parametrize("V", [Gaussian(c=1.0, amplitude=-1.2), Sech2(amplitude=-2.0),
                               Gaussian(c=1 - 0.4j, amplitude=1j)])
def test_full_tilde_entrywise_identity(V):
    g = Grid(8.0, 60)
    phi = math.pi / 8
    full = assemble(g, V, phi, "full").matrix
    tilde = assemble(g, V, phi, "tilde").matrix
    assert np.max(np.abs(full - cmath.exp(-1j * math.pi / 4) * tilde)) <= 1e-14 * np.max(np.abs(full))


def test_matrix_is_immutable():
    H = assemble(Grid(2.0, 10), Gaussian(c=1.0), 0.1)
    with pytest.raises(ValueError):
        H.matrix[0, 0] = 1.0


def test_assemble_rejects_angle_outside_strip():
    with pytest.raises(AngleOutOfStrip):
        assemble(Grid(2.0, 10), Gaussian(c=1.0), 0.8)


def test_poschl_teller_fd2_second_order():
    x = np.linspace(-20, 20, 8001)
    T = Tabulated.from_function(lambda t: -2 / np.cosh(t) ** 2, x)
    errs = []
    for N in (250, 500, 1000):
        w = np.linalg.eigvalsh(assemble(Grid(20.0, N), T, 0.0).matrix)
        errs.append(abs(w[0] + 1))
    ratios = [a / b for a, b in zip(errs[:-1], errs[1:])]
    assert all(3.8 < r < 4.2 for r in ratios), ratios


def test_dump_roundtrip(tmp_path):
    H = assemble(Grid(3.0, 20), Gaussian(c=1 + 0.2j, amplitude=-1.0), 0.2, "tilde", "FD4")
    path = tmp_path / "h.bin"
    dump_matrix(H, path)
    raw = path.read_bytes()
    assert raw[:8] == b"DLHMAT01"
    assert len(raw) == 40 + 16 * 20 * 20
    H2 = load_matrix(path)
    assert np.array_equal(H2.matrix, H.matrix)
    assert (H2.grid, H2.phi, H2.form, H2.scheme) == (H.grid, H.phi, "tilde", "FD4")
