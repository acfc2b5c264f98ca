import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dilatlab.errors import KappaDomain, UnsupportedVariant
from dilatlab.regions import (
    arg_interval,
    complement,
    contains,
    left_half_closed,
    lower_half,
    negative_reals,
    nonnegative_reals,
    parse_region,
    quadrant,
    resonance_sector,
    right_half_open,
    rotate_region,
    sector_c,
    sector_u,
    union,
    upper_half,
    upper_imaginary_axis,
    whole_plane,
)

PI = math.pi


def test_membership_examples():
    assert contains(sector_c(-1, 1.0), -1 + 0.5j)
    assert contains(sector_u(1, 1.0), cmath.exp(3j * PI / 4))
    assert contains(resonance_sector(PI / 6), cmath.exp(-1j * PI / 8))
    assert not contains(resonance_sector(PI / 6), cmath.exp(-1j * PI / 2))


def test_sector_c_definitions():
    assert 2 + 1j in sector_c(1, 1.0)
    assert 2 + 3j not in sector_c(1, 1.0)
    assert -2 + 1j in sector_c(-1, 1.0)
    assert 2 + 1j not in sector_c(-1, 1.0)


def test_sector_u_mirrored():
    z = cmath.exp(3j * PI / 4)
    assert z.conjugate() in sector_u(-1, 1.0)
    assert z not in sector_u(-1, 1.0)


def test_zero_is_in_nonnegative_reals_only():
    for R in (sector_c(1, 1.0), sector_u(1, 1.0), quadrant(1), upper_half(), lower_half(),
              right_half_open(), resonance_sector(0.3), negative_reals()):
        assert 0 not in R
    assert 0 in nonnegative_reals()
    assert 0 in left_half_closed()


def test_axis_bands():
    assert 1e-13 + 2j in upper_imaginary_axis()
    assert 1e-6 + 2j not in upper_imaginary_axis()
    assert -3 + 1e-12j in negative_reals()


def test_kappa_domain():
    with pytest.raises(KappaDomain):
        sector_c(1, 0.0)
    with pytest.raises(KappaDomain):
        sector_u(-1, -1.0)


def test_rotation_examples():
    for kappa in (0.3, 1.0, 4.0):
        R = rotate_region(sector_u(1, kappa), PI / 4 - math.atan(kappa) / 2)
        assert (R.kind, R.sign, R.kappa) == ("sectorC", -1, kappa)
    assert rotate_region(quadrant(1), PI / 4) == quadrant(2)
    phi = 0.3
    R = rotate_region(resonance_sector(phi), -PI / 4)
    assert R.kind == "sectorU" and R.sign == -1
    assert R.kappa == pytest.approx(math.tan(phi), rel=1e-14)
    lo, hi = R.arg_interval()
    assert lo == pytest.approx(-2 * phi - PI / 2) and hi == pytest.approx(-PI / 2)


def test_rotation_rejects_axis_variants():
    with pytest.raises(UnsupportedVariant):
        rotate_region(upper_imaginary_axis(), 0.1)
    with pytest.raises(UnsupportedVariant):
        rotate_region(left_half_closed(), 0.1)


_ARG_REGIONS = st.one_of(
    st.builds(sector_c, st.sampled_from([1, -1]), st.floats(0.05, 20.0)),
    st.builds(sector_u, st.sampled_from([1, -1]), st.floats(0.05, 20.0)),
    st.builds(quadrant, st.integers(1, 4)),
    st.sampled_from([upper_half(), lower_half(), right_half_open()]),
    st.builds(resonance_sector, st.floats(0.01, 1.5)),
)


@settings(max_examples=200, deadline=None)
@given(R=_ARG_REGIONS, phi=st.floats(-3.0, 3.0))
def test_rotation_round_trip(R, phi):
    back = rotate_region(rotate_region(R, phi), -phi)
    a, b = R.arg_interval(), back.arg_interval()
    shift = (a[0] - b[0]) % (2 * PI)
    assert min(shift, 2 * PI - shift) < 1e-9
    assert (a[1] - a[0]) == pytest.approx(b[1] - b[0], abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(R=_ARG_REGIONS, phi=st.floats(-1.5, 1.5), r=st.floats(0.01, 100.0), t=st.floats(-PI, PI))
def test_rotation_maps_membership(R, phi, r, t):
    z = r * cmath.exp(1j * t)
    lo, hi = R.arg_interval()
    # stay away from the boundary rays where rounding decides
    for edge in (lo, hi):
        d = (t - edge) % (2 * PI)
        if min(d, 2 * PI - d) < 1e-6:
            return
    assert contains(R, z) == contains(rotate_region(R, phi), cmath.exp(2j * phi) * z)


@settings(max_examples=300, deadline=None)
@given(x=st.floats(-1e6, 1e6), y=st.floats(-1e6, 1e6))
def test_quadrants_disjoint_cover(x, y):
    z = complex(x, y)
    hits = [n for n in (1, 2, 3, 4) if z in quadrant(n)]
    assert len(hits) <= 1
    on_axis = x == 0 or y == 0
    if z != 0:
        assert on_axis or len(hits) == 1


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-1e3, 1e3).filter(lambda v: abs(v) > 1e-3), y=st.floats(-1e3, 1e3))
def test_sector_c_limit_is_right_half(x, y):
    z = complex(x, y)
    assert contains(sector_c(1, 1e8), z) == (x > 0 and abs(y) < 1e8 * x)
    if abs(y) < 1e5:
        assert contains(sector_c(1, 1e8), z) == (x > 0)


def test_union_and_complement():
    R = union(upper_half(), negative_reals())
    assert 1j in R and -1 in R and 1 not in R and -1j not in R
    C = complement(sector_c(1, 1.0))
    assert 1 + 2j in C and 1 + 0.5j not in C
    assert 5 in whole_plane()


def test_arg_interval_wraps():
    R = arg_interval(3.0, 3.5)  # straddles the negative real axis
    assert cmath.exp(3.2j) in R
    assert cmath.exp(3.4j) in R
    assert cmath.exp(2.9j) not in R


def test_parse_region_tags():
    R = parse_region("sectorU+:kappa=1.0")
    assert (R.kind, R.sign, R.kappa) == ("sectorU", 1, 1.0)
    assert parse_region("resonance:phi=0.5236").phi == 0.5236
    assert parse_region("sectorC-:kappa=2").sign == -1
    assert parse_region("II") == quadrant(2)
    for R in (sector_c(1, 2.5), sector_u(-1, 0.5), quadrant(3), resonance_sector(0.25)):
        assert parse_region(R.tag()) == R
    with pytest.raises(ValueError):
        parse_region("hexagon")


def test_mask():
    m = quadrant(1).mask([1 + 1j, -1 + 1j, 1 - 1j])
    assert m.tolist() == [True, False, False]
