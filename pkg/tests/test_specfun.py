"""Bessel and gamma building blocks: known values, identities, branches."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyheat.specfun import (
    _large_j,
    _series_regularized,
    _z_split,
    bessel_j,
    gamma,
    regularized_j,
)

# classical reference values (Abramowitz & Stegun tables)
J_TABLE = [
    (0.0, 1.0, 0.7651976865579666),
    (0.0, 10.0, -0.2459357644513483),
    (1.0, 1.0, 0.4400505857449335),
    (1.0, 5.0, -0.3275791375914652),
    (2.0, 2.0, 0.3528340286156377),
]


def test_gamma_matches_math():
    for x in (0.5, 1.0, 1.5, 2.0, 4.25, 10.0):
        assert gamma(x) == math.gamma(x)


def test_gamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        gamma(0.0)
    with pytest.raises(ValueError):
        gamma(-1.5)


@pytest.mark.parametrize("nu,z,ref", J_TABLE)
def test_bessel_known_values(nu, z, ref):
    assert bessel_j(nu, z) == pytest.approx(ref, rel=1e-12)


def test_bessel_at_origin():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(1.0, 0.0) == 0.0
    assert bessel_j(0.5, 0.0) == 0.0


def test_regularized_at_origin():
    # g_nu(0) = 1 / (2^nu Gamma(nu + 1))
    for nu in (-0.5, 0.0, 0.5, 1.0, 2.5):
        want = 1.0 / (2.0**nu * math.gamma(nu + 1.0))
        assert regularized_j(nu, 0.0) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("nu", [-0.5, 0.5, 1.5])
def test_half_integer_closed_forms(nu):
    # J_{-1/2}, J_{1/2}, J_{3/2} have elementary closed forms
    for z in (0.3, 1.7, 8.0, 15.0, 40.0):
        fac = math.sqrt(2.0 / (math.pi * z))
        if nu == -0.5:
            want = fac * math.cos(z)
        elif nu == 0.5:
            want = fac * math.sin(z)
        else:
            want = fac * (math.sin(z) / z - math.cos(z))
        assert bessel_j(nu, z) == pytest.approx(want, abs=1e-13, rel=1e-12)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.0, 3.5, 6.0])
def test_branch_overlap(nu):
    # ascending series and large-z evaluation must agree near the switch
    zs = _z_split(nu)
    z = np.linspace(max(zs - 3.0, 1.0), zs + 3.0, 25)
    a = _series_regularized(nu, z) * z**nu
    b = _large_j(nu, z)
    assert np.max(np.abs(a - b)) < 1e-9


def test_j0_first_root():
    # bracket and bisect the first positive zero of J_0
    lo, hi = 2.0, 3.0
    assert bessel_j(0.0, lo) > 0 > bessel_j(0.0, hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bessel_j(0.0, mid) > 0:
            lo = mid
        else:
            hi = mid
    assert 0.5 * (lo + hi) == pytest.approx(2.404825557695773, abs=1e-12)


def test_regularized_derivative_identity():
    # d/dz [z^-nu J_nu(z)] = -z^-nu J_{nu+1}(z)
    h = 1e-5
    for nu in (0.0, 0.5, 1.0, 2.0):
        for z in (0.7, 3.0, 14.0):
            fd = (regularized_j(nu, z + h) - regularized_j(nu, z - h)) / (2 * h)
            want = -(z**-nu) * bessel_j(nu + 1.0, z)
            assert fd == pytest.approx(want, rel=5e-9, abs=1e-12)


def test_array_matches_scalar():
    z = np.linspace(0.0, 30.0, 101)
    for nu in (0.0, 1.5, 4.0):
        arr = regularized_j(nu, z)
        scl = np.array([regularized_j(nu, float(x)) for x in z])
        assert np.array_equal(arr, scl)


def test_domain_errors():
    with pytest.raises(ValueError):
        bessel_j(0.0, -1.0)
    with pytest.raises(ValueError):
        bessel_j(0.3, 1.0)
    with pytest.raises(ValueError):
        bessel_j(-1.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(
    nu=st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0]),
    z=st.floats(min_value=0.5, max_value=60.0),
)
def test_three_term_recurrence(nu, z):
    # J_{nu-1}(z) + J_{nu+1}(z) = (2 nu / z) J_nu(z)
    lhs = bessel_j(nu - 1.0, z) + bessel_j(nu + 1.0, z)
    rhs = 2.0 * nu / z * bessel_j(nu, z)
    scale = max(abs(lhs), abs(rhs), 0.1)
    assert abs(lhs - rhs) < 1e-10 * scale
