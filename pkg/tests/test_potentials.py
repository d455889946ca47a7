"""Potential evaluators: interior reproduction, exterior annihilation,
boundary jump relations, causality, and independent quadrature oracles."""

import math

import numpy as np
import pytest

from polyheat.geometry import Disk, Interval, Rectangle
from polyheat.kernel import KernelParams, TranslateField, UnsupportedOrder, get_profile
from polyheat.potentials import (
    FieldSum,
    LayerPotential,
    PoissonPotential,
    VolumePotential,
    representation_terms,
    trace_callables,
    trace_jump,
)
from polyheat.quadrature import gauss_panels

UNIT = Interval(0.0, 1.0)


class PolyField:
    """u = x^2 t: smooth manufactured field with nonzero forcing."""

    def value(self, pts, t):
        return np.asarray(pts, dtype=float)[..., 0] ** 2 * t

    def derivative(self, pts, t, alpha, t_order: int = 0):
        x = np.asarray(pts, dtype=float)[..., 0]
        if t_order == 0:
            table = {(0,): x * x * t, (1,): 2 * x * t, (2,): np.full(x.shape, 2.0 * t)}
        else:
            table = {(0,): x * x, (1,): 2 * x, (2,): np.full(x.shape, 2.0)}
        return table.get(tuple(alpha), np.zeros(x.shape))


def _caloric_rep(params, dom, center, dt0=0.3):
    u = TranslateField(params, center, dt0=dt0)
    traces = trace_callables(params, dom, u)
    rep = representation_terms(params, dom, traces,
                               initial=lambda y: u.value(y, 0.0))
    return u, rep


def _layer_sum(params, dom, fld):
    tr = trace_callables(params, dom, fld)
    m = params.m
    sign = (-1.0) ** (m + 1)
    return tr, FieldSum(
        [LayerPotential(params, dom, 2 * m - 1 - j, g) for j, g in enumerate(tr)],
        [sign] * (2 * m))


@pytest.mark.parametrize("m,tol", [(1, 1e-10), (2, 1e-8)])
def test_green_reproduce_interval(m, tol):
    params = KernelParams(1, m)
    u, rep = _caloric_rep(params, UNIT, [2.5])
    sup = abs(u.value(np.array([[0.9]]), 0.7)[0])
    for (x, t) in [(0.2, 0.3), (0.5, 0.7), (0.8, 0.5)]:
        got = rep.value(np.array([[x]]), t)[0]
        want = u.value(np.array([[x]]), t)[0]
        assert abs(got - want) / sup < tol
    # exterior targets: the same sum reproduces zero
    for (x, t) in [(-0.5, 0.7), (1.7, 0.5)]:
        assert abs(rep.value(np.array([[x]]), t)[0]) < tol * sup


@pytest.mark.parametrize("m,tol", [(1, 1e-10), (2, 1e-7)])
def test_green_reproduce_disk(m, tol):
    params = KernelParams(2, m)
    dom = Disk([0.0, 0.0], 1.0)
    u, rep = _caloric_rep(params, dom, [2.5, 0.5])
    sup = abs(u.value(np.array([[0.5, 0.0]]), 0.7)[0])
    x, t = np.array([[0.3, 0.1]]), 0.4
    assert abs(rep.value(x, t)[0] - u.value(x, t)[0]) / sup < tol
    xe = np.array([[1.8, 0.3]])
    assert abs(rep.value(xe, 0.6)[0]) < tol * sup


def test_green_reproduce_rectangle():
    params = KernelParams(2, 1)
    dom = Rectangle([0.0, 0.0], [1.0, 1.0])
    u, rep = _caloric_rep(params, dom, [2.0, 1.5])
    sup = abs(u.value(np.array([[0.5, 0.2]]), 0.7)[0])
    x, t = np.array([[0.3, 0.4]]), 0.4
    assert abs(rep.value(x, t)[0] - u.value(x, t)[0]) / sup < 1e-10
    assert abs(rep.value(np.array([[1.9, 0.5]]), 0.6)[0]) < 1e-10 * sup


@pytest.mark.parametrize("m", [1, 2])
def test_green_with_forcing(m):
    # u = x^2 t has forcing x^2 - 2t for m=1 and x^2 for m=2
    params = KernelParams(1, m)
    u = PolyField()
    traces = trace_callables(params, UNIT, u)
    if m == 1:
        forcing = lambda y, tau: np.asarray(y)[:, 0] ** 2 - 2 * tau
    else:
        forcing = lambda y, tau: np.asarray(y)[:, 0] ** 2
    rep = representation_terms(params, UNIT, traces,
                               initial=lambda y: np.zeros(len(y)),
                               forcing=forcing)
    for (x, t) in [(0.3, 0.5), (0.7, 0.9)]:
        got = rep.value(np.array([[x]]), t)[0]
        assert got == pytest.approx(x * x * t, rel=1e-8)


@pytest.mark.parametrize("m,tol", [(1, 1e-4), (2, 1e-3)])
def test_jump_relations_interval(m, tol):
    params = KernelParams(1, m)
    fld = TranslateField(params, [2.5], dt0=0.3)
    tr, layers = _layer_sum(params, UNIT, fld)
    t = 0.6
    for y0, nu in [(np.array([0.0]), np.array([-1.0])),
                   (np.array([1.0]), np.array([1.0]))]:
        for i in range(2 * m):
            gap, _, ok = trace_jump(params, UNIT, layers, i, y0, nu, t)
            want = tr[i](y0[None, :], t)[0]
            assert ok
            assert abs(gap - want) / abs(want) < tol


def test_jump_relations_disk():
    params = KernelParams(2, 1)
    dom = Disk([0.0, 0.0], 1.0)
    fld = TranslateField(params, [2.5, 0.5], dt0=0.3)
    tr, layers = _layer_sum(params, dom, fld)
    t = 0.6
    for th in (0.0, 2.0):
        y0 = np.array([math.cos(th), math.sin(th)])
        for i in range(2):
            gap, _, ok = trace_jump(params, dom, layers, i, y0, y0, t)
            want = tr[i](y0[None, :], t)[0]
            assert ok
            assert abs(gap - want) / abs(want) < 1e-3


def test_causality_of_potentials():
    params = KernelParams(1, 1)
    pot = LayerPotential(params, UNIT, 0, lambda y, tau: np.ones(len(y)), t0=0.5)
    pts = np.array([[0.3]])
    assert pot.value(pts, 0.5)[0] == 0.0
    assert pot.value(pts, 0.2)[0] == 0.0
    assert pot.value(pts, 0.9)[0] != 0.0
    vol = VolumePotential(params, UNIT, lambda y, tau: np.ones(len(y)), t0=0.5)
    assert vol.value(pts, 0.4)[0] == 0.0
    poi = PoissonPotential(params, UNIT, lambda y: np.ones(len(y)), t0=0.5)
    assert poi.value(pts, 0.5)[0] == 0.0


def test_layer_linearity():
    params = KernelParams(1, 2)
    g1 = lambda y, tau: np.full(len(y), math.sin(3 * tau))
    g2 = lambda y, tau: np.full(len(y), 2 * math.sin(3 * tau))
    a = LayerPotential(params, UNIT, 2, g1).value(np.array([[0.4]]), 0.8)[0]
    b = LayerPotential(params, UNIT, 2, g2).value(np.array([[0.4]]), 0.8)[0]
    assert b == pytest.approx(2 * a, rel=1e-13)


def test_field_sum_coefficients():
    params = KernelParams(1, 1)
    f = TranslateField(params, [2.0], dt0=0.1)
    s = FieldSum([f, f], [1.0, -1.0])
    pts = np.array([[0.2], [0.8]])
    assert np.allclose(s.value(pts, 0.5), 0.0)
    s2 = FieldSum([f], [3.0])
    assert np.allclose(s2.value(pts, 0.5), 3.0 * f.value(pts, 0.5))


def test_trace_dt_matches_difference():
    params = KernelParams(1, 2)
    tr = trace_callables(params, UNIT, TranslateField(params, [2.5], dt0=0.3))
    y = np.array([[0.0]])
    t, h = 0.6, 1e-5
    for g in tr:
        fd = (g(y, t + h)[0] - g(y, t - h)[0]) / (2 * h)
        assert g.dt(y, t)[0] == pytest.approx(fd, rel=1e-7)


def test_volume_disk_against_radial_reference():
    # f = 1 on a disk, target at the center: the spatial integral reduces
    # to a radial profile integral, giving an independent reference
    params = KernelParams(2, 1)
    dom = Disk([0.0, 0.0], 1.0)
    t = 0.4
    got = VolumePotential(params, dom, lambda y, tau: np.ones(len(y)),
                          h=0.04).value(np.array([[0.0, 0.0]]), t)[0]
    rp = get_profile(2, 1)
    un, uw = gauss_panels(np.linspace(0.0, t, 33), 12)
    ref = 0.0
    for u, w in zip(un, uw):
        rn, rw = gauss_panels(np.linspace(0.0, 1.0, 65), 10)
        s = rn / math.sqrt(u) if u > 0 else None
        mass_u = 2 * math.pi * np.dot(rw, rn * rp.values_fast(s)) / u
        ref += w * mass_u
    assert got == pytest.approx(ref, rel=2e-3)


def test_poisson_against_direct_convolution():
    params = KernelParams(1, 1)
    u0 = lambda y: np.cos(3.0 * np.asarray(y)[:, 0])
    pot = PoissonPotential(params, UNIT, u0)
    from polyheat.kernel import phi_values
    for (x, t) in [(0.5, 0.02), (0.97, 0.005), (-0.3, 0.1)]:
        got = pot.value(np.array([[x]]), t)[0]
        nodes, wts = gauss_panels(np.linspace(0.0, 1.0, 4001), 6)
        ref = np.dot(wts, phi_values(params, x - nodes, t) * u0(nodes[:, None]))
        assert got == pytest.approx(ref, rel=1e-9, abs=1e-13)


def test_representation_trace_count_checked():
    params = KernelParams(1, 2)
    with pytest.raises(ValueError):
        representation_terms(params, UNIT, [lambda y, tau: np.zeros(len(y))])


def test_layer_rejects_time_derivative():
    params = KernelParams(1, 1)
    pot = LayerPotential(params, UNIT, 0, lambda y, tau: np.ones(len(y)))
    with pytest.raises(UnsupportedOrder):
        pot.derivative(np.array([[0.4]]), 0.5, (0,), t_order=1)
