"""Composite quadrature, graded meshes, panel interpolation, extrapolation."""

import numpy as np
import pytest

from polyheat.quadrature import (
    PanelInterp,
    gauss_panels,
    graded_edges,
    richardson_extrapolate,
)


def test_gauss_panels_polynomial_exactness():
    # q-point Gauss is exact through degree 2q-1 on each panel
    nodes, wts = gauss_panels(np.array([0.0, 0.4, 1.0]), 4)
    for deg in range(8):
        got = np.dot(wts, nodes**deg)
        assert got == pytest.approx(1.0 / (deg + 1), rel=1e-14)


def test_gauss_panels_weight_sum():
    edges = np.array([-2.0, -0.5, 0.1, 3.0])
    nodes, wts = gauss_panels(edges, 7)
    assert wts.sum() == pytest.approx(5.0, rel=1e-14)
    assert np.all(np.diff(nodes) > 0)


def test_graded_edges_cluster_toward_endpoint():
    edges = graded_edges(0.0, 1.0, toward=0.0, resolve=0.25)
    assert edges[0] == 0.0 and edges[-1] == 1.0
    widths = np.diff(edges)
    assert np.all(widths > 0)
    # panels shrink toward the graded end
    assert widths[0] < widths[-1]
    assert widths[0] <= 2.0 ** -7


def test_graded_edges_toward_right():
    edges = graded_edges(1.0, 3.0, toward=3.0, resolve=0.5)
    widths = np.diff(edges)
    assert widths[-1] < widths[0]


def test_panel_interp_reproduces_smooth():
    edges = np.linspace(0.0, 2.0, 9)
    interp = PanelInterp(edges, 10)
    f = lambda x: np.sin(3.0 * x) * np.exp(-x)
    vals = f(interp.nodes)
    xs = np.linspace(0.0, 2.0, 333)
    assert np.max(np.abs(interp(vals, xs) - f(xs))) < 1e-9


def test_panel_interp_exact_at_nodes():
    edges = np.array([0.0, 1.0])
    interp = PanelInterp(edges, 6)
    vals = np.arange(6, dtype=float)
    assert np.allclose(interp(vals, interp.nodes), vals, rtol=0, atol=1e-12)


def test_richardson_extrapolate_h2():
    # f(h) = L + a h + b h^2, constant step ratio: both powers eliminated
    h = 0.5 ** np.arange(6)
    vals = 3.0 + 0.7 * h + 0.2 * h**2
    est, ok, _ = richardson_extrapolate(h, vals, order=2)
    assert ok
    assert est == pytest.approx(3.0, abs=1e-10)


def test_richardson_flags_nonconvergence():
    h = 0.5 ** np.arange(5)
    rng = np.random.default_rng(0)
    vals = 1.0 + rng.normal(0, 0.3, size=5)
    est, ok, _ = richardson_extrapolate(h, vals, order=1)
    assert not ok
