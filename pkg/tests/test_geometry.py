"""Domain grids: measures, normals, patches, operator expansions."""

import math

import numpy as np
import pytest

from polyheat.geometry import (
    CylinderSpec,
    DirichletSystem,
    Disk,
    Interval,
    Rectangle,
    apply_B,
    apply_C_kernel,
)
from polyheat.kernel import KernelParams, TranslateField, phi_derivative


def test_interval_basics():
    dom = Interval(0.0, 1.0)
    assert dom.diameter() == 1.0
    assert dom.volume() == 1.0
    assert dom.boundary_measure() == 2.0
    assert dom.boundary_measure("left") == 1.0
    assert dom.complement("left") == ("right",)
    assert list(dom.contains([0.5, -0.1, 1.0])) == [True, False, False]
    with pytest.raises(ValueError):
        Interval(1.0, 1.0)


def test_interval_boundary_grid():
    g = Interval(2.0, 5.0).boundary_grid()
    assert g.points.tolist() == [[2.0], [5.0]]
    assert g.normals.tolist() == [[-1.0], [1.0]]
    assert g.weights.tolist() == [1.0, 1.0]
    gl = Interval(2.0, 5.0).boundary_grid(patch="right")
    assert gl.points.tolist() == [[5.0]]


def test_interval_volume_grid_integrates():
    g = Interval(0.0, 2.0).volume_grid(h=0.1, q=6)
    assert g.weights.sum() == pytest.approx(2.0, rel=1e-14)
    assert np.dot(g.weights, g.points[:, 0] ** 4) == pytest.approx(32.0 / 5, rel=1e-12)


def test_interval_exterior_sources():
    dom = Interval(0.0, 1.0)
    src = dom.exterior_sources(8, distance=0.5)
    assert src.shape == (8, 1)
    d = np.minimum(np.abs(src[:, 0] - 0.0), np.abs(src[:, 0] - 1.0))
    assert np.all(d >= 0.5 - 1e-12)
    assert np.any(src[:, 0] < 0) and np.any(src[:, 0] > 1)
    assert len(np.unique(src[:, 0])) == 8


def test_disk_measures():
    dom = Disk([1.0, -2.0], 1.5)
    assert dom.diameter() == 3.0
    assert dom.volume() == pytest.approx(math.pi * 2.25, rel=1e-15)
    assert dom.boundary_measure() == pytest.approx(3.0 * math.pi, rel=1e-15)
    arc = (0.0, math.pi / 2)
    assert dom.boundary_measure(arc) == pytest.approx(1.5 * math.pi / 2, rel=1e-15)
    assert dom.complement(arc) == (math.pi / 2, 2 * math.pi)


def test_disk_boundary_grid():
    dom = Disk([0.0, 0.0], 2.0)
    g = dom.boundary_grid(h=0.1, q=8)
    assert g.weights.sum() == pytest.approx(4.0 * math.pi, rel=1e-13)
    assert np.allclose(np.linalg.norm(g.normals, axis=1), 1.0, atol=1e-14)
    # outward: normal parallel to radius vector
    assert np.allclose(g.points, 2.0 * g.normals, atol=1e-13)
    # smooth surface integral: int_{|x|=R} x^2 ds = pi R^3
    got = np.dot(g.weights, g.points[:, 0] ** 2)
    assert got == pytest.approx(math.pi * 8.0, rel=1e-12)


def test_disk_volume_grid():
    dom = Disk([0.5, 0.5], 1.0)
    g = dom.volume_grid(h=0.1, q=6)
    assert g.weights.sum() == pytest.approx(math.pi, rel=1e-12)
    # int_D (x - cx)^2 dA = pi R^4 / 4
    got = np.dot(g.weights, (g.points[:, 0] - 0.5) ** 2)
    assert got == pytest.approx(math.pi / 4, rel=1e-10)
    assert np.all(dom.contains(g.points))


def test_rectangle_measures():
    dom = Rectangle([0.0, 0.0], [2.0, 1.0])
    assert dom.volume() == 2.0
    assert dom.boundary_measure() == 6.0
    assert dom.boundary_measure(("left", "right")) == 2.0
    assert dom.diameter() == pytest.approx(math.sqrt(5.0), rel=1e-15)
    assert set(dom.complement(("top",))) == {"bottom", "right", "left"}


def test_rectangle_boundary_grid():
    dom = Rectangle([0.0, 0.0], [2.0, 1.0])
    g = dom.boundary_grid(h=0.05, q=6)
    assert g.weights.sum() == pytest.approx(6.0, rel=1e-13)
    assert np.allclose(np.linalg.norm(g.normals, axis=1), 1.0)
    # outward check against the center
    rel = g.points - np.array([1.0, 0.5])
    assert np.all(np.sum(rel * g.normals, axis=1) > 0)
    top = dom.boundary_grid(h=0.1, patch="top")
    assert np.allclose(top.points[:, 1], 1.0)
    assert np.allclose(top.normals, [0.0, 1.0])


def test_rectangle_volume_grid():
    dom = Rectangle([-1.0, 0.0], [1.0, 3.0])
    g = dom.volume_grid(h=0.2, q=5)
    assert g.weights.sum() == pytest.approx(6.0, rel=1e-13)
    got = np.dot(g.weights, g.points[:, 0] ** 2 * g.points[:, 1])
    assert got == pytest.approx(2.0 / 3 * 4.5, rel=1e-12)


def test_refined_grid_keeps_measure():
    dom = Disk([0.0, 0.0], 1.0)
    target = np.array([0.999, 0.0])  # just inside, near theta = 0
    g = dom.boundary_grid(h=0.2, q=10, refine_near=target, min_width=1e-4)
    assert g.weights.sum() == pytest.approx(2.0 * math.pi, rel=1e-12)
    # panels near the closest boundary point must be much finer
    d = np.linalg.norm(g.points - np.array([1.0, 0.0]), axis=1)
    assert d.min() < 1e-3


def test_rectangle_exterior_sources():
    dom = Rectangle([0.0, 0.0], [1.0, 1.0])
    src = dom.exterior_sources(12, distance=0.7)
    assert src.shape == (12, 2)
    inside = dom.contains(src)
    assert not inside.any()
    # all sources at least `distance` from the closure
    dx = np.maximum(np.maximum(0.0 - src[:, 0], src[:, 0] - 1.0), 0.0)
    dy = np.maximum(np.maximum(0.0 - src[:, 1], src[:, 1] - 1.0), 0.0)
    assert np.all(np.hypot(dx, dy) >= 0.7 - 1e-12)


def test_cylinder_validation():
    CylinderSpec(Interval(0.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        CylinderSpec(Interval(0.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        CylinderSpec(object(), 1.0)


def test_dirichlet_system_labels():
    sysm = DirichletSystem(2)
    assert sysm.count == 4
    assert [sysm.label(i) for i in range(4)] == ["value", "normal", "lap", "normal-lap"]
    assert [sysm.order(i) for i in range(4)] == [0, 1, 2, 3]
    assert [sysm.adjoint_sign(i) for i in range(4)] == [1.0, -1.0, 1.0, -1.0]
    with pytest.raises(ValueError):
        sysm.label(4)


def test_apply_B_interval_field():
    # traces of a translated kernel on the interval boundary
    params = KernelParams(1, 2)
    fld = TranslateField(params, [3.0], dt0=0.1)
    sysm = DirichletSystem(2)
    g = Interval(0.0, 1.0).boundary_grid()
    t = 0.5
    v0 = apply_B(sysm, 0, fld, g.points, t, g.normals)
    assert v0 == pytest.approx([fld.value(g.points, t)[0], fld.value(g.points, t)[1]])
    v1 = apply_B(sysm, 1, fld, g.points, t, g.normals)
    d = [phi_derivative(params, [x - 3.0], t + 0.1, (1,)) for x in (0.0, 1.0)]
    assert v1 == pytest.approx([-d[0], d[1]], rel=1e-12)
    v2 = apply_B(sysm, 2, fld, g.points, t, g.normals)
    dd = [phi_derivative(params, [x - 3.0], t + 0.1, (2,)) for x in (0.0, 1.0)]
    assert v2 == pytest.approx(dd, rel=1e-12)
    v3 = apply_B(sysm, 3, fld, g.points, t, g.normals)
    d3 = [phi_derivative(params, [x - 3.0], t + 0.1, (3,)) for x in (0.0, 1.0)]
    assert v3 == pytest.approx([-d3[0], d3[1]], rel=1e-12)


def test_apply_B_disk_laplacian():
    # Lap of a quadratic: field u = x^2 + 2 y^2 has Lap u = 6 everywhere
    class Quad:
        def derivative(self, points, t, alpha):
            p = np.asarray(points, dtype=float)
            if alpha == (0, 0):
                return p[..., 0] ** 2 + 2 * p[..., 1] ** 2
            if alpha == (2, 0):
                return np.full(p.shape[:-1], 2.0)
            if alpha == (0, 2):
                return np.full(p.shape[:-1], 4.0)
            if alpha == (1, 0):
                return 2 * p[..., 0]
            if alpha == (0, 1):
                return 4 * p[..., 1]
            return np.zeros(p.shape[:-1])

    g = Disk([0.0, 0.0], 1.0).boundary_grid(h=0.5, q=4)
    sysm = DirichletSystem(2)
    lap = apply_B(sysm, 2, Quad(), g.points, 0.0, g.normals)
    assert np.allclose(lap, 6.0, atol=1e-13)
    dn = apply_B(sysm, 1, Quad(), g.points, 0.0, g.normals)
    want = 2 * g.points[:, 0] * g.normals[:, 0] + 4 * g.points[:, 1] * g.normals[:, 1]
    assert np.allclose(dn, want, atol=1e-13)


def test_apply_C_kernel_m1_normal_term():
    # for m=1, n=1 the adjoint normal entry is -nu (x-y) / (2(t-tau)) * K
    params = KernelParams(1, 1)
    x, y, t, tau, nu = 0.8, 0.0, 0.9, 0.4, -1.0
    z = np.array([[x - y]])
    u = np.array([t - tau])
    got = apply_C_kernel(params, 1, z, u, np.array([[nu]]))
    from polyheat.kernel import heat_closed_form
    want = -nu * (x - y) / (2 * (t - tau)) * heat_closed_form(1, x - y, t - tau)
    assert got[0] == pytest.approx(want, rel=1e-11)


def test_apply_C_kernel_value_entry_is_kernel():
    params = KernelParams(1, 2)
    z = np.array([[0.4], [1.0]])
    u = np.array([0.3, 0.3])
    got = apply_C_kernel(params, 0, z, u, np.array([[1.0], [1.0]]))
    from polyheat.kernel import phi
    assert got == pytest.approx([phi(params, [0.4], 0.3), phi(params, [1.0], 0.3)])
