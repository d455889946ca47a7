"""Heat potentials of the polyharmonic heat operator on cylinders.

Potentials are time convolutions against the kernel or its boundary
derivatives.  All time integrals use the substitution u = t - tau =
sigma^(2m), which removes the fractional power of the kernel scale at
the evaluation time and lets graded Gauss-Legendre panels resolve the
near-singular region; spatial rules refine toward the point of the
domain or patch closest to the target.

The interior reproduction formula assembled by `representation_terms` is

    u(x, t) = P(u(., t0)) + G(f) + (-1)^(m+1) *
              sum_i V_i(B_{2m-1-i} u),        x in the domain,

with P the initial-slice potential, G the volume potential of the
forcing, and V_i the layer potential whose kernel carries the adjoint
boundary operator of index i.  For exterior targets the same sum
reproduces zero.  Approaching the boundary, the i-th trace of the layer
sum jumps by exactly the i-th density (trace_jump measures this).
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import apply_C_kernel
from .kernel import KernelParams, UnsupportedOrder, eval_translate
from .quadrature import gauss_panels, graded_edges

__all__ = [
    "FieldSum",
    "PoissonPotential",
    "VolumePotential",
    "LayerPotential",
    "representation_terms",
    "trace_callables",
    "trace_jump",
]

_QT = 12          # nodes per time panel
_QS = 12          # nodes per spatial panel
_NU = 16          # uniform-in-time subdivisions backing every sigma rule
_SIGMA_FLOOR = 1e-4


def _as_points(points, n):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and n == 1:
        pts = pts[:, None]
    if pts.ndim == 1:
        pts = pts[None, :]
    return pts


def _sigma_rule(m: int, span: float, dist: float):
    # graded toward sigma = 0, where the kernel varies fastest; extra
    # edges uniform in the original time variable keep density features
    # away from the singularity (delayed onsets, oscillating traces)
    # resolved as well
    smax = span ** (1.0 / (2 * m))
    resolve = max(dist / 6.0, _SIGMA_FLOOR * smax)
    edges = graded_edges(0.0, smax, toward=0.0, resolve=min(resolve, 0.25 * smax))
    uniform = smax * (np.arange(1, _NU) / _NU) ** (1.0 / (2 * m))
    edges = np.unique(np.concatenate([edges, uniform]))
    return gauss_panels(edges, _QT)


def _dist_to(domain, x, patch=None):
    if domain.n == 1:
        ends = [domain.a, domain.b] if patch is None else \
            [domain.a if s == "left" else domain.b for s in domain._patch(patch)]
        return min(abs(float(x[0]) - e) for e in ends)
    g = domain.boundary_grid(h=domain.diameter() / 64, q=2, patch=patch)
    return float(np.min(np.linalg.norm(g.points - x, axis=1)))


class FieldSum:
    """Linear combination of fields sharing the value/derivative protocol."""

    def __init__(self, fields, coefs=None):
        self.fields = list(fields)
        self.coefs = [1.0] * len(self.fields) if coefs is None else list(coefs)

    def value(self, points, t):
        out = np.zeros(np.asarray(points).shape[0])
        for c, f in zip(self.coefs, self.fields):
            out = out + c * f.value(points, t)
        return np.asarray(out)

    def derivative(self, points, t, alpha, t_order: int = 0):
        out = np.zeros(np.asarray(points).shape[0])
        for c, f in zip(self.coefs, self.fields):
            out = out + c * f.derivative(points, t, alpha, t_order)
        return np.asarray(out)


class PoissonPotential:
    """Initial-slice potential: kernel smoothing of data on the domain at
    a fixed start time."""

    def __init__(self, params: KernelParams, domain, data, t0: float = 0.0,
                 h: float = None, q: int = _QS):
        self.params = params
        self.domain = domain
        self.data = data
        self.t0 = float(t0)
        self.h = h if h is not None else domain.diameter() / 24
        self.q = q

    def value(self, points, t):
        return self.derivative(points, t, (0,) * self.params.n)

    def derivative(self, points, t, alpha, t_order: int = 0):
        pts = _as_points(points, self.params.n)
        u = float(t) - self.t0
        if u <= 0.0:
            return np.zeros(len(pts))
        out = np.empty(len(pts))
        for k, x in enumerate(pts):
            nodes, wts, vals = self._space_rule(x, u)
            kern = eval_translate(self.params.n, self.params.m, x - nodes,
                                  np.array(u), tuple(alpha), t_order)
            out[k] = np.dot(wts, kern * vals)
        return out

    def _space_rule(self, x, u):
        scale = u ** (0.5 / self.params.m)
        if self.domain.n == 1:
            a, b = self.domain.a, self.domain.b
            edges = np.linspace(a, b, max(2, int(math.ceil((b - a) / self.h))) + 1)
            ystar = min(max(float(x[0]), a), b)
            if scale < 2 * self.h:
                for lo, hi in ((a, ystar), (ystar, b)):
                    if hi - lo > 0.25 * scale:
                        edges = np.concatenate(
                            [edges, graded_edges(lo, hi, toward=ystar,
                                                 resolve=0.25 * scale)])
                edges = np.unique(edges)
            nodes, wts = gauss_panels(edges, self.q)
            pts = nodes[:, None]
        else:
            g = self.domain.volume_grid(self.h, self.q // 2 + 2)
            pts, wts = g.points, g.weights
        return pts, wts, np.asarray(self.data(pts))


class VolumePotential:
    """Space-time volume potential of a forcing term f(y, tau).

    One dimension gets the fully graded product rule (accurate for
    interior and exterior targets alike); two dimensions split off the
    last short time interval, where the kernel acts as an approximate
    identity, and evaluate it as f(x, t) times the kernel mass.
    """

    def __init__(self, params: KernelParams, domain, forcing, t0: float = 0.0,
                 h: float = None, q: int = _QS):
        self.params = params
        self.domain = domain
        self.forcing = forcing
        self.t0 = float(t0)
        self.h = h if h is not None else domain.diameter() / 24
        self.q = q

    def value(self, points, t):
        return self.derivative(points, t, (0,) * self.params.n)

    def derivative(self, points, t, alpha, t_order: int = 0):
        if t_order:
            raise UnsupportedOrder("volume potential supports spatial derivatives only")
        pts = _as_points(points, self.params.n)
        span = float(t) - self.t0
        if span <= 0.0:
            return np.zeros(len(pts))
        out = np.empty(len(pts))
        for k, x in enumerate(pts):
            out[k] = self._one(x, float(t), span, tuple(alpha))
        return out

    def _one(self, x, t, span, alpha):
        m = self.params.m
        n = self.params.n
        if n == 1:
            snodes, swts = _sigma_rule(m, span, 0.0)
            acc = 0.0
            a, b = self.domain.a, self.domain.b
            ystar = min(max(float(x[0]), a), b)
            for sg, sw in zip(snodes, swts):
                u = sg ** (2 * m)
                if u == 0.0:
                    continue
                scale = max(sg, 1e-9 * (b - a))
                edges = [np.linspace(a, b, max(2, int((b - a) / self.h)) + 1)]
                for lo, hi in ((a, ystar), (ystar, b)):
                    if hi - lo > 0.25 * scale:
                        edges.append(graded_edges(lo, hi, toward=ystar,
                                                  resolve=0.25 * scale))
                ynodes, ywts = gauss_panels(np.unique(np.concatenate(edges)), self.q)
                kern = eval_translate(1, m, (x[0] - ynodes)[:, None],
                                      np.array(u), alpha)
                fv = np.asarray(self.forcing(ynodes[:, None], t - u))
                acc += sw * 2 * m * sg ** (2 * m - 1) * np.dot(ywts, kern * fv)
            return acc
        # n == 2: short-time slice as an approximate identity when the
        # target is interior (documented second-order accuracy in u0)
        g = self.domain.volume_grid(self.h, self.q // 2 + 2)
        u0 = min(0.5 * span, (3 * self.h) ** (2 * m))
        acc = 0.0
        if bool(self.domain.contains(x[None, :])[0]) and alpha == (0, 0):
            tn, tw = gauss_panels(np.array([0.0, u0]), _QT)
            fx = np.array([self.forcing(x[None, :], t - u)[0] for u in tn])
            acc += np.dot(tw, fx)
            lo = u0
        elif not bool(self.domain.contains(x[None, :])[0]):
            lo = 0.0
        else:
            lo = u0  # derivative of the identity part is dropped; see docstring
        snodes, swts = _sigma_rule(self.params.m, span, _dist_to_volume(self.domain, x))
        mask = snodes ** (2 * m) >= lo
        for sg, sw in zip(snodes[mask], swts[mask]):
            u = sg ** (2 * m)
            kern = eval_translate(2, m, x - g.points, np.array(u), alpha)
            fv = np.asarray(self.forcing(g.points, t - u))
            acc += sw * 2 * m * sg ** (2 * m - 1) * np.dot(g.weights, kern * fv)
        return acc


def _dist_to_volume(domain, x):
    if domain.n == 1:
        if domain.a < x[0] < domain.b:
            return 0.0
        return min(abs(x[0] - domain.a), abs(x[0] - domain.b))
    if bool(domain.contains(x[None, :])[0]):
        return 0.0
    g = domain.boundary_grid(h=domain.diameter() / 64, q=2)
    return float(np.min(np.linalg.norm(g.points - x, axis=1)))


class LayerPotential:
    """Lateral-boundary potential with the adjoint operator of index
    `kern_index` applied to the kernel in its source argument."""

    def __init__(self, params: KernelParams, domain, kern_index: int, density,
                 patch=None, t0: float = 0.0, h: float = None, q: int = _QS,
                 density_dt=None):
        self.params = params
        self.domain = domain
        self.i = int(kern_index)
        self.density = density
        self.density_dt = density_dt if density_dt is not None \
            else getattr(density, "dt", None)
        self.patch = patch
        self.t0 = float(t0)
        self.h = h if h is not None else domain.diameter() / 24
        self.q = q

    def value(self, points, t):
        return self.derivative(points, t, (0,) * self.params.n)

    def derivative(self, points, t, alpha, t_order: int = 0):
        if t_order:
            raise UnsupportedOrder("layer potential supports spatial derivatives only")
        pts = _as_points(points, self.params.n)
        span = float(t) - self.t0
        if span <= 0.0:
            return np.zeros(len(pts))
        alpha = tuple(alpha)
        if self.domain.n == 1:
            return self._eval_1d(pts, float(t), span, alpha)
        out = np.empty(len(pts))
        for k, x in enumerate(pts):
            out[k] = self._one_2d(x, float(t), span, alpha)
        return out

    def _eval_1d(self, pts, t, span, alpha):
        m = self.params.m
        g = self.domain.boundary_grid(patch=self.patch)
        out = np.zeros(len(pts))
        p = self.i + alpha[0]
        for y, nu in zip(g.points, g.normals):
            if p >= 2 * m and self.density_dt is not None:
                # exact order reduction: d^{2m} K = (-1)^{m+1} d_u K, then
                # integrate by parts in time; the traded density derivative
                # keeps the kernel order below 2m, where one-sided boundary
                # limits are benign
                nu_fac = float(nu[0]) ** (self.i % 2)
                out += nu_fac * self._reduced_1d(pts, t, span, y, p - 2 * m)
                continue
            dist = float(np.min(np.abs(pts[:, 0] - y[0])))
            snodes, swts = _sigma_rule(m, span, dist)
            u = snodes ** (2 * m)
            jac = 2 * m * snodes ** (2 * m - 1)
            z = pts[None, :, :] - y  # (S, N, 1) after broadcast below
            kern = apply_C_kernel(self.params, self.i,
                                  np.broadcast_to(z, (len(snodes),) + pts.shape),
                                  u[:, None], nu, alpha_extra=alpha)
            dens = np.array([self.density(y[None, :], t - uu)[0] for uu in u])
            out += np.einsum("s,s,s,sn->n", swts, jac, dens, kern)
        return out

    def _reduced_1d(self, pts, t, span, y, q_order):
        m = self.params.m
        sgn = (-1.0) ** (m + 1)
        z = pts - y
        bnd = eval_translate(1, m, z, np.array(span), (q_order,)) \
            * float(self.density(y[None, :], t - span)[0])
        dist = float(np.min(np.abs(z[:, 0])))
        snodes, swts = _sigma_rule(m, span, dist)
        u = snodes ** (2 * m)
        jac = 2 * m * snodes ** (2 * m - 1)
        zb = np.broadcast_to(pts[None, :, :] - y, (len(snodes),) + pts.shape)
        kern = eval_translate(1, m, zb, u[:, None], (q_order,))
        dens = np.array([self.density_dt(y[None, :], t - uu)[0] for uu in u])
        integ = np.einsum("s,s,s,sn->n", swts, jac, dens, kern)
        return sgn * (bnd + integ)

    def _one_2d(self, x, t, span, alpha):
        dist = _dist_to(self.domain, x, self.patch)
        grid = self.domain.boundary_grid(
            self.h, self.q, patch=self.patch, refine_near=x,
            min_width=max(dist / 4.0, 1e-5 * self.domain.diameter()))
        snodes, swts = _sigma_rule(self.params.m, span, dist)
        u = snodes ** (2 * self.params.m)
        jac = 2 * self.params.m * snodes ** (2 * self.params.m - 1)
        z = x - grid.points
        acc = 0.0
        for sg, sw, uu, jj in zip(snodes, swts, u, jac):
            if uu == 0.0:
                continue
            kern = apply_C_kernel(self.params, self.i, z, np.array(uu),
                                  grid.normals, alpha_extra=alpha)
            dens = np.asarray(self.density(grid.points, t - uu))
            acc += sw * jj * np.dot(grid.weights, kern * dens)
        return acc


def representation_terms(params: KernelParams, domain, traces, initial=None,
                         forcing=None, patch=None, t0: float = 0.0,
                         h: float = None) -> FieldSum:
    """Assemble the interior reproduction sum from boundary traces,
    optional initial data and optional forcing.

    `traces` is a sequence of 2m callables (y, tau) -> trace values,
    ordered by the boundary system index; entries may be None to omit a
    term (used when data are only known on a patch).
    """
    m = params.m
    if len(traces) != 2 * m:
        raise ValueError(f"need {2 * m} traces, got {len(traces)}")
    fields, coefs = [], []
    if initial is not None:
        fields.append(PoissonPotential(params, domain, initial, t0=t0, h=h))
        coefs.append(1.0)
    if forcing is not None:
        fields.append(VolumePotential(params, domain, forcing, t0=t0, h=h))
        coefs.append(1.0)
    sign = (-1.0) ** (m + 1)
    for j, g in enumerate(traces):
        if g is None:
            continue
        fields.append(LayerPotential(params, domain, 2 * m - 1 - j, g,
                                     patch=patch, t0=t0, h=h))
        coefs.append(sign)
    return FieldSum(fields, coefs)


def trace_callables(params: KernelParams, domain, fld, patch=None):
    """Trace callables g_j(y, tau) of a field on the domain boundary.

    Normals are recovered from the domain geometry at the query points;
    valid for points lying on the boundary (as layer densities do).  Each
    callable carries its time derivative as attribute `dt` when the field
    supports first time derivatives, enabling the high-order layer trace
    reduction.
    """
    from .geometry import DirichletSystem, apply_B

    sysm = DirichletSystem(params.m)

    class _TimeShift:
        # adapter presenting d/dt of the field through the same protocol
        def __init__(self, base):
            self.base = base

        def derivative(self, points, t, alpha):
            return self.base.derivative(points, t, alpha, t_order=1)

    def make(j):
        def g(y, tau):
            return apply_B(sysm, j, fld, y, tau, _normals_at(domain, y))

        def gdt(y, tau):
            return apply_B(sysm, j, _TimeShift(fld), y, tau, _normals_at(domain, y))

        g.dt = gdt
        return g

    return [make(j) for j in range(2 * params.m)]


def _normals_at(domain, y):
    y = np.asarray(y, dtype=float)
    if domain.n == 1:
        mid = 0.5 * (domain.a + domain.b)
        return np.where(y < mid, -1.0, 1.0)
    if hasattr(domain, "center"):  # disk
        rel = y - domain.center
        return rel / np.linalg.norm(rel, axis=-1, keepdims=True)
    # rectangle: nearest side wins
    out = np.zeros_like(y)
    for k, p in enumerate(np.atleast_2d(y)):
        d = {
            "left": p[0] - domain.lo[0], "right": domain.hi[0] - p[0],
            "bottom": p[1] - domain.lo[1], "top": domain.hi[1] - p[1],
        }
        side = min(d, key=d.get)
        out[k] = domain._side_geom(side)[3]
    return out


def trace_jump(params: KernelParams, domain, layer_sum, i: int, y0, normal,
               t: float, offsets=None):
    """Two-sided gap of the i-th trace of a layer sum across the boundary:
    inner minus outer, Richardson-extrapolated in the offset.

    Both sides are evaluated in one call at mirrored offsets so the same
    quadrature rule serves both targets: components of the trace that are
    even in the signed offset (including the parts whose one-sided limits
    diverge for high combined orders) cancel exactly in the difference,
    and only the smooth gap expansion is extrapolated.

    Returns (gap, gaps_at_offsets, converged).
    """
    from .geometry import DirichletSystem, apply_B
    from .quadrature import richardson_extrapolate

    sysm = DirichletSystem(params.m)
    y0 = np.asarray(y0, dtype=float)
    normal = np.asarray(normal, dtype=float)
    if offsets is None:
        offsets = domain.diameter() * 0.5 ** np.arange(3, 8)
    offsets = np.asarray(offsets, dtype=float)
    gaps = np.empty(len(offsets))
    nrm2 = np.stack([normal, normal])
    for k, hh in enumerate(offsets):
        pair = np.stack([y0 - hh * normal, y0 + hh * normal])
        vals = apply_B(sysm, i, layer_sum, pair, t, nrm2)
        gaps[k] = vals[0] - vals[1]
    est, conv, _ = richardson_extrapolate(offsets, gaps, order=2)
    return est, gaps, bool(conv)
