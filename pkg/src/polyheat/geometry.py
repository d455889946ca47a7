"""Spatial domains, boundary quadrature, and boundary operator systems.

Domains are an interval (n=1), a disk or an axis-aligned rectangle (n=2).
Each produces boundary and volume quadrature grids; boundaries can be
restricted to an accessible patch and refined toward a nearby target
point, which the potential evaluators need for near-boundary accuracy.

The boundary operator system of order m is

    B = (1, dn, Lap, dn Lap, ..., dn Lap^{m-1}),

i.e. B_i = dn^{i mod 2} Lap^{floor(i/2)} with dn the outward normal
derivative; its adjoint partner flips the sign of the odd (normal
derivative) entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernel
from .quadrature import gauss_panels, graded_edges

__all__ = [
    "BoundaryGrid",
    "VolumeGrid",
    "CylinderGrid",
    "Interval",
    "Disk",
    "Rectangle",
    "AnnularSector",
    "CylinderSpec",
    "build_cylinder",
    "boundary_grid",
    "DirichletSystem",
    "apply_B",
    "apply_C_kernel",
]


@dataclass
class BoundaryGrid:
    """Boundary quadrature nodes with weights and outward unit normals."""

    points: np.ndarray   # (N, n)
    weights: np.ndarray  # (N,)
    normals: np.ndarray  # (N, n)

    def __post_init__(self):
        if not (len(self.points) == len(self.weights) == len(self.normals)):
            raise ValueError("inconsistent boundary grid arrays")


@dataclass
class VolumeGrid:
    points: np.ndarray   # (N, n)
    weights: np.ndarray  # (N,)


class Interval:
    """Open interval (a, b) in one dimension.

    The boundary is the two endpoints with counting measure; patches are
    subsets of ("left", "right").
    """

    n = 1
    sides = ("left", "right")

    def __init__(self, a: float, b: float):
        if not b > a:
            raise ValueError(f"empty interval ({a}, {b})")
        self.a = float(a)
        self.b = float(b)

    def diameter(self) -> float:
        return self.b - self.a

    def volume(self) -> float:
        return self.b - self.a

    def boundary_measure(self, patch=None) -> float:
        return float(len(self._patch(patch)))

    def _patch(self, patch):
        if patch is None:
            return self.sides
        patch = (patch,) if isinstance(patch, str) else tuple(patch)
        for s in patch:
            if s not in self.sides:
                raise ValueError(f"unknown interval side {s!r}")
        return patch

    def complement(self, patch):
        got = self._patch(patch)
        return tuple(s for s in self.sides if s not in got)

    def contains(self, points) -> np.ndarray:
        x = np.asarray(points, dtype=float).reshape(-1, 1)[:, 0]
        return (x > self.a) & (x < self.b)

    def boundary_grid(self, h=None, q=None, patch=None, refine_near=None,
                      min_width=None) -> BoundaryGrid:
        # endpoints carry unit weight; h/q/refinement are irrelevant in 1d
        pts, nrm = [], []
        for s in self._patch(patch):
            if s == "left":
                pts.append([self.a])
                nrm.append([-1.0])
            else:
                pts.append([self.b])
                nrm.append([1.0])
        return BoundaryGrid(np.array(pts), np.ones(len(pts)), np.array(nrm))

    def volume_grid(self, h: float, q: int = 8) -> VolumeGrid:
        npan = max(2, int(math.ceil((self.b - self.a) / h)))
        nodes, wts = gauss_panels(np.linspace(self.a, self.b, npan + 1), q)
        return VolumeGrid(nodes[:, None], wts)

    def exterior_sources(self, count: int, distance: float) -> np.ndarray:
        """Source points on both outward rays, stepping away from the domain."""
        step = 0.25 * distance
        pts = np.empty((count, 1))
        for k in range(count):
            j = k // 2
            if k % 2 == 0:
                pts[k, 0] = self.a - distance - j * step
            else:
                pts[k, 0] = self.b + distance + j * step
        return pts

    def boundary_point(self, side: str) -> np.ndarray:
        return np.array([self.a if side == "left" else self.b])


class Disk:
    """Disk of given center and radius; boundary patches are angle arcs."""

    n = 2

    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=float).reshape(2)
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)

    def diameter(self) -> float:
        return 2.0 * self.radius

    def volume(self) -> float:
        return math.pi * self.radius**2

    def _arc(self, patch):
        if patch is None:
            return 0.0, 2.0 * math.pi
        t0, t1 = float(patch[0]), float(patch[1])
        if not t1 > t0 or t1 - t0 > 2.0 * math.pi + 1e-12:
            raise ValueError(f"bad disk arc {patch}")
        return t0, t1

    def complement(self, patch):
        t0, t1 = self._arc(patch)
        return (t1, t0 + 2.0 * math.pi)

    def boundary_measure(self, patch=None) -> float:
        t0, t1 = self._arc(patch)
        return self.radius * (t1 - t0)

    def contains(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float).reshape(-1, 2) - self.center
        return np.sum(p * p, axis=1) < self.radius**2

    def _chart(self, theta):
        theta = np.asarray(theta, dtype=float)
        nrm = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return self.center + self.radius * nrm, nrm

    def boundary_grid(self, h: float, q: int = 12, patch=None,
                      refine_near=None, min_width=None) -> BoundaryGrid:
        t0, t1 = self._arc(patch)
        edges = _maybe_refined_edges(
            t0, t1, h / self.radius, refine_near,
            lambda th: self._chart(th)[0],
            None if min_width is None else min_width / self.radius)
        nodes, wts = gauss_panels(edges, q)
        pts, nrm = self._chart(nodes)
        return BoundaryGrid(pts, wts * self.radius, nrm)

    def volume_grid(self, h: float, q: int = 8) -> VolumeGrid:
        nr = max(2, int(math.ceil(self.radius / h)))
        rn, rw = gauss_panels(np.linspace(0.0, self.radius, nr + 1), q)
        nt = max(8, int(math.ceil(2.0 * math.pi * self.radius / h)))
        tn, tw = gauss_panels(np.linspace(0.0, 2.0 * math.pi, nt + 1), q)
        R, T = np.meshgrid(rn, tn, indexing="ij")
        W = np.outer(rw * rn, tw)
        pts = np.stack([self.center[0] + R * np.cos(T),
                        self.center[1] + R * np.sin(T)], axis=-1)
        return VolumeGrid(pts.reshape(-1, 2), W.ravel())

    def exterior_sources(self, count: int, distance: float) -> np.ndarray:
        theta = 2.0 * math.pi * np.arange(count) / count
        r = self.radius + distance
        return self.center + r * np.stack([np.cos(theta), np.sin(theta)], axis=-1)


class Rectangle:
    """Axis-aligned rectangle [lo_x, hi_x] x [lo_y, hi_y]; boundary patches
    are subsets of ("bottom", "right", "top", "left")."""

    n = 2
    sides = ("bottom", "right", "top", "left")

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float).reshape(2)
        self.hi = np.asarray(hi, dtype=float).reshape(2)
        if not np.all(self.hi > self.lo):
            raise ValueError("rectangle needs hi > lo componentwise")

    def diameter(self) -> float:
        return float(np.hypot(*(self.hi - self.lo)))

    def volume(self) -> float:
        return float(np.prod(self.hi - self.lo))

    def _patch(self, patch):
        if patch is None:
            return self.sides
        patch = (patch,) if isinstance(patch, str) else tuple(patch)
        for s in patch:
            if s not in self.sides:
                raise ValueError(f"unknown rectangle side {s!r}")
        return patch

    def complement(self, patch):
        got = self._patch(patch)
        return tuple(s for s in self.sides if s not in got)

    def _side_geom(self, side):
        # start point, tangent unit, length, outward normal
        (x0, y0), (x1, y1) = self.lo, self.hi
        wx, wy = x1 - x0, y1 - y0
        return {
            "bottom": (np.array([x0, y0]), np.array([1.0, 0.0]), wx, np.array([0.0, -1.0])),
            "right": (np.array([x1, y0]), np.array([0.0, 1.0]), wy, np.array([1.0, 0.0])),
            "top": (np.array([x1, y1]), np.array([-1.0, 0.0]), wx, np.array([0.0, 1.0])),
            "left": (np.array([x0, y1]), np.array([0.0, -1.0]), wy, np.array([-1.0, 0.0])),
        }[side]

    def boundary_measure(self, patch=None) -> float:
        return sum(self._side_geom(s)[2] for s in self._patch(patch))

    def contains(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.all((p > self.lo) & (p < self.hi), axis=1)

    def boundary_grid(self, h: float, q: int = 12, patch=None,
                      refine_near=None, min_width=None) -> BoundaryGrid:
        pts, wts, nrm = [], [], []
        for s in self._patch(patch):
            start, tang, length, normal = self._side_geom(s)
            edges = _maybe_refined_edges(
                0.0, length, h, refine_near,
                lambda u, st=start, tg=tang: st + np.multiply.outer(u, tg),
                min_width)
            nodes, w = gauss_panels(edges, q)
            pts.append(start + np.multiply.outer(nodes, tang))
            wts.append(w)
            nrm.append(np.tile(normal, (len(nodes), 1)))
        return BoundaryGrid(np.concatenate(pts), np.concatenate(wts),
                            np.concatenate(nrm))

    def volume_grid(self, h: float, q: int = 8) -> VolumeGrid:
        grids = []
        for d in range(2):
            npan = max(2, int(math.ceil((self.hi[d] - self.lo[d]) / h)))
            grids.append(gauss_panels(np.linspace(self.lo[d], self.hi[d], npan + 1), q))
        X, Y = np.meshgrid(grids[0][0], grids[1][0], indexing="ij")
        W = np.outer(grids[0][1], grids[1][1])
        return VolumeGrid(np.stack([X, Y], axis=-1).reshape(-1, 2), W.ravel())

    def exterior_sources(self, count: int, distance: float) -> np.ndarray:
        # equally spaced along the boundary of the inflated rectangle
        lo, hi = self.lo - distance, self.hi + distance
        big = Rectangle(lo, hi)
        per = big.boundary_measure()
        ts = per * np.arange(count) / count
        out = np.empty((count, 2))
        for i, t in enumerate(ts):
            for s in big.sides:
                start, tang, length, _ = big._side_geom(s)
                if t <= length or s == big.sides[-1]:
                    out[i] = start + min(t, length) * tang
                    break
                t -= length
        return out


def _maybe_refined_edges(a, b, h, refine_near, chart, min_width):
    """Uniform panel edges on [a, b], optionally graded toward the
    parameter closest to a spatial target point."""
    npan = max(2, int(math.ceil((b - a) / h)))
    edges = np.linspace(a, b, npan + 1)
    if refine_near is None or min_width is None:
        return edges
    target = np.asarray(refine_near, dtype=float)
    fine = np.linspace(a, b, 4 * npan + 1)
    d = np.linalg.norm(np.asarray(chart(fine)) - target, axis=-1)
    tstar = float(fine[np.argmin(d)])
    parts = [edges]
    if tstar - a > min_width:
        parts.append(graded_edges(a, tstar, toward=tstar, resolve=min_width))
    if b - tstar > min_width:
        parts.append(graded_edges(tstar, b, toward=tstar, resolve=min_width))
    merged = np.unique(np.concatenate(parts))
    return merged[(merged >= a) & (merged <= b)]


class AnnularSector:
    """Sector of an annulus: radii (r0, r1), angles (t0, t1) about a center.

    Used as the extension region attached to a disk boundary arc; only the
    volume-side queries are provided.
    """

    n = 2

    def __init__(self, center, r0: float, r1: float, t0: float, t1: float):
        self.center = np.asarray(center, dtype=float).reshape(2)
        if not 0 <= r0 < r1:
            raise ValueError("need 0 <= r0 < r1")
        if not t0 < t1 <= t0 + 2.0 * math.pi + 1e-12:
            raise ValueError("bad angular range")
        self.r0, self.r1 = float(r0), float(r1)
        self.t0, self.t1 = float(t0), float(t1)

    def volume(self) -> float:
        return 0.5 * (self.r1**2 - self.r0**2) * (self.t1 - self.t0)

    def contains(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float).reshape(-1, 2) - self.center
        r = np.hypot(p[:, 0], p[:, 1])
        ang = np.mod(np.arctan2(p[:, 1], p[:, 0]) - self.t0, 2.0 * math.pi)
        return (r > self.r0) & (r < self.r1) & (ang < self.t1 - self.t0)

    def volume_grid(self, h: float, q: int = 8) -> VolumeGrid:
        nr = max(2, int(math.ceil((self.r1 - self.r0) / h)))
        rn, rw = gauss_panels(np.linspace(self.r0, self.r1, nr + 1), q)
        arc = self.r1 * (self.t1 - self.t0)
        nt = max(2, int(math.ceil(arc / h)))
        tn, tw = gauss_panels(np.linspace(self.t0, self.t1, nt + 1), q)
        R, T = np.meshgrid(rn, tn, indexing="ij")
        W = np.outer(rw * rn, tw)
        pts = np.stack([self.center[0] + R * np.cos(T),
                        self.center[1] + R * np.sin(T)], axis=-1)
        return VolumeGrid(pts.reshape(-1, 2), W.ravel())


@dataclass
class CylinderGrid:
    """Tensor space-time quadrature over patch x (0, T).

    Spatial nodes carry surface weights and outward normals; times carry
    their own weights. The full rule is the product of the two factors.
    """

    points: np.ndarray        # (Ns, n)
    space_weights: np.ndarray
    normals: np.ndarray       # (Ns, n)
    times: np.ndarray         # (Nt,)
    time_weights: np.ndarray

    def total_weight(self) -> float:
        return float(np.sum(self.space_weights) * np.sum(self.time_weights))


@dataclass
class CylinderSpec:
    """Space-time cylinder: domain x (0, horizon).

    For lateral Cauchy problems the record also carries the accessible
    boundary patch and the extension region attached to the domain across
    that patch, so that domain + patch + extension form one connected
    open set.
    """

    domain: object
    horizon: float
    patch: object = None
    extension: object = None

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("time horizon must be positive")
        if getattr(self.domain, "n", None) not in (1, 2):
            raise ValueError("domain must be 1d or 2d")
        if self.patch is not None:
            self._check_patch()
        if self.extension is not None:
            if self.patch is None:
                raise ValueError("extension requires an accessible patch")
            self._check_extension()

    @property
    def n(self) -> int:
        return self.domain.n

    def _check_patch(self):
        dom = self.domain
        if isinstance(dom, Interval):
            if self.patch not in dom.sides:
                raise ValueError(f"bad interval patch {self.patch!r}")
        elif isinstance(dom, Disk):
            t0, t1 = dom._arc(self.patch)
            if not t1 > t0:
                raise ValueError("empty boundary arc")
        elif isinstance(dom, Rectangle):
            if self.patch not in dom.sides:
                raise ValueError(f"bad rectangle patch {self.patch!r}")
        else:
            raise ValueError("unsupported domain type")

    def _check_extension(self):
        dom, ext, tol = self.domain, self.extension, 1e-9
        if isinstance(dom, Interval):
            if not isinstance(ext, Interval):
                raise ValueError("interval extension must be an interval")
            edge = dom.a if self.patch == "left" else dom.b
            if self.patch == "left":
                ok = abs(ext.b - edge) <= tol * dom.diameter() and ext.a < ext.b
            else:
                ok = abs(ext.a - edge) <= tol * dom.diameter() and ext.a < ext.b
            if not ok:
                raise ValueError("extension does not attach across the patch")
        elif isinstance(dom, Disk):
            if not isinstance(ext, AnnularSector):
                raise ValueError("disk extension must be an annular sector")
            t0, t1 = dom._arc(self.patch)
            if abs(ext.r0 - dom.radius) > tol * dom.radius:
                raise ValueError("extension does not attach at the circle")
            if not (np.allclose(ext.center, dom.center)
                    and ext.t0 >= t0 - tol and ext.t1 <= t1 + tol):
                raise ValueError("extension arc must sit inside the patch arc")
        elif isinstance(dom, Rectangle):
            if not isinstance(ext, Rectangle):
                raise ValueError("rectangle extension must be a rectangle")
            _, _, _, normal = dom._side_geom(self.patch)
            ax = int(np.argmax(np.abs(normal)))
            other = 1 - ax
            edge = dom.hi[ax] if normal[ax] > 0 else dom.lo[ax]
            attach = ext.lo[ax] if normal[ax] > 0 else ext.hi[ax]
            if abs(attach - edge) > tol * dom.diameter():
                raise ValueError("extension does not attach across the patch")
            if (ext.lo[other] < dom.lo[other] - tol
                    or ext.hi[other] > dom.hi[other] + tol):
                raise ValueError("extension overhangs the patch side")
        # interior overlap would disconnect the reproduction dichotomy
        probe = ext.volume_grid(_probe_h(ext)).points
        if np.any(dom.contains(probe)):
            raise ValueError("extension overlaps the base domain")

    def hull_diameter(self) -> float:
        """Diameter of the union of domain and extension."""
        dom, ext = self.domain, self.extension
        if ext is None:
            return dom.diameter()
        if isinstance(dom, Interval):
            lo = min(dom.a, ext.a)
            hi = max(dom.b, ext.b)
            return hi - lo
        if isinstance(dom, Disk):
            return 2.0 * max(dom.radius, ext.r1)
        lo = np.minimum(dom.lo, ext.lo)
        hi = np.maximum(dom.hi, ext.hi)
        return float(np.hypot(*(hi - lo)))

    def source_ring(self, count: int, distance: float) -> np.ndarray:
        """Points at distance >= `distance` outside the closed hull."""
        dom, ext = self.domain, self.extension
        if isinstance(dom, Interval):
            lo = min(dom.a, ext.a) if ext is not None else dom.a
            hi = max(dom.b, ext.b) if ext is not None else dom.b
            return Interval(lo, hi).exterior_sources(count, distance)
        if isinstance(dom, Disk):
            rout = max(dom.radius, ext.r1 if ext is not None else 0.0)
            return Disk(dom.center, rout).exterior_sources(count, distance)
        lo = np.minimum(dom.lo, ext.lo) if ext is not None else dom.lo
        hi = np.maximum(dom.hi, ext.hi) if ext is not None else dom.hi
        return Rectangle(lo, hi).exterior_sources(count, distance)

    def gamma_distance(self, points) -> np.ndarray:
        """Distance from each point to the closed accessible patch."""
        dom = self.domain
        pts = np.asarray(points, dtype=float).reshape(-1, dom.n)
        if isinstance(dom, Interval):
            edge = dom.a if self.patch == "left" else dom.b
            return np.abs(pts[:, 0] - edge)
        if isinstance(dom, Disk):
            t0, t1 = dom._arc(self.patch)
            rel = pts - dom.center
            r = np.hypot(rel[:, 0], rel[:, 1])
            ang = np.mod(np.arctan2(rel[:, 1], rel[:, 0]) - t0, 2.0 * math.pi)
            on_arc = ang <= t1 - t0
            d = np.empty(len(pts))
            d[on_arc] = np.abs(r[on_arc] - dom.radius)
            ends = dom._chart(np.array([t0, t1]))[0]
            d_end = np.min(np.linalg.norm(pts[:, None, :] - ends[None, :, :],
                                          axis=-1), axis=1)
            d[~on_arc] = d_end[~on_arc]
            return d
        start, tang, length, _ = dom._side_geom(self.patch)
        rel = pts - start
        s = np.clip(rel @ tang, 0.0, length)
        foot = start + np.multiply.outer(s, tang)
        return np.linalg.norm(pts - foot, axis=-1)


def _probe_h(region) -> float:
    if isinstance(region, Interval):
        return region.diameter() / 8.0
    if isinstance(region, AnnularSector):
        return (region.r1 - region.r0) / 4.0
    return float(np.min(region.hi - region.lo)) / 4.0


def build_cylinder(domain, horizon: float, patch=None, extension=None,
                   depth: float = 1.0) -> CylinderSpec:
    """Validated cylinder spec; a missing extension region is mirrored
    across the patch with thickness `depth` times the natural width."""
    if patch is not None and extension is None:
        if isinstance(domain, Interval):
            w = depth * domain.diameter()
            if patch == "left":
                extension = Interval(domain.a - w, domain.a)
            elif patch == "right":
                extension = Interval(domain.b, domain.b + w)
        elif isinstance(domain, Disk):
            t0, t1 = domain._arc(patch)
            extension = AnnularSector(domain.center, domain.radius,
                                      (1.0 + 0.5 * depth) * domain.radius,
                                      t0, t1)
        elif isinstance(domain, Rectangle):
            start, tang, length, normal = domain._side_geom(patch)
            w = depth * length
            far = start + w * normal
            lo = np.minimum(np.minimum(start, start + length * tang),
                            np.minimum(far, far + length * tang))
            hi = np.maximum(np.maximum(start, start + length * tang),
                            np.maximum(far, far + length * tang))
            extension = Rectangle(lo, hi)
    return CylinderSpec(domain, horizon, patch, extension)


def boundary_grid(spec: CylinderSpec, patch: str = "gamma",
                  n_space: int = 16, n_time: int = 64,
                  q_time: int = 8) -> CylinderGrid:
    """Tensor quadrature over a lateral boundary part times (0, horizon).

    `patch` selects the accessible part ("gamma"), the rest
    ("complement"), or the whole boundary ("full").
    """
    dom = spec.domain
    if patch == "gamma":
        part = spec.patch
        if part is None:
            raise ValueError("spec has no accessible patch")
    elif patch == "complement":
        part = dom.complement(spec.patch)
    elif patch == "full":
        part = None
    else:
        raise ValueError(f"unknown patch selector {patch!r}")
    measure = dom.boundary_measure(part)
    if dom.n == 1:
        bg = dom.boundary_grid(patch=part)
    else:
        h = measure / max(2, int(n_space))
        bg = dom.boundary_grid(h=h, q=8, patch=part)
    npan = max(1, int(math.ceil(n_time / q_time)))
    tn, tw = gauss_panels(np.linspace(0.0, spec.horizon, npan + 1), q_time)
    return CylinderGrid(bg.points, bg.weights, bg.normals, tn, tw)


class DirichletSystem:
    """The boundary operator family B_i = dn^{i mod 2} Lap^{i // 2},
    i = 0 .. 2m-1, and its sign-flipped adjoint partner."""

    def __init__(self, m: int):
        if m not in (1, 2, 3):
            raise ValueError("operator power must be 1, 2 or 3")
        self.m = m
        self.count = 2 * m

    def order(self, i: int) -> int:
        self._check(i)
        return i

    def label(self, i: int) -> str:
        self._check(i)
        names = {0: "value", 1: "normal"}
        if i in names:
            return names[i]
        base = f"lap{i // 2}" if i // 2 > 1 else "lap"
        return f"normal-{base}" if i % 2 else base

    def adjoint_sign(self, i: int) -> float:
        self._check(i)
        return -1.0 if i % 2 else 1.0

    def _check(self, i: int):
        if not 0 <= i < self.count:
            raise ValueError(f"boundary operator index {i} outside 0..{self.count - 1}")


@lru_cache(maxsize=64)
def _lap_power_terms(n: int, j: int):
    # Lap^j as sum of coef * d^alpha (binomial expansion across axes)
    if n == 1:
        return ((1.0, (2 * j,)),)
    return tuple((float(math.comb(j, k)), (2 * k, 2 * (j - k))) for k in range(j + 1))


def apply_B(system: DirichletSystem, i: int, fld, points, t, normals) -> np.ndarray:
    """Evaluate B_i applied to a field at boundary points.

    `fld` must expose derivative(points, t, alpha) -> array.
    """
    system._check(i)
    points = np.asarray(points, dtype=float)
    n = points.shape[-1]
    normals = np.asarray(normals, dtype=float)
    out = 0.0
    for c, alpha in _lap_power_terms(n, i // 2):
        if i % 2 == 0:
            out = out + c * fld.derivative(points, t, alpha)
        else:
            for ax in range(n):
                al = list(alpha)
                al[ax] += 1
                out = out + c * normals[..., ax] * fld.derivative(points, t, tuple(al))
    return np.asarray(out)


def apply_C_kernel(params: kernel.KernelParams, i: int, z, u, normals,
                   alpha_extra=None) -> np.ndarray:
    """Adjoint boundary operator applied to the kernel in its source point.

    Evaluates (dn^{i mod 2} Lap^{i//2} K)(z, u) with z = target - source and
    dn along the source normal; with this sign convention the layer sum in
    the interior reproduction formula carries uniform signs.  `alpha_extra`
    composes an additional target-side derivative (both act on z, so the
    multi-indices simply add).
    """
    z = np.asarray(z, dtype=float)
    n = z.shape[-1]
    normals = np.asarray(normals, dtype=float)
    extra = (0,) * n if alpha_extra is None else tuple(alpha_extra)
    out = 0.0
    for c, alpha in _lap_power_terms(n, i // 2):
        alpha = tuple(a + e for a, e in zip(alpha, extra))
        if i % 2 == 0:
            out = out + c * kernel.eval_translate(n, params.m, z, u, alpha)
        else:
            for ax in range(n):
                al = list(alpha)
                al[ax] += 1
                out = out + c * normals[..., ax] * \
                    kernel.eval_translate(n, params.m, z, u, tuple(al))
    return np.asarray(out)
