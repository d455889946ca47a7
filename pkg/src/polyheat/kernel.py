"""Fundamental solution of the polyharmonic heat operator d/dt + (-Lap)^m.

The kernel is radial and self-similar,

    K(x, t) = t^(-n/2m) * f(|x| t^(-1/2m)),   t > 0;   K = 0 for t <= 0,

with radial profile

    f(s) = c_n * int_0^inf rho^(n-1) exp(-rho^(2m)) g_nu(s rho) drho,

where g_nu(z) = z^(-nu) J_nu(z), nu = n/2 - 1, and c_n = (2 pi)^(-n/2)
fixes unit mass.  Profiles are tabulated on a uniform s-grid and spline
interpolated; spatial/temporal derivatives are exact via the dimension
shift  f_n'(s) = -2 pi s f_{n+2}(s), which lifts every derivative of the
n-dimensional kernel to values of higher-dimensional kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .quadrature import gauss_panels
from .specfun import gamma, regularized_j

__all__ = [
    "KernelParams",
    "RadialProfile",
    "SingularEvaluation",
    "UnsupportedOrder",
    "normalization",
    "heat_closed_form",
    "get_profile",
    "phi",
    "phi_values",
    "phi_derivative",
    "TranslateField",
]

_TRUNC_EPS = 1e-16
_TABLE_STEP = 1e-3
_BASE_SMAX = {1: 12.0, 2: 36.0, 3: 60.0}
_EDGE_BOUND = 1e-10       # monitored bound on |f(s_max)|
_MP_SWITCH = 6.0          # m=1: arbitrary-precision series beyond this s


class SingularEvaluation(ValueError):
    """Kernel or kernel derivative requested at its singular point."""


class UnsupportedOrder(ValueError):
    """Derivative order outside the supported range."""


@dataclass(frozen=True)
class KernelParams:
    """Operator parameters: space dimension n and Laplacian power m."""

    n: int
    m: int

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError(f"space dimension must be 1, 2 or 3, got {self.n}")
        if self.m not in (1, 2, 3):
            raise ValueError(f"operator power must be 1, 2 or 3, got {self.m}")


def normalization(params: KernelParams) -> float:
    """Unit-mass normalization constant (2 pi)^(-n/2) of the profile."""
    return (2.0 * math.pi) ** (-0.5 * params.n)


def heat_closed_form(n: int, x, t: float) -> float:
    """Classical heat kernel exp(-|x|^2/4t) / (2 sqrt(pi t))^n, 0 for t <= 0.

    `x` may be a scalar radius or a coordinate vector.
    """
    if t <= 0.0:
        return 0.0
    r2 = float(np.sum(np.square(np.asarray(x, dtype=float))))
    return math.exp(-r2 / (4.0 * t)) / (2.0 * math.sqrt(math.pi * t)) ** n


def _rho_max(m: int) -> float:
    return math.log(1.0 / _TRUNC_EPS) ** (1.0 / (2 * m)) + 2.0


def _mcmahon_zeros(nu: float, upto: float) -> np.ndarray:
    # approximate positive zeros of J_nu below `upto`
    mu = 4.0 * nu * nu
    ks = np.arange(1, max(2, int(upto / math.pi) + 2))
    beta = (ks + 0.5 * nu - 0.25) * math.pi
    z = beta - (mu - 1.0) / (8.0 * beta)
    return z[(z > 0.0) & (z < upto)]


class RadialProfile:
    """Radial kernel profile for one (n, m), with quadrature and table.

    `n` may exceed the pipeline dimensions: higher values arise as
    dimension shifts when evaluating derivatives.
    """

    def __init__(self, n: int, m: int):
        if n < 1 or m not in (1, 2, 3):
            raise ValueError(f"unsupported profile parameters ({n}, {m})")
        self.n = int(n)
        self.m = int(m)
        self.nu = 0.5 * n - 1.0
        self.rho_max = _rho_max(m)
        self.s_max = None
        self.s_grid = None
        self.values = None
        self._spline = None
        self._log_table = m == 1   # positive kernel: store log for relative accuracy

    # -- direct quadrature ------------------------------------------------

    def _integrand(self, rho: np.ndarray, s: float) -> np.ndarray:
        return rho ** (self.n - 1) * np.exp(-rho ** (2 * self.m)) * \
            regularized_j(self.nu, s * rho)

    def _quad_scalar(self, s: float) -> float:
        # panels split at Bessel zeros when the integrand oscillates,
        # dense composite Gauss-Legendre otherwise
        s = float(abs(s))
        if s * self.rho_max <= 8.0:
            edges = np.linspace(0.0, self.rho_max, 17)
            q = 16
        else:
            zeros = _mcmahon_zeros(self.nu, s * self.rho_max) / s
            edges = np.concatenate(([0.0], zeros, [self.rho_max]))
            q = 32
        nodes, wts = gauss_panels(edges, q)
        val = float(np.dot(wts, self._integrand(nodes, s)))
        return (2.0 * math.pi) ** (-0.5 * self.n) * val

    # -- table ------------------------------------------------------------

    def _ensure_table(self):
        if self._spline is None:
            self._build_table()

    def _pick_smax(self) -> float:
        s = _BASE_SMAX[self.m]
        while abs(self._quad_scalar(s)) > _EDGE_BOUND and s < 150.0:
            s += 6.0
        return s

    def _build_table(self):
        self.s_max = self._pick_smax()
        ns = int(round(self.s_max / _TABLE_STEP)) + 1
        self.s_grid = np.linspace(0.0, self.s_max, ns)
        # fixed rho-rule resolving the fastest oscillation on the grid
        width = math.pi / self.s_max
        npan = max(8, int(math.ceil(self.rho_max / width)))
        nodes, wts = gauss_panels(np.linspace(0.0, self.rho_max, npan + 1), 16)
        base = nodes ** (self.n - 1) * np.exp(-nodes ** (2 * self.m)) * wts
        gz = _g_spline(self.nu, self.s_max * self.rho_max)
        vals = np.empty(ns)
        chunk = max(1, int(4e6 / len(nodes)))
        for i0 in range(0, ns, chunk):
            sl = slice(i0, min(ns, i0 + chunk))
            z = self.s_grid[sl, None] * nodes[None, :]
            vals[sl] = gz(z) @ base
        vals *= (2.0 * math.pi) ** (-0.5 * self.n)
        if self._log_table:
            far = self.s_grid > _MP_SWITCH
            if far.any():
                # quadrature loses relative accuracy out here; use the
                # high-precision series on a coarse subgrid and fill in
                # through a log-spline (the log-profile is slowly varying)
                coarse = np.arange(_MP_SWITCH, self.s_max + 1e-12, 0.02)
                if coarse[-1] < self.s_max - 1e-12:
                    coarse = np.append(coarse, self.s_max)
                mpvals = np.array([_series_mp(self.n, self.m, s) for s in coarse])
                logspl = CubicSpline(coarse, np.log(mpvals))
                vals[far] = np.exp(logspl(self.s_grid[far]))
            if np.any(vals <= 0.0):
                raise ArithmeticError("m=1 profile table must be positive")
            self.values = vals
            self._spline = CubicSpline(self.s_grid, np.log(vals))
        else:
            self.values = vals
            self._spline = CubicSpline(self.s_grid, vals)
        if abs(vals[-1]) > _EDGE_BOUND:
            raise ArithmeticError(
                f"profile table edge |f({self.s_max})| = {abs(vals[-1]):.2e} "
                f"exceeds {_EDGE_BOUND:g} for (n={self.n}, m={self.m})")

    def values_fast(self, s: np.ndarray) -> np.ndarray:
        """Vectorized table evaluation; 0 beyond the table edge.

        The neglected tail is bounded by the monitored edge value 1e-10
        relative to the profile scale, far below quadrature tolerances.
        """
        self._ensure_table()
        s = np.abs(np.asarray(s, dtype=float))
        out = np.zeros(s.shape)
        inside = s <= self.s_max
        if inside.any():
            if self._log_table:
                out[inside] = np.exp(self._spline(s[inside]))
            else:
                out[inside] = self._spline(s[inside])
        return out

    def profile(self, s, deriv_order: int = 0):
        """Radial profile f(s) or its s-derivative of order <= 2m.

        Table-backed inside [0, s_max]; direct quadrature beyond.
        Derivatives use the exact dimension-shift recurrence, never spline
        differentiation.
        """
        if deriv_order < 0 or deriv_order > 2 * self.m:
            raise UnsupportedOrder(
                f"profile derivative order {deriv_order} exceeds 2m = {2 * self.m}")
        arr = np.asarray(s, dtype=float)
        scalar = arr.ndim == 0
        arr = np.abs(np.atleast_1d(arr).astype(float))
        out = np.zeros(arr.shape)
        for coef, p, shift in _radial_deriv_terms(deriv_order):
            rp = get_profile(self.n + 2 * shift, self.m)
            rp._ensure_table()
            inside = arr <= rp.s_max
            vals = np.empty(arr.shape)
            if inside.any():
                vals[inside] = rp.values_fast(arr[inside])
            if (~inside).any():
                vals[~inside] = [rp._quad_scalar(x) for x in arr[~inside]]
            out += coef * arr ** p * vals if p else coef * vals
        return float(out[0]) if scalar else out

    def center_value(self) -> float:
        """f(0) in closed form from the moment integral of the integrand."""
        n, m = self.n, self.m
        return ((2.0 * math.pi) ** (-0.5 * n) * 2.0 ** (1.0 - 0.5 * n)
                * gamma(n / (2.0 * m)) / (2.0 * m * gamma(0.5 * n)))

    # -- persistence --------------------------------------------------------

    def dump_table(self, path):
        self._ensure_table()
        with open(path, "w", newline="") as fh:
            fh.write("# polyheat profile table v1\n")
            fh.write(f"# n={self.n} m={self.m} s_max={self.s_max!r} "
                     f"step={_TABLE_STEP!r} rho_max={self.rho_max!r}\n")
            fh.write("s,value\n")
            for s, v in zip(self.s_grid, self.values):
                fh.write(f"{float(s)!r},{float(v)!r}\n")

    @classmethod
    def load_table(cls, path) -> "RadialProfile":
        with open(path) as fh:
            header = fh.readline().strip()
            if header != "# polyheat profile table v1":
                raise ValueError(f"unrecognized profile table header: {header!r}")
            meta = dict(kv.split("=") for kv in fh.readline().strip("#\n ").split())
            fh.readline()
            data = np.loadtxt(fh, delimiter=",")
        rp = cls(int(meta["n"]), int(meta["m"]))
        rp.s_max = float(meta["s_max"])
        rp.s_grid = data[:, 0]
        rp.values = data[:, 1]
        if rp._log_table:
            rp._spline = CubicSpline(rp.s_grid, np.log(rp.values))
        else:
            rp._spline = CubicSpline(rp.s_grid, rp.values)
        return rp


@lru_cache(maxsize=8)
def _radial_deriv_terms(order: int):
    # d^k/ds^k f_n(s) as sum of coef * s^p * f_{n+2j}(s)
    terms = {(0, 0): 1.0}
    for _ in range(order):
        nxt: dict = {}
        for (p, j), c in terms.items():
            if p:
                nxt[(p - 1, j)] = nxt.get((p - 1, j), 0.0) + c * p
            nxt[(p + 1, j + 1)] = nxt.get((p + 1, j + 1), 0.0) - 2.0 * math.pi * c
        terms = nxt
    return tuple((c, p, j) for (p, j), c in sorted(terms.items()) if c != 0.0)


@lru_cache(maxsize=64)
def _g_spline(nu: float, zmax: float):
    # fine spline of the regularized Bessel factor, used only to assemble
    # profile tables quickly; absolute error ~1e-13
    zmax = max(zmax * 1.01, 1.0)
    grid = np.linspace(0.0, zmax, int(zmax / 1e-3) + 2)
    return CubicSpline(grid, regularized_j(nu, grid))


def _series_mp(n: int, m: int, s: float, digits: int = 13) -> float:
    """Profile by arbitrary-precision ascending series (far-tail table values).

    The alternating series loses ~0.22 s^2 digits to cancellation at m=1;
    working precision adapts until `digits` survive.
    """
    from mpmath import mp, mpf

    nu = 0.5 * n - 1.0
    dps = 22 + int(0.25 * s * s / max(1, 2 * m - 1))
    while True:
        with mp.workprec(int(dps * 3.33) + 10):
            ss = mpf(s)
            acc = mpf(0)
            peak = mpf(0)
            for r in range(m):
                term = (mp.gamma(mpf(n + 2 * r) / (2 * m)) * ss ** (2 * r)
                        * (-1) ** r / (mpf(4) ** r * mp.factorial(r)
                                       * mp.gamma(nu + r + 1)))
                k = r
                while True:
                    acc += term
                    if abs(term) > peak:
                        peak = abs(term)
                    ratio = (ss ** (2 * m) * (mpf(n + 2 * k) / (2 * m))
                             * (-1) ** m / (mpf(4) ** m))
                    for i in range(1, m + 1):
                        ratio /= (k + i) * (nu + k + i)
                    term *= ratio
                    k += m
                    if abs(term) < mpf(10) ** (-dps - 8) * max(abs(acc), peak * mpf(10) ** (-dps)):
                        break
                    if k > 100000:
                        raise ArithmeticError("profile series failed to converge")
            pref = (mpf(2) * mp.pi) ** (mpf(-n) / 2) * mpf(2) ** (1 - mpf(n) / 2) / (2 * m)
            # 2^{-nu} = 2^{1-n/2}
            result = pref * acc
            lost = float(mp.log10(peak / abs(result))) if result != 0 else dps
        if dps >= lost + digits + 4 or dps > 400:
            return float(result)
        dps = int(lost + digits + 10)


def profile_series_float(n: int, m: int, s: float) -> float:
    """Double-precision ascending series; independent cross-check for
    moderate s where cancellation stays benign."""
    nu = 0.5 * n - 1.0
    acc = 0.0
    for r in range(m):
        term = (gamma((n + 2 * r) / (2 * m)) * s ** (2 * r) * (-1.0) ** r
                / (4.0 ** r * math.factorial(r) * gamma(nu + r + 1)))
        k = r
        while True:
            acc += term
            ratio = (s ** (2 * m) * ((n + 2 * k) / (2.0 * m)) * (-1.0) ** m
                     / 4.0 ** m)
            for i in range(1, m + 1):
                ratio /= (k + i) * (nu + k + i)
            term *= ratio
            k += m
            if abs(term) < 1e-18 * max(abs(acc), 1e-280):
                break
            if k > 10000:
                raise ArithmeticError("series did not converge")
    return (2.0 * math.pi) ** (-0.5 * n) * 2.0 ** (1.0 - 0.5 * n) / (2 * m) * acc


_PROFILES: dict = {}


def get_profile(n: int, m: int) -> RadialProfile:
    """Shared registry of radial profiles keyed by (n, m)."""
    key = (int(n), int(m))
    rp = _PROFILES.get(key)
    if rp is None:
        rp = RadialProfile(*key)
        _PROFILES[key] = rp
    return rp


# -- kernel evaluation --------------------------------------------------------


def _eval_radial(nprime: int, m: int, r: np.ndarray, u: np.ndarray) -> np.ndarray:
    """K_{n'}(r, u) vectorized; exact 0 for u <= 0."""
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    shape = np.broadcast(r, u).shape
    out = np.zeros(shape)
    pos = np.broadcast_to(u > 0.0, shape)
    if not pos.any():
        return out
    rb = np.broadcast_to(r, shape)[pos]
    ub = np.broadcast_to(u, shape)[pos]
    rp = get_profile(nprime, m)
    with np.errstate(over="ignore", invalid="ignore"):
        s = rb * ub ** (-0.5 / m)
    s = np.where(np.isfinite(s), s, np.inf)
    vals = rp.values_fast(s)
    nz = vals != 0.0
    res = np.zeros(len(ub))
    if nz.any():
        with np.errstate(over="ignore"):
            res[nz] = vals[nz] * ub[nz] ** (-nprime / (2.0 * m))
    out[pos] = res
    return out


def _eval_radial_dt(nprime: int, m: int, r: np.ndarray, u: np.ndarray) -> np.ndarray:
    # d/dt K_{n'} = -(1/2mu) [ n' K_{n'} - 2 pi r^2 K_{n'+2} ]
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    shape = np.broadcast(r, u).shape
    out = np.zeros(shape)
    pos = np.broadcast_to(u > 0.0, shape)
    if not pos.any():
        return out
    rb = np.broadcast_to(r, shape)[pos]
    ub = np.broadcast_to(u, shape)[pos]
    a = _eval_radial(nprime, m, rb, ub)
    b = _eval_radial(nprime + 2, m, rb, ub)
    out[pos] = -(nprime * a - 2.0 * math.pi * rb * rb * b) / (2.0 * m * ub)
    return out


@lru_cache(maxsize=512)
def _alpha_terms(n: int, alpha: tuple):
    """d^alpha of K_n(z, u) as sum of coef * z^beta * K_{n+2j}(z, u)."""
    terms = {(tuple([0] * n), 0): 1.0}
    for axis, count in enumerate(alpha):
        for _ in range(count):
            nxt: dict = {}
            for (beta, j), c in terms.items():
                if beta[axis]:
                    b2 = list(beta)
                    b2[axis] -= 1
                    key = (tuple(b2), j)
                    nxt[key] = nxt.get(key, 0.0) + c * beta[axis]
                b3 = list(beta)
                b3[axis] += 1
                key = (tuple(b3), j + 1)
                nxt[key] = nxt.get(key, 0.0) - 2.0 * math.pi * c
            terms = nxt
    return tuple((c, beta, j) for (beta, j), c in sorted(terms.items()) if c != 0.0)


def eval_translate(n: int, m: int, z: np.ndarray, u: np.ndarray,
                   alpha=None, t_order: int = 0) -> np.ndarray:
    """d^alpha d_t^{t_order} K(z, u) for z of shape (..., n), vectorized.

    Workhorse for layer kernels and manufactured solutions; `alpha` beyond
    2m is supported (needed when boundary operators act on both kernel
    arguments).
    """
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    if alpha is None:
        alpha = (0,) * n
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n or any(a < 0 for a in alpha):
        raise ValueError(f"bad multi-index {alpha} for dimension {n}")
    if t_order not in (0, 1):
        raise UnsupportedOrder("time derivative order must be 0 or 1")
    r = np.sqrt(np.sum(z * z, axis=-1))
    base = _eval_radial_dt if t_order else _eval_radial
    out = np.zeros(np.broadcast(r, u).shape)
    for c, beta, j in _alpha_terms(n, alpha):
        mono = c
        for axis, p in enumerate(beta):
            if p:
                mono = mono * z[..., axis] ** p
        out = out + mono * base(n + 2 * j, m, r, u)
    if not np.all(np.isfinite(out)):
        raise SingularEvaluation("kernel derivative evaluated at its singularity")
    return out


# -- public pointwise API ------------------------------------------------------


def phi(params: KernelParams, point, t: float) -> float:
    """Kernel value K(x, t); exactly 0 for t <= 0.

    Inside the table range this is spline-backed; beyond it, direct
    quadrature (public accuracy path).
    """
    if t <= 0.0:
        return 0.0
    x = np.atleast_1d(np.asarray(point, dtype=float))
    if x.shape != (params.n,):
        raise ValueError(f"point must have {params.n} coordinates")
    r = float(np.sqrt(np.sum(x * x)))
    rp = get_profile(params.n, params.m)
    rp._ensure_table()
    s = r * t ** (-0.5 / params.m)
    if s <= rp.s_max:
        val = float(rp.values_fast(np.array([s]))[0])
    else:
        val = rp._quad_scalar(s)
    return val * t ** (-params.n / (2.0 * params.m))


def phi_values(params: KernelParams, points, t) -> np.ndarray:
    """Vectorized kernel values for points of shape (N, n) (or (N,) if n=1)."""
    pts = np.asarray(points, dtype=float)
    if params.n == 1 and pts.ndim == 1:
        pts = pts[:, None]
    r = np.sqrt(np.sum(pts * pts, axis=-1))
    return _eval_radial(params.n, params.m, r, np.asarray(t, dtype=float))


def phi_derivative(params: KernelParams, point, t: float, alpha,
                   t_order: int = 0) -> float:
    """Exact kernel derivative d^alpha d_t^{t_order} K(x, t).

    Contract guarantees |alpha| <= 2m and t_order <= 1; larger |alpha| is
    accepted (used internally when boundary operators compose).
    """
    x = np.atleast_1d(np.asarray(point, dtype=float))
    if x.shape != (params.n,):
        raise ValueError(f"point must have {params.n} coordinates")
    if t == 0.0 and float(np.sum(x * x)) == 0.0:
        raise SingularEvaluation("kernel derivative at (x, t) = (0, 0)")
    if t <= 0.0:
        return 0.0
    out = eval_translate(params.n, params.m, x[None, :], np.array([t]),
                         tuple(alpha), t_order)
    return float(out[0])


class TranslateField:
    """Caloric field K(x - z, t + dt0): exact solution used for manufactured
    data and as the fitting basis for caloric extension."""

    def __init__(self, params: KernelParams, z, dt0: float = 0.0, weight: float = 1.0):
        self.params = params
        self.z = np.atleast_1d(np.asarray(z, dtype=float))
        if self.z.shape != (params.n,):
            raise ValueError("translate center dimension mismatch")
        self.dt0 = float(dt0)
        self.weight = float(weight)

    def value(self, points, t):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1 and self.params.n == 1:
            pts = pts[:, None]
        z = pts - self.z
        u = np.asarray(t, dtype=float) + self.dt0
        return self.weight * eval_translate(self.params.n, self.params.m, z, u)

    def derivative(self, points, t, alpha, t_order: int = 0):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1 and self.params.n == 1:
            pts = pts[:, None]
        z = pts - self.z
        u = np.asarray(t, dtype=float) + self.dt0
        return self.weight * eval_translate(self.params.n, self.params.m, z, u,
                                            tuple(alpha), t_order)
