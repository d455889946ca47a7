"""Composite Gauss-Legendre panel rules and barycentric panel interpolation."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = [
    "gauss_panels",
    "graded_edges",
    "PanelInterp",
    "richardson_extrapolate",
]


@lru_cache(maxsize=32)
def _leggauss(q: int):
    x, w = np.polynomial.legendre.leggauss(q)
    return x, w


@lru_cache(maxsize=64)
def _bary_weights(q: int) -> np.ndarray:
    # barycentric weights for the reference Gauss-Legendre nodes
    x, _ = _leggauss(q)
    w = np.ones(q)
    for i in range(q):
        w[i] = 1.0 / np.prod(x[i] - np.delete(x, i))
    return w


def gauss_panels(edges, q: int):
    """Composite q-node Gauss-Legendre rule over consecutive panels.

    Parameters
    ----------
    edges : array-like
        Strictly increasing panel boundaries, length >= 2.
    q : int
        Nodes per panel.

    Returns
    -------
    nodes, weights : ndarray
    """
    edges = np.asarray(edges, dtype=float)
    x, w = _leggauss(q)
    a = edges[:-1]
    h = np.diff(edges)
    nodes = (a[:, None] + 0.5 * h[:, None] * (x[None, :] + 1.0)).ravel()
    weights = (0.5 * h[:, None] * w[None, :]).ravel()
    return nodes, weights


def graded_edges(a: float, b: float, toward: float, resolve: float,
                 min_levels: int = 8, max_levels: int = 48) -> np.ndarray:
    """Panel edges on [a, b] geometrically refined (ratio 1/2) toward one end.

    `toward` must equal a or b; refinement continues until the smallest
    panel is below `resolve` (subject to the level bounds).
    """
    width = b - a
    if width <= 0:
        raise ValueError("graded_edges: empty interval")
    resolve = max(resolve, width * 2.0 ** (-max_levels))
    levels = min_levels
    while width * 2.0 ** (-levels) > resolve and levels < max_levels:
        levels += 1
    offs = width * 2.0 ** (-np.arange(levels + 1, dtype=float))
    if toward == a:
        edges = np.concatenate(([a], a + offs[::-1]))
    elif toward == b:
        edges = np.concatenate((b - offs, [b]))
    else:
        raise ValueError("graded_edges: `toward` must be an endpoint")
    edges[0], edges[-1] = a, b
    return edges


class PanelInterp:
    """Barycentric interpolation on a composite Gauss-Legendre grid.

    Values sampled at the nodes of `gauss_panels(edges, q)` can be
    evaluated anywhere inside [edges[0], edges[-1]]; interpolation is the
    degree q-1 polynomial of the panel containing the query point.
    """

    def __init__(self, edges, q: int):
        self.edges = np.asarray(edges, dtype=float)
        self.q = int(q)
        self.nodes, _ = gauss_panels(self.edges, self.q)

    def __call__(self, values, x):
        values = np.asarray(values, dtype=float)
        x = np.asarray(x, dtype=float)
        ref, bw = _leggauss(self.q)[0], _bary_weights(self.q)
        idx = np.clip(np.searchsorted(self.edges, x, side="right") - 1,
                      0, len(self.edges) - 2)
        a = self.edges[idx]
        h = self.edges[idx + 1] - a
        xi = 2.0 * (x - a) / h - 1.0
        vals = values.reshape(-1, self.q)[idx]
        diff = xi[..., None] - ref[None, :]
        hit = np.abs(diff) < 1e-14
        diff = np.where(hit, 1.0, diff)
        wgt = bw[None, :] / diff
        out = (wgt * vals).sum(-1) / wgt.sum(-1)
        anyhit = hit.any(-1)
        if anyhit.any():
            out = np.where(anyhit, (vals * hit).sum(-1), out)
        return out


def richardson_extrapolate(h, values, order: int = 2):
    """Neville-style extrapolation of f(h) -> f(0), expansion in powers of h.

    Parameters
    ----------
    h : array-like
        Decreasing step sizes.
    values : array-like
        f(h) estimates.
    order : int
        Number of leading powers (h, h^2, ...) eliminated.

    Returns
    -------
    estimate : float
    converged : bool
        Last two extrapolants agree to within 10x the apparent noise.
    table : ndarray
        Final extrapolation column.
    """
    h = np.asarray(h, dtype=float)
    v = np.asarray(values, dtype=float).copy()
    cols = [v.copy()]
    for p in range(1, order + 1):
        n = len(v) - 1
        if n < 1:
            break
        r = (h[:-1] / h[1:]) ** p
        v = (r * v[1:] - v[:-1]) / (r - 1.0)
        h = h[1:]
        cols.append(v.copy())
    last = cols[-1]
    if len(last) >= 2:
        tail = abs(last[-1] - last[-2])
        scale = max(abs(last[-1]), 1e-30)
        converged = tail <= 1e-3 * scale + 1e-12
    else:
        converged = False
    return float(last[-1]), bool(converged), last
