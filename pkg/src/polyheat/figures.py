"""Optional figure rendering for the CLI report path.

Every function writes one PNG next to the delimited output and returns
its path.  The CSV files remain the authoritative artifacts; these are
conveniences for a quick look.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def kernel_profile_figure(s, vals, params, out: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(s, vals, lw=1.2)
    ax.axhline(0.0, color="0.8", lw=0.8, zorder=0)
    ax.set_xlabel("s")
    ax.set_ylabel("f(s)")
    ax.set_title(f"radial kernel profile, n={params.n}, m={params.m}")
    return _save(fig, out / "kernel_table.png")


def green_error_figure(rows, dim, out: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for region, color in (("interior", "tab:blue"), ("exterior", "tab:red")):
        errs = [r[-1] for r in rows if r[0] == region]
        ax.semilogy(range(len(errs)), np.maximum(errs, 1e-18), ".",
                    ms=4, color=color, label=region)
    ax.set_xlabel("probe index")
    ax.set_ylabel("relative error")
    ax.set_title("reproduction error inside, leakage outside")
    ax.legend()
    return _save(fig, out / "green_identity.png")


def jump_error_figure(rows, dim, out: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    idx = np.arange(len(rows))
    errs = np.maximum([r[-2] for r in rows], 1e-18)
    labels = [f"B{int(r[0])}" for r in rows]
    ax.bar(idx, errs, color="tab:blue")
    ax.set_yscale("log")
    ax.set_xticks(idx, labels)
    ax.set_ylabel("relative error")
    ax.set_title("extrapolated boundary jumps vs imposed traces")
    return _save(fig, out / "jump_relations.png")


def residual_sweep_figure(table, tau_res, out: Path) -> Path:
    lams = [row[0] for row in table]
    rels = [row[1] for row in table]
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.loglog(lams, np.maximum(rels, 1e-18), "o-", ms=3, lw=1.0)
    ax.axhline(tau_res, color="tab:red", lw=0.9, ls="--",
               label="compatibility threshold")
    ax.set_xlabel("regularization parameter")
    ax.set_ylabel("relative misfit")
    ax.set_title("extension fit misfit across the sweep")
    ax.legend()
    return _save(fig, out / "residual_sweep.png")


def reconstruction_figure(rec, out: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    x = rec.points[:, 0]
    pc = ax.pcolormesh(x, rec.times, rec.samples, shading="nearest",
                       cmap="viridis")
    fig.colorbar(pc, ax=ax, label="u")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title("reconstructed interior field")
    return _save(fig, out / "reconstruction.png")


def uniqueness_figure(rows, out: Path) -> Path:
    eps = np.array([r[0] for r in rows])
    sup = np.array([r[1] for r in rows])
    pos = eps > 0.0
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.loglog(eps[pos], np.maximum(sup[pos], 1e-18), "o-", lw=1.0)
    if (~pos).any():
        ax.set_title(f"noise amplification (sup|u| = {sup[~pos][0]:g} "
                     "at eps = 0)")
    else:
        ax.set_title("noise amplification")
    ax.set_xlabel("trace noise amplitude")
    ax.set_ylabel("sup |u|")
    return _save(fig, out / "uniqueness_sweep.png")
