"""Batch front-end: strict config files in, CSV/JSON reports out.

Subcommand `run` executes one named scenario (kernel tables, identity
verification, lateral-data solvability, noise sweeps); `bench` times the
evaluation hot spots.  All randomness flows through one seeded generator
recorded in the report, and the CSV artifacts are byte-reproducible for
a fixed config and seed (bench timings excepted, by nature).
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import logging
import math
import re
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .cauchy import (
    FitConfig,
    benchmark_problem,
    collocation_cloud,
    make_basis,
    reconstruct,
    solvability,
    uniqueness_experiment,
)
from .geometry import Disk, Interval, Rectangle, build_cylinder
from .kernel import KernelParams, TranslateField, get_profile
from .potentials import FieldSum, LayerPotential, representation_terms, trace_callables, trace_jump

__all__ = [
    "RunConfig",
    "ConfigError",
    "CapabilityError",
    "parse_config",
    "parse_config_text",
    "config_text",
    "main",
]

log = logging.getLogger("polyheat")

SCENARIOS = (
    "kernel-table",
    "verify-green",
    "verify-jumps",
    "solve-cauchy",
    "uniqueness-sweep",
)
SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Malformed or rejected run configuration."""


class CapabilityError(ValueError):
    """Requested parameters outside the supported ranges."""


@dataclass
class RunConfig:
    """Typed mirror of the flat key-value config file."""

    scenario: str
    seed: int = 0
    out_dir: str = "."
    figures: bool = False
    fail_on_incompatible: bool = False
    n: int = 1
    m: int = 1
    shape: str = "interval"
    bounds: tuple = (0.0, 1.0)
    patch: str = "left"
    horizon: float = 1.0
    extension_depth: float = 1.0
    n_space: int = 24
    n_time: int = 96
    s_max: float = 12.0
    s_count: int = 241
    basis_sizes: tuple = (32, 64, 128)
    n_delta: int = 8
    delta_range: tuple = (0.02, 0.8)
    src_distance: float = None
    lambdas: tuple = tuple(np.logspace(-14.0, -2.0, 25))
    tau_res: float = 1e-3
    benchmark: str = "compatible"
    noise_eps: float = 0.0
    eps_list: tuple = (0.0, 1e-6, 1e-4, 1e-2)
    fixed_lambda: float = 1e-6
    bench_batch: int = 1000000
    bench_direct_batch: int = 2000
    bench_repeats: int = 5
    bench_assembly_size: int = 128
    bench_assembly_points: int = 4096


# config keys, grouped by section; every key optional except run.scenario
_SCHEMA = {
    "run": ("scenario", "seed", "out_dir", "figures", "fail_on_incompatible"),
    "kernel": ("n", "m"),
    "domain": ("shape", "bounds", "patch", "horizon", "extension_depth"),
    "grid": ("n_space", "n_time", "s_max", "s_count"),
    "fit": ("basis_sizes", "n_delta", "delta_range", "src_distance",
            "lambda_sweep", "tau_res"),
    "data": ("benchmark", "noise_eps", "eps_list", "fixed_lambda"),
    "bench": ("batch", "direct_batch", "repeats", "assembly_size",
              "assembly_points"),
}

_KEYMAP = {
    ("run", "scenario"): "scenario",
    ("run", "seed"): "seed",
    ("run", "out_dir"): "out_dir",
    ("run", "figures"): "figures",
    ("run", "fail_on_incompatible"): "fail_on_incompatible",
    ("kernel", "n"): "n",
    ("kernel", "m"): "m",
    ("domain", "shape"): "shape",
    ("domain", "bounds"): "bounds",
    ("domain", "patch"): "patch",
    ("domain", "horizon"): "horizon",
    ("domain", "extension_depth"): "extension_depth",
    ("grid", "n_space"): "n_space",
    ("grid", "n_time"): "n_time",
    ("grid", "s_max"): "s_max",
    ("grid", "s_count"): "s_count",
    ("fit", "basis_sizes"): "basis_sizes",
    ("fit", "n_delta"): "n_delta",
    ("fit", "delta_range"): "delta_range",
    ("fit", "src_distance"): "src_distance",
    ("fit", "lambda_sweep"): "lambdas",
    ("fit", "tau_res"): "tau_res",
    ("data", "benchmark"): "benchmark",
    ("data", "noise_eps"): "noise_eps",
    ("data", "eps_list"): "eps_list",
    ("data", "fixed_lambda"): "fixed_lambda",
    ("bench", "batch"): "bench_batch",
    ("bench", "direct_batch"): "bench_direct_batch",
    ("bench", "repeats"): "bench_repeats",
    ("bench", "assembly_size"): "bench_assembly_size",
    ("bench", "assembly_points"): "bench_assembly_points",
}


def _find_line(text: str, section: str, key: str) -> int:
    insec = False
    for no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("["):
            insec = stripped == f"[{section}]"
        elif insec and re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
            return no
    return 0


def _parse_value(field: str, raw: str):
    raw = raw.strip()
    try:
        if field in ("seed", "n", "m", "n_space", "n_time", "s_count",
                     "n_delta", "bench_batch", "bench_direct_batch",
                     "bench_repeats", "bench_assembly_size",
                     "bench_assembly_points"):
            return int(raw)
        if field in ("horizon", "extension_depth", "s_max", "tau_res",
                     "noise_eps", "fixed_lambda"):
            return float(raw)
        if field == "src_distance":
            return None if raw == "" else float(raw)
        if field in ("figures", "fail_on_incompatible"):
            if raw.lower() in ("true", "yes", "on", "1"):
                return True
            if raw.lower() in ("false", "no", "off", "0"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if field in ("bounds", "delta_range", "eps_list"):
            return tuple(float(v) for v in raw.split(","))
        if field == "basis_sizes":
            return tuple(int(v) for v in raw.split(","))
        if field == "lambdas":
            if raw.startswith("logspace:"):
                lo, hi, count = raw[len("logspace:"):].split(",")
                return tuple(np.logspace(float(lo), float(hi), int(count)))
            return tuple(float(v) for v in raw.split(","))
        return raw
    except ValueError as exc:
        raise ValueError(str(exc)) from None


def parse_config_text(text: str) -> RunConfig:
    """Strictly parse config text; unknown sections or keys are errors."""
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",),
                                   inline_comment_prefixes=("#",))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    values = {}
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in _SCHEMA[section]:
                line = _find_line(text, section, key)
                raise ConfigError(
                    f"unknown key {key!r} in [{section}] (line {line})")
            field = _KEYMAP[section, key]
            try:
                values[field] = _parse_value(field, raw)
            except ValueError as exc:
                line = _find_line(text, section, key)
                raise ConfigError(f"bad value for {key!r} in [{section}] "
                                  f"(line {line}): {exc}") from None
    if "scenario" not in values:
        raise ConfigError("missing required key 'scenario' in [run]")
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def parse_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text)


def _validate(cfg: RunConfig):
    if cfg.scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {cfg.scenario!r}; "
                          f"choose from {', '.join(SCENARIOS)}")
    if cfg.shape not in ("interval", "disk", "rectangle"):
        raise ConfigError(f"unknown domain shape {cfg.shape!r}")
    want = {"interval": 2, "disk": 3, "rectangle": 4}[cfg.shape]
    if len(cfg.bounds) != want:
        raise ConfigError(f"shape {cfg.shape!r} needs {want} bounds values, "
                          f"got {len(cfg.bounds)}")
    if cfg.horizon <= 0.0:
        raise ConfigError("horizon must be positive")
    if cfg.seed < 0:
        raise ConfigError("seed must be a nonnegative integer")
    if cfg.s_count < 2 or cfg.s_max <= 0.0:
        raise ConfigError("kernel table needs s_max > 0 and s_count >= 2")
    if any(k <= 0 for k in cfg.basis_sizes) or cfg.n_delta <= 0:
        raise ConfigError("basis sizes and n_delta must be positive")
    if len(cfg.delta_range) != 2 or cfg.delta_range[0] <= 0.0 \
            or cfg.delta_range[0] > cfg.delta_range[1]:
        raise ConfigError("delta_range must be two increasing positive values")
    if any(l < 0 for l in cfg.lambdas) or not cfg.lambdas:
        raise ConfigError("lambda_sweep must be nonempty and nonnegative")
    if cfg.benchmark not in ("compatible", "extension-source", "incompatible"):
        raise ConfigError(f"unknown benchmark kind {cfg.benchmark!r}")


def config_text(cfg: RunConfig) -> str:
    """Canonical config rendering; parsing it back reproduces `cfg`."""
    def fmt(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, tuple):
            return ",".join(fmt(x) for x in v)
        if isinstance(v, float):
            return repr(float(v))
        if v is None:
            return ""
        return str(v)

    out = io.StringIO()
    for section, keys in _SCHEMA.items():
        out.write(f"[{section}]\n")
        for key in keys:
            out.write(f"{key} = {fmt(getattr(cfg, _KEYMAP[section, key]))}\n")
        out.write("\n")
    return out.getvalue()


# -- artifact writers --------------------------------------------------------


def _csv_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_csv_cell(v) for v in row) + "\n")
    log.info("wrote %s", path)


def _json_ready(obj):
    if isinstance(obj, dict):
        return {str(k): _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj.tolist()]
    return obj


def _write_report(out: Path, cfg: RunConfig, results: dict, artifacts: list):
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": "polyheat",
        "scenario": cfg.scenario,
        "seed": cfg.seed,
        "config_ini": config_text(cfg),
        "results": _json_ready(results),
        "artifacts": sorted(str(a) for a in artifacts),
    }
    path = out / "report.json"
    with open(path, "w", newline="\n") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    log.info("wrote %s", path)
    return path


# -- scenario plumbing -------------------------------------------------------


def _domain(cfg: RunConfig):
    b = cfg.bounds
    if cfg.shape == "interval":
        return Interval(b[0], b[1])
    if cfg.shape == "disk":
        return Disk([b[0], b[1]], b[2])
    return Rectangle([b[0], b[1]], [b[2], b[3]])


def _params(cfg: RunConfig) -> KernelParams:
    try:
        return KernelParams(cfg.n, cfg.m)
    except ValueError as exc:
        raise CapabilityError(str(exc)) from None


def _fit_config(cfg: RunConfig) -> FitConfig:
    return FitConfig(basis_sizes=cfg.basis_sizes, n_delta=cfg.n_delta,
                     delta_range=cfg.delta_range,
                     src_distance=cfg.src_distance,
                     lambdas=cfg.lambdas, tau_res=cfg.tau_res)


def _scenario_kernel_table(cfg: RunConfig, out: Path):
    params = _params(cfg)
    prof = get_profile(params.n, params.m)
    s = np.linspace(0.0, cfg.s_max, cfg.s_count)
    vals = prof.profile(s)
    dvals = prof.profile(s, 1)
    _write_csv(out / "kernel_table.csv", ["s", "phi", "dphi"],
               zip(s, vals, dvals))
    results = {
        "n": params.n, "m": params.m,
        "s_max": cfg.s_max, "rows": cfg.s_count,
        "phi_at_zero": prof.center_value(),
        "max_abs": float(np.max(np.abs(vals))),
    }
    arts = ["kernel_table.csv"]
    if cfg.figures:
        from .figures import kernel_profile_figure
        arts.append(kernel_profile_figure(s, vals, params, out).name)
    return results, arts, 0


def _green_probes(cfg: RunConfig, dom):
    """About n_space interior probe points plus an exterior ring.

    The volume rule is only a node generator here; it is subsampled
    (fixed seed, independent of the run seed) so the identity check
    costs probes, not a full quadrature grid."""
    pts = dom.volume_grid(dom.diameter() / 6.0).points
    want = max(4, cfg.n_space)
    if len(pts) > want:
        idx = np.random.default_rng(0).choice(len(pts), want, replace=False)
        pts = pts[np.sort(idx)]
    outer = dom.exterior_sources(8, 0.3 * dom.diameter())
    return pts, outer


def _scenario_verify_green(cfg: RunConfig, out: Path):
    params = _params(cfg)
    if params.n > 2:
        raise CapabilityError("identity verification supports n in {1, 2}")
    dom = _domain(cfg)
    center = dom.exterior_sources(1, 0.75 * dom.diameter())[0]
    u = TranslateField(params, center, dt0=0.3 * cfg.horizon)
    traces = trace_callables(params, dom, u)
    rep = representation_terms(params, dom, traces,
                               initial=lambda y: u.value(y, 0.0))
    inner, outer = _green_probes(cfg, dom)
    times = [0.25 * cfg.horizon, 0.6 * cfg.horizon, cfg.horizon]
    sup_u = max(float(np.max(np.abs(u.value(inner, t)))) for t in times)
    rows, int_max, ext_max = [], 0.0, 0.0
    for t in times:
        got, want = rep.value(inner, t), u.value(inner, t)
        err = np.abs(got - want) / sup_u
        int_max = max(int_max, float(np.max(err)))
        rows += [("interior", *x, t, w, g, e)
                 for x, w, g, e in zip(inner, want, got, err)]
        got = rep.value(outer, t)
        err = np.abs(got) / sup_u
        ext_max = max(ext_max, float(np.max(err)))
        rows += [("exterior", *x, t, 0.0, g, e)
                 for x, g, e in zip(outer, got, err)]
    coords = ["x"] if cfg.n == 1 else ["x", "y"]
    _write_csv(out / "green_identity.csv",
               ["region", *coords, "t", "exact", "value", "rel_err"], rows)
    results = {"interior_max_rel": int_max, "exterior_max_rel": ext_max,
               "sup_u": sup_u, "source": [float(c) for c in center]}
    arts = ["green_identity.csv"]
    if cfg.figures:
        from .figures import green_error_figure
        arts.append(green_error_figure(rows, cfg.n, out).name)
    return results, arts, 0


def _scenario_verify_jumps(cfg: RunConfig, out: Path):
    params = _params(cfg)
    if not (params.n == 1 or (params.n == 2 and params.m == 1)):
        raise CapabilityError(
            "jump verification supports n=1 (any m) or n=2 with m=1")
    dom = _domain(cfg)
    if params.n == 2 and not isinstance(dom, Disk):
        raise CapabilityError("jump verification in the plane runs on a disk")
    center = dom.exterior_sources(1, 0.75 * dom.diameter())[0]
    fld = TranslateField(params, center, dt0=0.3 * cfg.horizon)
    traces = trace_callables(params, dom, fld)
    sign = (-1.0) ** (params.m + 1)
    layers = FieldSum(
        [LayerPotential(params, dom, 2 * params.m - 1 - j, g)
         for j, g in enumerate(traces)],
        [sign] * (2 * params.m))
    if params.n == 1:
        nodes = [(dom.boundary_point("left"), np.array([-1.0])),
                 (dom.boundary_point("right"), np.array([1.0]))]
    else:
        nodes = [(np.array([math.cos(th), math.sin(th)]),) * 2
                 for th in (0.0, 2.0, 4.0)]
        nodes = [(dom.center + dom.radius * p, nv) for p, nv in nodes]
    t = 0.6 * cfg.horizon
    rows, worst = [], 0.0
    for y0, nu in nodes:
        for i in range(2 * params.m):
            gap, _, ok = trace_jump(params, dom, layers, i, y0, nu, t)
            want = traces[i](y0[None, :], t)[0]
            rel = abs(gap - want) / abs(want)
            worst = max(worst, rel)
            rows.append((i, *y0, gap, want, rel, bool(ok)))
    coords = ["x"] if cfg.n == 1 else ["x", "y"]
    _write_csv(out / "jump_relations.csv",
               ["trace_index", *coords, "gap", "expected", "rel_err",
                "extrapolation_converged"], rows)
    results = {"max_rel_err": worst, "probe_time": t,
               "nodes": len(nodes), "trace_count": 2 * params.m}
    arts = ["jump_relations.csv"]
    if cfg.figures:
        from .figures import jump_error_figure
        arts.append(jump_error_figure(rows, cfg.n, out).name)
    return results, arts, 0


def _scenario_solve_cauchy(cfg: RunConfig, out: Path):
    params = _params(cfg)
    if params.n != 1 or params.m > 2:
        raise CapabilityError(
            "bundled lateral-data problems run with n=1 and m in {1, 2}")
    data, exact = benchmark_problem(params.m, cfg.benchmark)
    if cfg.noise_eps > 0.0:
        data = data.perturbed(cfg.noise_eps, np.random.default_rng(cfg.seed))
    report = solvability(data, _fit_config(cfg))
    diag = report.diagnostics
    _write_csv(out / "residual_sweep.csv", ["lambda", "residual_rel"],
               diag["residual_table"])
    _write_csv(out / "residual_by_size.csv",
               ["basis_size", "residual_rel", "lambda", "condition"],
               [(k, diag["residual_by_size"][k], diag["lambda_by_size"][k],
                 diag["condition_by_size"][k])
                for k in sorted(diag["residual_by_size"])])
    arts = ["residual_sweep.csv", "residual_by_size.csv"]
    results = {
        "benchmark": cfg.benchmark,
        "noise_eps": cfg.noise_eps,
        "verdict": report.verdict,
        "residual_rel": report.residual_rel,
        "lambda": report.lam,
        "basis_size": report.basis_size,
        "tau_res": report.tau_res,
        "degenerate": diag["degenerate"],
        "exterior_rms": diag["exterior_rms"],
        "interior_rms": diag["interior_rms"],
        "residual_by_size": diag["residual_by_size"],
        "data_norm": diag["data_norm"],
    }
    rec = None
    if report.verdict == "compatible":
        rec = reconstruct(data, report, exact=exact)
        rows = []
        for i, t in enumerate(rec.times):
            for j, x in enumerate(rec.points[:, 0]):
                row = [t, x, rec.samples[i, j]]
                if exact is not None:
                    want = float(exact.value(rec.points[j:j + 1], float(t))[0])
                    row += [want, abs(rec.samples[i, j] - want)]
                rows.append(row)
        header = ["t", "x", "u"] + ([] if exact is None
                                    else ["exact", "abs_err"])
        _write_csv(out / "reconstruction.csv", header, rows)
        arts.append("reconstruction.csv")
        results["reconstruction"] = {
            "sup_error": rec.sup_error,
            "rel_l2_error": rec.rel_l2_error,
            "points": len(rec.points), "times": len(rec.times),
        }
    if cfg.figures:
        from .figures import reconstruction_figure, residual_sweep_figure
        arts.append(residual_sweep_figure(diag["residual_table"],
                                          report.tau_res, out).name)
        if rec is not None:
            arts.append(reconstruction_figure(rec, out).name)
    code = 1 if (cfg.fail_on_incompatible
                 and report.verdict == "incompatible") else 0
    return results, arts, code


def _scenario_uniqueness(cfg: RunConfig, out: Path):
    params = _params(cfg)
    if params.n != 1 or params.m > 2:
        raise CapabilityError("noise sweeps run with n=1 and m in {1, 2}")
    dom = _domain(cfg)
    spec = build_cylinder(dom, cfg.horizon, patch=cfg.patch,
                          depth=cfg.extension_depth)
    rows = []
    for eps in cfg.eps_list:
        sup = uniqueness_experiment(spec, params.m, eps,
                                    lam=cfg.fixed_lambda,
                                    config=_fit_config(cfg),
                                    seed=cfg.seed, n_time=cfg.n_time)
        rows.append((eps, sup))
        log.info("eps=%g sup|u|=%g", eps, sup)
    _write_csv(out / "uniqueness_sweep.csv", ["eps", "sup_u"], rows)
    sups = [r[1] for r in rows]
    results = {
        "fixed_lambda": cfg.fixed_lambda,
        "eps": list(cfg.eps_list),
        "sup_u": sups,
        "monotone": all(a <= b for a, b in zip(sups, sups[1:])),
    }
    arts = ["uniqueness_sweep.csv"]
    if cfg.figures:
        from .figures import uniqueness_figure
        arts.append(uniqueness_figure(rows, out).name)
    return results, arts, 0


_RUNNERS = {
    "kernel-table": _scenario_kernel_table,
    "verify-green": _scenario_verify_green,
    "verify-jumps": _scenario_verify_jumps,
    "solve-cauchy": _scenario_solve_cauchy,
    "uniqueness-sweep": _scenario_uniqueness,
}


def _timed(fn, repeats: int):
    spans = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        spans.append(time.perf_counter() - t0)
    spans = np.asarray(spans)
    return out, float(np.median(spans)), float(np.percentile(spans, 95.0))


def run_bench(cfg: RunConfig, out: Path):
    """Timing rows for kernel evaluation, layer sweeps and assembly."""
    params = _params(cfg)
    rng = np.random.default_rng(cfg.seed)
    prof = get_profile(params.n, params.m)
    prof.profile(0.5)  # build the table outside the timed region
    rows = []

    s_big = rng.uniform(0.0, cfg.s_max, cfg.bench_batch)
    _, med, p95 = _timed(lambda: prof.profile(s_big), cfg.bench_repeats)
    table_pp = med / cfg.bench_batch * 1e6
    rows.append(("kernel-table-backed", cfg.bench_batch, cfg.bench_repeats,
                 med, p95, table_pp, ""))

    s_small = rng.uniform(0.0, cfg.s_max, cfg.bench_direct_batch)
    _, med, p95 = _timed(lambda: [prof._quad_scalar(x) for x in s_small],
                         max(1, cfg.bench_repeats // 2))
    direct_pp = med / cfg.bench_direct_batch * 1e6
    rows.append(("kernel-direct-quadrature", cfg.bench_direct_batch,
                 max(1, cfg.bench_repeats // 2), med, p95, direct_pp,
                 direct_pp / table_pp))

    if params.n <= 2:
        dom = _domain(cfg) if params.n == cfg.n else Interval(0.0, 1.0)
        dens = lambda y, tau: np.full(len(y), math.sin(tau) + 1.5)
        layer = LayerPotential(params, dom, 2 * params.m - 1, dens)
        pts = dom.exterior_sources(cfg.n_space, 0.4 * dom.diameter())
        def sweep():
            return [layer.value(pts, t)
                    for t in (0.3 * cfg.horizon, cfg.horizon)]
        sweep()  # warm the quadrature caches outside the timed region
        _, med, p95 = _timed(sweep, cfg.bench_repeats)
        batch = 2 * len(pts)
        rows.append(("layer-target-sweep", batch, cfg.bench_repeats, med,
                     p95, med / batch * 1e6, ""))

    spec = build_cylinder(Interval(0.0, 1.0), cfg.horizon, patch="left")
    side = max(8, int(round(math.sqrt(cfg.bench_assembly_points))))
    fit = FitConfig(colloc_space=side, colloc_time=side)
    cloud = collocation_cloud(spec, fit)
    basis = make_basis(spec, min(params.m, 2), cfg.bench_assembly_size, fit)
    npts = len(cloud.points) * len(cloud.times)
    basis.design_matrix(cloud.points[:2], cloud.times[:2])
    _, med, p95 = _timed(
        lambda: basis.design_matrix(cloud.points, cloud.times),
        cfg.bench_repeats)
    rows.append(("collocation-assembly", npts, cfg.bench_repeats, med, p95,
                 med / npts * 1e6, ""))

    _write_csv(out / "bench.csv",
               ["task", "batch", "repeats", "median_s", "p95_s",
                "per_point_us", "speedup_vs_direct"], rows)
    results = {r[0]: {"batch": r[1], "median_s": r[3], "p95_s": r[4]}
               for r in rows}
    return results, ["bench.csv"], 0


def _execute(cfg: RunConfig, command: str) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    if command == "bench":
        results, artifacts, code = run_bench(cfg, out)
    else:
        results, artifacts, code = _RUNNERS[cfg.scenario](cfg, out)
    log.info("scenario %s finished in %.1fs",
             cfg.scenario if command == "run" else "bench",
             time.perf_counter() - t0)
    _write_report(out, cfg, results, artifacts)
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="polyheat",
        description="Kernel tables, identity checks and lateral-data "
                    "solvability runs for the polyharmonic heat operator.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "execute the scenario named in the config"),
                        ("bench", "time kernel/potential/assembly hot spots")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="path to the run configuration file")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="RNG seed (overrides config)")
        p.add_argument("--verbose", action="store_true",
                       help="progress logging to stderr")
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(message)s",
                        level=logging.INFO if args.verbose else logging.WARNING)
    try:
        cfg = parse_config(args.config)
        if args.out is not None:
            cfg.out_dir = args.out
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed must be a nonnegative integer")
            cfg.seed = args.seed
        return _execute(cfg, args.command)
    except ConfigError as exc:
        print(f"polyheat: config error: {exc}", file=sys.stderr)
        return 2
    except CapabilityError as exc:
        print(f"polyheat: unsupported request: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
