"""Experiment orchestration: grid fan-out, deterministic collation, CSV/JSON.

Every grid point is an independent pure task; the pool maps tasks in input
order and results are collated by index, so serial output is byte-stable and
parallel output is identical up to floating-point determinism of the same
code on the same inputs.
"""
from __future__ import annotations

import csv
import json
import os
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .ed import (bandwidth, floquet_operator, linear_fit, max_power,
                 stroboscopic_series)
from .integrable import (chain_observables, frequency_sweep, resonance_frequencies,
                         stroboscopic_series as integrable_series)
from .magnus import magnus_error
from .params import ChainSpec, DriveParams

SATURATION_FRACTION = 0.95  # W below this times 2pi/T counts as pre-saturation

_stamp_cache: str | None = None


def build_stamp() -> str:
    """git describe of the source checkout, else the package version."""
    global _stamp_cache
    if _stamp_cache is None:
        try:
            out = subprocess.run(
                ["git", "describe", "--always", "--dirty"],
                cwd=Path(__file__).resolve().parent, capture_output=True,
                text=True, timeout=10, check=True)
            _stamp_cache = out.stdout.strip() or f"qbattery-{__version__}"
        except Exception:
            _stamp_cache = f"qbattery-{__version__}"
    return _stamp_cache


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _resolve_workers(cfg: ExperimentConfig, override) -> int:
    if override is not None:
        return max(1, int(override))
    if cfg.workers and cfg.workers > 0:
        return cfg.workers
    return os.cpu_count() or 1


def _pmap(fn, args_list, workers: int):
    if workers <= 1 or len(args_list) <= 1:
        return [fn(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args_list))


def _drive(cfg: ExperimentConfig, omega: float) -> DriveParams:
    return DriveParams(h_z=cfg.h_z, J0=cfg.J0, h0=cfg.h0, omega=omega, N=cfg.N)


def omega_grid(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.omega_values is not None:
        return np.sort(np.asarray(cfg.omega_values, dtype=float))
    return np.linspace(cfg.omega_min, cfg.omega_max, cfg.omega_count)


# ---- per-point tasks (module level, so the process pool can pickle them)

def _sweep_point(args):
    h_z, J0, h0, N, omega, n, engine, boundary = args
    if engine == "integrable":
        rec = chain_observables(DriveParams(h_z, J0, h0, omega, N), n)
    else:
        spec = ChainSpec(DriveParams(h_z, J0, h0, omega, N), boundary)
        rec = stroboscopic_series(floquet_operator(spec), n)[-1]
    return omega, rec.E, rec.varB, rec.varC, rec.P, rec.bound_slack


def _bandwidth_point(args):
    h_z, J0, h0, N, omega, boundary = args
    spec = ChainSpec(DriveParams(h_z, J0, h0, omega, N), boundary)
    sys = floquet_operator(spec)
    return N, bandwidth(sys), 2 * np.pi / sys.T


def _power_point(args):
    h_z, J0, h0, N, omega, boundary, n_max, engine = args
    if engine == "integrable":
        best_n, best_p = 1, -np.inf
        for rec in integrable_series(DriveParams(h_z, J0, h0, omega, N), n_max):
            if rec.P > best_p:
                best_n, best_p = rec.n, rec.P
        return omega, N, best_n, best_p
    spec = ChainSpec(DriveParams(h_z, J0, h0, omega, N), boundary)
    n_star, p_star = max_power(floquet_operator(spec), n_max)
    return omega, N, n_star, p_star


def _magnus_point(args):
    h_z, J0, h0, N, T, order, boundary = args
    params = DriveParams(h_z, J0, h0, 2 * np.pi / T, N)
    return T, magnus_error(params, order, boundary=boundary)


# ---- experiment pipelines

def _run_sweep(cfg: ExperimentConfig, workers: int):
    grid = omega_grid(cfg)
    engines = ["integrable", "ed"] if cfg.engine == "both" else [cfg.engine]
    header = ["omega", "E", "varB", "varC", "P", "bound_slack",
              "n", "N", "h_z", "J0", "h0", "boundary", "engine", "stamp"]
    rows = []
    summary_extrema = {}
    for engine in engines:
        args = [(cfg.h_z, cfg.J0, cfg.h0, cfg.N, float(w), cfg.n, engine, cfg.boundary)
                for w in grid]
        points = _pmap(_sweep_point, args, workers)
        energies = [p[1] for p in points]
        ext = [points[i][0] for i in range(1, len(points) - 1)
               if (energies[i] - energies[i - 1]) * (energies[i + 1] - energies[i]) < 0]
        summary_extrema[engine] = ext
        for p in points:
            rows.append(list(p) + [cfg.n, cfg.N, cfg.h_z, cfg.J0, cfg.h0,
                                   cfg.boundary, engine, build_stamp()])
    lo, hi = float(grid[0]), float(grid[-1])
    summary = {
        "grid_points": int(grid.size),
        "extrema_omega": summary_extrema,
        "resonances_in_range": resonance_frequencies(cfg.h_z, lo, hi),
    }
    return header, rows, summary


def _run_trace(cfg: ExperimentConfig, workers: int):
    del workers  # a single trace is one task; the series itself is the loop
    engines = ["integrable", "ed"] if cfg.engine == "both" else [cfg.engine]
    header = ["n", "E", "P", "varB", "varC", "bound_slack",
              "omega", "N", "h_z", "J0", "h0", "boundary", "engine", "stamp"]
    rows = []
    for engine in engines:
        if engine == "integrable":
            series = integrable_series(_drive(cfg, cfg.omega), cfg.n_max)
        else:
            spec = ChainSpec(_drive(cfg, cfg.omega), cfg.boundary)
            series = stroboscopic_series(floquet_operator(spec), cfg.n_max)
        for rec in series:
            rows.append([rec.n, rec.E, rec.P, rec.varB, rec.varC, rec.bound_slack,
                         cfg.omega, cfg.N, cfg.h_z, cfg.J0, cfg.h0,
                         cfg.boundary, engine, build_stamp()])
    summary = {"engines": engines, "n_max": cfg.n_max}
    return header, rows, summary


def _run_bandwidth(cfg: ExperimentConfig, workers: int):
    header = ["N", "W", "two_pi_over_T",
              "omega", "h_z", "J0", "h0", "boundary", "engine", "stamp"]
    args = [(cfg.h_z, cfg.J0, cfg.h0, int(N), cfg.omega, cfg.boundary)
            for N in cfg.N_values]
    points = _pmap(_bandwidth_point, args, workers)
    rows = [list(p) + [cfg.omega, cfg.h_z, cfg.J0, cfg.h0, cfg.boundary,
                       "ed", build_stamp()] for p in points]
    branch = points[0][2]
    pre = [(N, W) for N, W, _ in points if W <= SATURATION_FRACTION * branch]
    summary: dict = {"branch_width": branch, "pre_saturation_points": len(pre)}
    if len(pre) >= 2:
        slope, intercept, ss_res, r2 = linear_fit([p[0] for p in pre],
                                                  [p[1] for p in pre])
        summary["fit"] = {"slope": slope, "intercept": intercept,
                          "residual": ss_res, "r_squared": r2}
    return header, rows, summary


def _run_power(cfg: ExperimentConfig, workers: int):
    omegas = cfg.omega_values if cfg.omega_values else [cfg.omega]
    header = ["omega", "N", "n_star", "P_star",
              "h_z", "J0", "h0", "boundary", "engine", "stamp"]
    engine = "integrable" if cfg.engine == "integrable" else "ed"
    args = [(cfg.h_z, cfg.J0, cfg.h0, int(N), float(w), cfg.boundary, cfg.n_max, engine)
            for w in omegas for N in cfg.N_values]
    points = _pmap(_power_point, args, workers)
    rows = [list(p) + [cfg.h_z, cfg.J0, cfg.h0, cfg.boundary, engine, build_stamp()]
            for p in points]
    fits = []
    for w in omegas:
        mine = [(N, p_star) for omega, N, _, p_star in points if omega == float(w)]
        slope, _, ss_res, _ = linear_fit(np.log([m[0] for m in mine]),
                                         np.log([m[1] for m in mine]))
        fits.append({"omega": float(w), "exponent": slope, "residual": ss_res})
    return header, rows, {"fits": fits}


def _run_magnus(cfg: ExperimentConfig, workers: int):
    ladder = sorted(cfg.T_values, reverse=True)
    header = ["T", "rel_error", "order",
              "N", "h_z", "J0", "h0", "boundary", "engine", "stamp"]
    args = [(cfg.h_z, cfg.J0, cfg.h0, cfg.N, float(T), cfg.order, cfg.boundary)
            for T in ladder]
    points = _pmap(_magnus_point, args, workers)
    rows = [list(p) + [cfg.order, cfg.N, cfg.h_z, cfg.J0, cfg.h0,
                       cfg.boundary, "ed", build_stamp()] for p in points]
    errors = [p[1] for p in points]
    ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)
              if errors[i + 1] > 0]
    return header, rows, {"order": cfg.order, "ladder_T": ladder,
                          "error_ratios": ratios}


_PIPELINES = {
    "sweep-frequency": _run_sweep,
    "stroboscopic-trace": _run_trace,
    "bandwidth-scan": _run_bandwidth,
    "power-scaling": _run_power,
    "magnus-check": _run_magnus,
}


def run(cfg: ExperimentConfig, out=None, workers=None):
    """Execute one experiment; returns (csv_path, json_path)."""
    pipeline = _PIPELINES[cfg.experiment]
    header, rows, summary = pipeline(cfg, _resolve_workers(cfg, workers))
    out_path = Path(out if out is not None else (cfg.out or f"{cfg.experiment}.csv"))
    json_path = out_path.with_suffix(".json")
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
    echo = cfg.raw if cfg.raw else {
        k: v for k, v in asdict(cfg).items() if k != "raw" and v is not None}
    sidecar = {"config": echo, "summary": summary, "stamp": build_stamp()}
    with open(json_path, "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out_path, json_path
