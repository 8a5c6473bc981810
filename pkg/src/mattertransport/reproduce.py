"""Sweeps behind the four redundancy panels (velocity CDFs, destination bands,
success probability, minimal redundancy).

Each ``panel_*`` function returns ``(header, rows)``; :func:`run_panel` writes
them as CSV and renders the matching SVG next to it.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from . import plotting
from .config import ExperimentConfig
from .estimator import (TransportTask, bound_minimal_redundancy, ceil_bound, destination_ci,
                        ensemble, success_from)
from .model import NoiseModel
from .redundancy import RedundancyConfig
from .reports import write_csv

PANELS = ("E", "F", "G", "H")

CDF_GRID = ((1, 1), (8, 1), (1, 8), (8, 8))  # (T, N)
BAND_MODULES = (1, 8)
BAND_PERIODS = tuple(range(1, 17))
SUCCESS_MODULES = tuple(range(1, 17))
SUCCESS_TOLERANCES = (0.05, 0.1, 0.2, 0.3)  # fractions of v_open
SWEEP_B = tuple(round(0.1 * i, 1) for i in range(1, 10))
# (epsilon as a fraction of v_open, p0)
REDUNDANCY_TARGETS = ((0.3, 0.9), (0.3, 0.8), (0.2, 0.8))
BOUND_P0 = 0.9
N_MAX = 64


def _run(cfg: ExperimentConfig, N, T, noise=None):
    return ensemble(cfg.profile, cfg.drag, noise or cfg.noise, RedundancyConfig(N, T),
                    cfg.replicates, cfg.seed, cfg.workers)


def panel_E(cfg: ExperimentConfig):
    v_open = cfg.v_open
    rows = []
    for T, N in CDF_GRID:
        x, p = _run(cfg, N, T).empirical_cdf()
        rows.extend((T, N, float(v / v_open), float(q)) for v, q in zip(x, p))
    return ["T", "N", "v_norm", "cdf"], rows


def panel_F(cfg: ExperimentConfig, level: float = 0.9):
    v_open = cfg.v_open
    rows = []
    for N in BAND_MODULES:
        for T in BAND_PERIODS:
            res = _run(cfg, N, T)
            lo, hi = destination_ci(res, level)
            rows.append((N, T, lo, hi, float(np.median(res.destinations)), v_open * T))
    return ["N", "T", "lower", "upper", "median", "nominal"], rows


def panel_G(cfg: ExperimentConfig):
    v_open = cfg.v_open
    rows = []
    for N in SUCCESS_MODULES:
        res = _run(cfg, N, 1)
        limit = 1.0 - cfg.b ** N
        for frac in SUCCESS_TOLERANCES:
            task = TransportTask.on_schedule(v_open, 1, frac * v_open)
            est = success_from(res, task)
            rows.append((N, frac * v_open, est.p, est.se, limit))
    return ["N", "epsilon", "p_success", "se", "limit"], rows


def panel_H(cfg: ExperimentConfig, b_values=SWEEP_B, targets=REDUNDANCY_TARGETS,
            n_max: int = N_MAX):
    v_open = cfg.v_open
    rows = []
    for b in b_values:
        noise = NoiseModel(b)
        tasks = [TransportTask.on_schedule(v_open, 1, eps * v_open, p0) for eps, p0 in targets]
        found = [None] * len(tasks)
        for n in range(1, n_max + 1):
            if all(f is not None for f in found):
                break
            res = _run(cfg, n, 1, noise)
            for idx, task in enumerate(tasks):
                if found[idx] is None and success_from(res, task).p >= task.p0:
                    found[idx] = n
        for task, n_emp in zip(tasks, found):
            bound = bound_minimal_redundancy(task, b)
            rows.append((b, task.epsilon, task.p0, n_emp, bound, ceil_bound(bound)))
    return ["b", "epsilon", "p0", "N_empirical", "bound", "bound_ceil"], rows


def _plot(panel, header, rows, cfg, path):
    if panel == "E":
        curves = {}
        for T, N in CDF_GRID:
            pick = [(v, q) for t, n, v, q in rows if (t, n) == (T, N)]
            curves[f"T={T}, N={N}"] = ([v for v, _ in pick], [q for _, q in pick])
        return plotting.velocity_cdfs(curves, path)
    if panel == "F":
        bands = {}
        for N in BAND_MODULES:
            pick = [r for r in rows if r[0] == N]
            bands[f"N={N}"] = ([r[2] for r in pick], [r[3] for r in pick])
        return plotting.destination_bands(list(BAND_PERIODS), bands,
                                          [cfg.v_open * T for T in BAND_PERIODS], path)
    if panel == "G":
        curves = {}
        for frac in SUCCESS_TOLERANCES:
            eps = frac * cfg.v_open
            curves[f"eps={eps:g}"] = [r[2] for r in rows if r[1] == eps]
        limit = [1.0 - cfg.b ** N for N in SUCCESS_MODULES]
        return plotting.success_curves(list(SUCCESS_MODULES), curves, limit, path)
    curves = {}
    for eps, p0 in REDUNDANCY_TARGETS:
        e = eps * cfg.v_open
        curves[f"eps={e:g}, p0={p0:g}"] = [
            np.nan if r[3] is None else r[3] for r in rows if r[1] == e and r[2] == p0]
    bound = [bound_minimal_redundancy(TransportTask.on_schedule(cfg.v_open, 1, 1.0, BOUND_P0), b)
             for b in SWEEP_B]
    return plotting.redundancy_curves(list(SWEEP_B), curves, bound, path)


def run_panel(panel: str, cfg: ExperimentConfig, out_dir) -> tuple:
    """Compute one panel and write ``fig3_<panel>.csv`` and ``fig3_<panel>.svg``."""
    panel = panel.upper()
    if panel not in PANELS:
        raise ValueError(f"unknown panel {panel!r}; choose from {', '.join(PANELS)}")
    header, rows = {"E": panel_E, "F": panel_F, "G": panel_G, "H": panel_H}[panel](cfg)
    out = Path(out_dir)
    meta = {"seed": cfg.seed, "replicates": cfg.replicates, "panel": panel,
            "b": "sweep" if panel == "H" else repr(cfg.b)}
    csv_path = write_csv(out / f"fig3_{panel}.csv", header, rows, meta)
    svg_path = _plot(panel, header, rows, cfg, out / f"fig3_{panel}.svg")
    return csv_path, svg_path
