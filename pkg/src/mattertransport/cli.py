"""Command-line entry point.

Subcommands::

    sim --config <path> [--out DIR]
    reproduce-fig3 --panel E|F|G|H [--config <path>] [--out DIR]
    terrain --rows R --cols C --rg RG --seed S --out DIR
    fit-b --log <csv> [--out PATH]

The default output directory comes from ``$MATTERTRANSPORT_OUT`` or
``./results``.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import plotting, reproduce
from .config import ConfigError, ExperimentConfig
from .estimator import (bound_minimal_redundancy, destination_ci, ensemble, estimate_cs,
                        success_from)
from .redundancy import RedundancyConfig
from .reports import write_csv, write_json
from .terrain import ContactLog, estimate_b, generate_terrain, save_terrain

log = logging.getLogger("mattertransport")


def cmd_sim(cfg: ExperimentConfig, out_dir: Path) -> dict:
    """Run the (N, T) grid; write samples.csv, summary.json and cdf.svg."""
    v_open = cfg.v_open
    b = cfg.b
    c_s = estimate_cs(cfg.profile, cfg.drag, b, seed=cfg.seed) if cfg.noise.enabled else v_open
    rows = []
    runs = []
    curves = {}
    for N in cfg.N:
        for T in cfg.T:
            res = ensemble(cfg.profile, cfg.drag, cfg.noise, RedundancyConfig(N, T),
                           cfg.replicates, cfg.seed, cfg.workers)
            rows.extend((r, N, T, float(v), float(T * v)) for r, v in enumerate(res.samples))
            lo, hi = destination_ci(res, cfg.ci_level)
            entry = {
                "N": N,
                "T": T,
                "mean_v_hat": res.mean(),
                "var_v_hat": res.variance(),
                "se_v_hat": res.standard_error(),
                "ci_level": cfg.ci_level,
                "ci_D_hat": [lo, hi],
                "analytic_mean_v_hat": (1.0 - b ** N) * c_s,
            }
            if cfg.task is not None and cfg.task.T == T:
                est = success_from(res, cfg.task)
                entry["success_probability"] = est.p
                entry["success_se"] = est.se
            runs.append(entry)
            x, p = res.empirical_cdf()
            curves[f"N={N}, T={T}"] = (x / v_open, p)
            log.info("N=%d T=%d mean v_hat=%.6g", N, T, entry["mean_v_hat"])

    summary = {
        "seed": cfg.seed,
        "replicates": cfg.replicates,
        "v_open": v_open,
        "b": b,
        "C_s": c_s,
        "config": cfg.to_dict(),
        "runs": runs,
    }
    if cfg.task is not None:
        summary["bound_minimal_redundancy"] = bound_minimal_redundancy(cfg.task, b)
    write_csv(out_dir / "samples.csv", ["replicate", "N", "T", "v_hat", "D_hat"], rows,
              {"seed": cfg.seed, "replicates": cfg.replicates})
    write_json(out_dir / "summary.json", summary)
    plotting.velocity_cdfs(curves, out_dir / "cdf.svg")
    return summary


def cmd_reproduce(panel: str, cfg: ExperimentConfig, out_dir: Path):
    return reproduce.run_panel(panel, cfg, out_dir)


def cmd_terrain(rows: int, cols: int, target_rg: float, seed: int, out_dir: Path,
                block_side: float = 10.0, levels: int = 5):
    terrain = generate_terrain(rows, cols, target_rg, block_side, levels, seed=seed)
    return save_terrain(terrain, out_dir)


def cmd_fit_b(log_path: Path, out_path: Path) -> dict:
    fit = estimate_b(ContactLog.from_csv(log_path))
    result = {
        "b": fit.b,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "n": fit.n,
        "n_zero": fit.n_zero,
        "source": str(log_path),
    }
    write_json(out_path, result)
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mattertransport",
                                     description="Legged transport over rugose terrain.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sim", help="simulate an (N, T) redundancy grid")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("reproduce-fig3", help="velocity CDF, CI band, success and minimal-N panels")
    p.add_argument("--panel", required=True, type=str.upper, choices=reproduce.PANELS)
    p.add_argument("--config", type=Path)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("terrain", help="generate a block heightmap")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--rg", type=float, required=True, help="target rugosity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.add_argument("--block-side", type=float, default=10.0)
    p.add_argument("--levels", type=int, default=5)

    p = sub.add_parser("fit-b", help="estimate the contact noise level from a bac log")
    p.add_argument("--log", required=True, type=Path)
    p.add_argument("--out", type=Path)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s:%(name)s:%(message)s")
    try:
        if args.command == "sim":
            cfg = ExperimentConfig.load(args.config)
            cmd_sim(cfg, cfg.output_dir(args.out))
        elif args.command == "reproduce-fig3":
            cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
            cmd_reproduce(args.panel, cfg, cfg.output_dir(args.out))
        elif args.command == "terrain":
            cmd_terrain(args.rows, args.cols, args.rg, args.seed,
                        ExperimentConfig().output_dir(args.out), args.block_side, args.levels)
        else:
            out = args.out or ExperimentConfig().output_dir() / "fit_b.json"
            cmd_fit_b(args.log, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
