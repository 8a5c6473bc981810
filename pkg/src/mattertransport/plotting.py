"""Matplotlib figures for simulation reports.

Figures are written as SVG with a fixed hash salt and no date stamp so that
re-running a report reproduces the same file.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.fontsize": 7,
    "legend.frameon": False,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "figure.figsize": (3.4, 2.6),
    "svg.hashsalt": "mattertransport",
    "svg.fonttype": "path",
}

NOMINAL = dict(color="black", linestyle="--", linewidth=1.0)


def new_figure():
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
    return fig, ax


def save_figure(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def velocity_cdfs(curves, path, title=None) -> Path:
    """``curves`` maps a label to ``(normalised velocities, cdf values)``."""
    with plt.rc_context(STYLE):
        fig, ax = new_figure()
        for label, (x, y) in curves.items():
            ax.step(x, y, where="post", label=label)
        ax.axvline(1.0, **NOMINAL)
        ax.set_xlabel(r"$v / v_{open}$")
        ax.set_ylabel("CDF")
        ax.set_ylim(0, 1.02)
        if title:
            ax.set_title(title)
        ax.legend(loc="upper left")
    return save_figure(fig, path)


def destination_bands(T, bands, nominal, path) -> Path:
    """``bands`` maps a label to ``(lower, upper)`` arrays over ``T``."""
    with plt.rc_context(STYLE):
        fig, ax = new_figure()
        colors = ["tab:blue", "tab:red", "tab:green", "tab:orange"]
        for color, (label, (lo, hi)) in zip(colors, bands.items()):
            ax.plot(lo, T, color=color, label=label)
            ax.plot(hi, T, color=color)
        ax.plot(nominal, T, **NOMINAL)
        ax.set_xlabel(r"$\hat{D}$")
        ax.set_ylabel("T (periods)")
        ax.legend(loc="lower right")
    return save_figure(fig, path)


def success_curves(N, curves, limit, path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = new_figure()
        for label, p in curves.items():
            ax.plot(N, p, marker="o", markersize=2.5, label=label)
        ax.plot(N, limit, **NOMINAL)
        ax.set_xlabel("N (modules)")
        ax.set_ylabel("P(success)")
        ax.set_ylim(0, 1.02)
        ax.legend(loc="lower right")
    return save_figure(fig, path)


def redundancy_curves(b, curves, bound, path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = new_figure()
        for label, n in curves.items():
            n = np.asarray(n, dtype=float)
            ax.plot(b, n, marker="o", markersize=2.5, label=label)
        ax.plot(b, bound, **NOMINAL)
        ax.set_xlabel("b")
        ax.set_ylabel(r"$N_{\epsilon,p_0}$")
        ax.legend(loc="upper left")
    return save_figure(fig, path)
