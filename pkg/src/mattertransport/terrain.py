"""Block-heightmap terrains and contact-noise estimation from bac logs."""
from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .model import NoiseModel, quantile_tau_u

ZERO_THRESHOLD = 1e-9
MIN_LOG_SAMPLES = 10
_MAX_REDRAWS = 100


class TerrainMap:
    """Rectangular grid of block heights ``h(x, y)``.

    Rugosity is the population standard deviation of the heights divided by
    the block side length; it is recomputed from the grid on access.
    """

    def __init__(self, heights, block_side: float = 10.0, seed: Optional[int] = None):
        h = np.array(heights, dtype=float)
        if h.ndim != 2 or h.size == 0:
            raise ValueError("heights must be a nonempty 2-D grid")
        if not block_side > 0:
            raise ValueError(f"block_side must be positive, got {block_side}")
        h.setflags(write=False)
        self.heights = h
        self.block_side = float(block_side)
        self.seed = seed

    @property
    def shape(self):
        return self.heights.shape

    @property
    def rugosity(self) -> float:
        return rugosity(self)

    def to_csv(self) -> str:
        rows, cols = self.shape
        out = io.StringIO()
        out.write(f"# block_side={self.block_side!r}\n")
        out.write(f"# seed={self.seed}\n")
        out.write(f"# rugosity={self.rugosity!r}\n")
        out.write(",".join(f"c{j}" for j in range(cols)) + "\n")
        for row in self.heights:
            out.write(",".join(repr(float(v)) for v in row) + "\n")
        return out.getvalue()

    def to_dict(self) -> dict:
        return {
            "rows": self.shape[0],
            "cols": self.shape[1],
            "block_side": self.block_side,
            "seed": self.seed,
            "rugosity": self.rugosity,
            "heights": self.heights.tolist(),
        }

    @classmethod
    def from_csv(cls, text: str) -> "TerrainMap":
        meta = {}
        lines = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key.strip()] = value.strip()
            elif line.strip():
                lines.append(line)
        heights = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",", ndmin=2)
        seed = meta.get("seed")
        return cls(heights, float(meta["block_side"]),
                   None if seed in (None, "None") else int(seed))

    @classmethod
    def from_dict(cls, data: dict) -> "TerrainMap":
        return cls(data["heights"], data["block_side"], data.get("seed"))


def rugosity(terrain: TerrainMap) -> float:
    """Population standard deviation of block heights over block side length."""
    return float(np.std(terrain.heights)) / terrain.block_side


def generate_terrain(rows: int, cols: int, target_rg: float, block_side: float = 10.0,
                     height_levels: int = 5, rng=None, seed: Optional[int] = None) -> TerrainMap:
    """Random block terrain with rugosity ``target_rg``.

    Heights are drawn i.i.d. from ``height_levels`` equally spaced levels and
    then scaled about the lowest block so the realised rugosity equals the
    target.  The lowest block sits at height zero.
    """
    if rows < 1 or cols < 1:
        raise ValueError("terrain needs at least one row and one column")
    if target_rg < 0:
        raise ValueError(f"target rugosity must be non-negative, got {target_rg}")
    if height_levels < 1:
        raise ValueError(f"height_levels must be >= 1, got {height_levels}")
    if target_rg == 0:
        return TerrainMap(np.zeros((rows, cols)), block_side, seed)
    if height_levels == 1 or rows * cols == 1:
        raise ValueError("a single height level cannot produce a nonzero rugosity")
    if rng is None:
        rng = np.random.default_rng(seed)
    for _ in range(_MAX_REDRAWS):
        levels = rng.integers(0, height_levels, size=(rows, cols)).astype(float)
        spread = np.std(levels)
        if spread > 0:
            break
    else:
        raise ValueError("could not draw a non-flat terrain; increase the grid size")
    heights = (levels - levels.min()) * (target_rg * block_side / spread)
    return TerrainMap(heights, block_side, seed)


@dataclass(frozen=True)
class ContactLog:
    """Measured bac durations ``tau_u`` with nominal duration ``tau``."""

    durations: np.ndarray
    tau: float

    def __post_init__(self):
        d = np.asarray(self.durations, dtype=float)
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if d.ndim != 1:
            raise ValueError("durations must be one-dimensional")
        if np.any(d < 0) or np.any(d > self.tau * (1 + 1e-12)):
            raise ValueError("durations must lie in [0, tau]")
        object.__setattr__(self, "durations", d)

    @classmethod
    def from_csv(cls, path) -> "ContactLog":
        """Read ``# tau=<seconds>`` followed by a one-column CSV headed ``tau_u``."""
        tau = None
        values = []
        header_seen = False
        for raw in Path(path).read_text().splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                if key.strip() == "tau":
                    tau = float(value)
                continue
            if not header_seen:
                header_seen = True
                if line != "tau_u":
                    raise ValueError(f"expected header 'tau_u', found {line!r}")
                continue
            values.append(float(line))
        if tau is None:
            raise ValueError("contact log lacks a '# tau=' header line")
        return cls(np.array(values), tau)

    def to_csv(self) -> str:
        body = "".join(f"{v!r}\n" for v in self.durations.tolist())
        return f"# tau={self.tau!r}\ntau_u\n{body}"


class BFit(NamedTuple):
    b: float
    slope: float
    intercept: float
    n: int
    n_zero: int


def estimate_b(log: ContactLog) -> BFit:
    """Estimate the complete-loss probability from measured bac durations.

    The estimate is the fraction of (numerically) zero durations.  As a check
    on the linear CDF model, a least-squares line is fitted to the empirical
    CDF of the nonzero durations; under the model its intercept is close to
    ``b`` and its slope close to ``(1 - b) / tau``.
    """
    d = log.durations
    n = len(d)
    if n < MIN_LOG_SAMPLES:
        raise ValueError(f"need at least {MIN_LOG_SAMPLES} durations, got {n}")
    lost = d < ZERO_THRESHOLD * log.tau
    n_zero = int(np.count_nonzero(lost))
    b_hat = n_zero / n
    positive = np.sort(d[~lost])
    if positive.size >= 2 and np.ptp(positive) > 0:
        ecdf = (n_zero + np.arange(1, positive.size + 1)) / n
        slope, intercept = np.polyfit(positive, ecdf, 1)
    else:
        slope, intercept = float("nan"), float("nan")
    return BFit(b_hat, float(slope), float(intercept), n, n_zero)


def sample_durations(noise: NoiseModel, tau: float, n: int, rng) -> np.ndarray:
    """Synthetic bac durations from the noise model (for round-trip checks)."""
    return quantile_tau_u(noise, rng.random(n), tau)


def save_terrain(terrain: TerrainMap, out_dir, stem: str = "terrain"):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}.csv"
    json_path = out / f"{stem}.json"
    csv_path.write_text(terrain.to_csv(), newline="\n")
    json_path.write_text(json.dumps(terrain.to_dict(), indent=2) + "\n", newline="\n")
    return csv_path, json_path
