"""Monte Carlo ensembles and the statistics drawn from them.

Replicate ``r`` of an ensemble is a pure function of ``(seed, r)`` through
:mod:`mattertransport.streams`; blocks of replicates can therefore be computed
on any number of worker threads with bit-identical results.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import streams
from .model import DragModel, NoiseModel, ThrustProfile, disturb
from .redundancy import RedundancyConfig, period_velocities

# bac cells per block; keeps the working arrays around a few tens of MB
_BLOCK_CELLS = 1 << 21
CS_MODULES = 64
CS_PERIODS = 64
CS_REPLICATES = 2000


@dataclass(frozen=True)
class TransportTask:
    """Scheduled transport of distance ``D`` in ``T`` periods, within ``epsilon``.

    ``k`` is the number of periods needed per unit distance at the nominal
    speed, i.e. ``1 / v_open`` when velocities are in length per period.
    """

    D: float
    T: int
    epsilon: float
    p0: float = 0.9
    k: float = 1.0

    def __post_init__(self):
        if not self.D > 0:
            raise ValueError(f"D must be positive, got {self.D}")
        if int(self.T) != self.T or self.T < 1:
            raise ValueError(f"T must be an integer >= 1, got {self.T}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.p0 < 1:
            raise ValueError(f"p0 must lie in (0, 1), got {self.p0}")
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")

    @classmethod
    def on_schedule(cls, v_open: float, T: int, epsilon: float, p0: float = 0.9) -> "TransportTask":
        """Task whose destination is the nominal distance covered in ``T`` periods."""
        return cls(D=v_open * T, T=T, epsilon=epsilon, p0=p0, k=1.0 / v_open)

    @property
    def kD(self) -> float:
        return self.k * self.D

    def succeeded(self, D_hat):
        return np.abs(np.asarray(D_hat) - self.D) < self.epsilon


@dataclass(frozen=True)
class SimResult:
    """Replicate velocities ``v_hat`` for one redundancy configuration."""

    samples: np.ndarray
    N: int
    T: int
    seed: int

    @property
    def replicate_count(self) -> int:
        return len(self.samples)

    @property
    def destinations(self) -> np.ndarray:
        return self.T * self.samples

    def empirical_cdf(self):
        """Sorted samples with plotting positions ``(r - 0.5) / n``."""
        x = np.sort(self.samples)
        n = len(x)
        return x, (np.arange(1, n + 1) - 0.5) / n

    def cdf(self, x):
        """Fraction of samples ``<= x``."""
        x_sorted = np.sort(self.samples)
        return np.searchsorted(x_sorted, x, side="right") / len(x_sorted)

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def variance(self) -> float:
        return float(np.var(self.samples, ddof=1)) if len(self.samples) > 1 else 0.0

    def standard_error(self) -> float:
        return math.sqrt(self.variance() / len(self.samples))


class SuccessEstimate(NamedTuple):
    p: float
    se: float
    n: int


@dataclass(frozen=True)
class AnalyticSummary:
    C_s: float
    mean_approx: float
    bound_N: Optional[float] = None


def _block_velocities(profile, drag, noise, cfg, seed, replicates):
    u_delay = streams.counter_uniforms(seed, replicates, cfg.T, cfg.N, streams.DELAY)
    u_dur = streams.counter_uniforms(seed, replicates, cfg.T, cfg.N, streams.DURATION)
    _, tau_u, f_u = disturb(profile, noise, u_delay, u_dur)
    return np.mean(period_velocities(f_u, tau_u, drag), axis=-1)


def ensemble(profile: ThrustProfile, drag: DragModel, noise: NoiseModel, cfg: RedundancyConfig,
             replicates: int, seed: int = 0, workers: int = 1) -> SimResult:
    """Sample ``replicates`` independent values of ``v_hat`` for ``cfg``."""
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    block = max(1, _BLOCK_CELLS // (cfg.N * cfg.T))
    starts = range(0, replicates, block)

    def run(start):
        reps = np.arange(start, min(start + block, replicates), dtype=np.uint64)
        return _block_velocities(profile, drag, noise, cfg, seed, reps)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    return SimResult(np.concatenate(parts), cfg.N, cfg.T, seed)


def quantile_interval(samples, level: float):
    """Central ``level`` interval of the samples.

    Quantiles interpolate linearly between order statistics at rank
    ``1 + (n - 1) p`` (numpy's default ``linear`` method).
    """
    if not 0 < level < 1:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("no samples")
    tail = (1.0 - level) / 2.0
    lo, hi = np.quantile(x, [tail, 1.0 - tail])
    return float(lo), float(hi)


def destination_ci(result: SimResult, level: float = 0.9):
    """Central confidence interval of the realised destination ``T * v_hat``."""
    return quantile_interval(result.destinations, level)


def success_probability(profile: ThrustProfile, drag: DragModel, noise: NoiseModel,
                        cfg: RedundancyConfig, task: TransportTask, replicates: int,
                        seed: int = 0, workers: int = 1) -> SuccessEstimate:
    """Fraction of replicates with ``|D_hat - D| < epsilon`` and its Wald error."""
    result = ensemble(profile, drag, noise, cfg, replicates, seed, workers)
    return success_from(result, task)


def success_from(result: SimResult, task: TransportTask) -> SuccessEstimate:
    n = result.replicate_count
    p = float(np.mean(task.succeeded(result.destinations)))
    return SuccessEstimate(p, math.sqrt(p * (1.0 - p) / n), n)


def minimal_redundancy_empirical(profile: ThrustProfile, drag: DragModel, noise: NoiseModel,
                                 task: TransportTask, replicates: int = 10_000, seed: int = 0,
                                 N_max: int = 64, workers: int = 1) -> Optional[int]:
    """Smallest ``N <= N_max`` whose estimated success probability reaches ``p0``.

    Returns ``None`` when no ``N`` up to ``N_max`` qualifies.
    """
    if N_max < 1:
        raise ValueError(f"N_max must be >= 1, got {N_max}")
    for n in range(1, N_max + 1):
        est = success_probability(profile, drag, noise, RedundancyConfig(n, task.T), task,
                                  replicates, seed, workers)
        if est.p >= task.p0:
            return n
    return None


def bound_minimal_redundancy(task: TransportTask, b: float) -> float:
    """Upper bound ``log(1 - p0 ** (1 / kD)) / log(b)`` on the minimal redundancy.

    Reported as at least 1.  ``b == 0`` gives 1 and ``b == 1`` gives ``inf``.
    """
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"b must lie in [0, 1], got {b}")
    if b == 0.0:
        return 1.0
    if b == 1.0:
        return math.inf
    value = math.log1p(-task.p0 ** (1.0 / task.kD)) / math.log(b)
    return max(1.0, value)


def ceil_bound(value: float) -> int:
    """Integer redundancy from a real bound, ignoring last-digit rounding noise."""
    if math.isinf(value):
        raise OverflowError("unbounded redundancy")
    return math.ceil(round(value, 9))


def estimate_cs(profile: ThrustProfile, drag: DragModel, b: float,
                replicates: int = CS_REPLICATES, seed: int = 0) -> float:
    """Asymptotic mean velocity, exact for constant thrust, else high-redundancy Monte Carlo."""
    if profile.kind == "constant" or b == 0.0:
        return drag.open_loop_velocity(profile)
    cfg = RedundancyConfig(CS_MODULES, CS_PERIODS)
    return ensemble(profile, drag, NoiseModel(b), cfg, replicates, seed).mean()


def mean_velocity_approx(profile: ThrustProfile, drag: DragModel, b: float, N: int,
                         C_s: Optional[float] = None) -> float:
    """Expected disturbed velocity ``(1 - b**N) * C_s``."""
    if C_s is None:
        C_s = estimate_cs(profile, drag, b)
    return (1.0 - b ** N) * C_s


def analytic_summary(profile: ThrustProfile, drag: DragModel, b: float, N: int,
                     task: Optional[TransportTask] = None,
                     C_s: Optional[float] = None) -> AnalyticSummary:
    if C_s is None:
        C_s = estimate_cs(profile, drag, b)
    bound = bound_minimal_redundancy(task, b) if task is not None else None
    return AnalyticSummary(C_s, mean_velocity_approx(profile, drag, b, N, C_s), bound)
