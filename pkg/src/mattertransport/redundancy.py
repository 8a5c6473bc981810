"""Terrain-disturbed velocity under temporal and spatial redundancy.

Velocities are measured in length per period, so the displacement over one
period equals that period's velocity and ``D_hat = T * v_hat``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .model import DragModel, NoiseModel, ThrustProfile, disturb, disturbed_thrust

DEFAULT_MAX_PERIODS = 10_000

RngLike = Union[int, np.random.Generator, None]


@dataclass(frozen=True)
class RedundancyConfig:
    N: int = 1
    T: int = 1

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be an integer >= 1, got {self.N}")
        if int(self.T) != self.T or self.T < 1:
            raise ValueError(f"T must be an integer >= 1, got {self.T}")


@dataclass(frozen=True)
class TransportOutcome:
    v_hat: float
    D_hat: float
    per_period_velocities: np.ndarray


def _rng(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def draw_grid(profile: ThrustProfile, noise: NoiseModel, n_periods: int, n_modules: int,
              rng: np.random.Generator):
    """Sample a ``(T, N)`` grid of ``(tau_u, f_u)``.

    Draws are taken in row-major ``(period, module)`` order, two uniforms per
    bac, so a one-module grid consumes the stream exactly like a sequence of
    single bacs.
    """
    u = rng.random((n_periods, n_modules, 2))
    _, tau_u, f_u = disturb(profile, noise, u[..., 0], u[..., 1])
    return tau_u, f_u


def period_velocities(f_u, tau_u, drag: DragModel) -> np.ndarray:
    """Per-period velocity from pooled module thrust; module axis is last.

    Each period contributes ``sign(sum tau_u) * sum f_u / sum tau_u / gamma``.
    """
    return drag.velocity(disturbed_thrust(np.sum(f_u, axis=-1), np.sum(tau_u, axis=-1)))


def _outcome(per_period: np.ndarray) -> TransportOutcome:
    v_hat = float(np.mean(per_period))
    return TransportOutcome(v_hat, len(per_period) * v_hat, per_period)


def velocity_temporal(profile: ThrustProfile, drag: DragModel, noise: NoiseModel, T: int,
                      rng: RngLike = None) -> TransportOutcome:
    """Average disturbed velocity of a single module over ``T`` periods."""
    RedundancyConfig(1, T)
    tau_u, f_u = draw_grid(profile, noise, T, 1, _rng(rng))
    per_period = drag.velocity(disturbed_thrust(f_u[:, 0], tau_u[:, 0]))
    return _outcome(per_period)


def velocity_spatial(profile: ThrustProfile, drag: DragModel, noise: NoiseModel,
                     cfg: RedundancyConfig, rng: RngLike = None) -> TransportOutcome:
    """Average disturbed velocity of ``N`` serially connected modules over ``T`` periods."""
    tau_u, f_u = draw_grid(profile, noise, cfg.T, cfg.N, _rng(rng))
    return _outcome(period_velocities(f_u, tau_u, drag))


def simulate_trajectory(profile: ThrustProfile, drag: DragModel, noise: NoiseModel,
                        cfg: RedundancyConfig, rng: RngLike = None) -> np.ndarray:
    """Cumulative displacement at the end of each of the ``cfg.T`` periods."""
    return np.cumsum(velocity_spatial(profile, drag, noise, cfg, rng).per_period_velocities)


def first_passage_time(profile: ThrustProfile, drag: DragModel, noise: NoiseModel,
                       cfg: RedundancyConfig, D: float, rng: RngLike = None,
                       T_max: int = DEFAULT_MAX_PERIODS) -> Optional[int]:
    """Number of periods until cumulative displacement first reaches ``D``.

    ``cfg.T`` is ignored; periods are simulated until ``D`` is reached or
    ``T_max`` periods have elapsed, in which case ``None`` is returned.
    """
    if not D > 0:
        raise ValueError(f"D must be positive, got {D}")
    if T_max < 1:
        raise ValueError(f"T_max must be >= 1, got {T_max}")
    gen = _rng(rng)
    # per-period velocities carry rounding from the window integrals
    target = D * (1.0 - 1e-12)
    travelled = 0.0
    done = 0
    chunk = 64
    while done < T_max:
        n = min(chunk, T_max - done)
        tau_u, f_u = draw_grid(profile, noise, n, cfg.N, gen)
        path = travelled + np.cumsum(period_velocities(f_u, tau_u, drag))
        reached = np.flatnonzero(path >= target)
        if reached.size:
            return done + int(reached[0]) + 1
        travelled = float(path[-1])
        done += n
        chunk = min(chunk * 2, 4096)
    return None
