"""Counter-based uniform random numbers.

Every uniform is a pure function of ``(seed, replicate, period, module,
channel)``, so a Monte Carlo replicate can be evaluated in any order, on any
worker, and still produce the same bits.  The mixer is the SplitMix64
finaliser applied to a chained hash of the counter components.
"""
from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / (1 << 53)

# channel ids for the two uniforms consumed per bac
DELAY = 0
DURATION = 1


def _mix(x: np.ndarray) -> np.ndarray:
    z = x + _GOLDEN
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _key(seed: int) -> np.ndarray:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return _mix(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))


def counter_uniforms(seed: int, replicates, n_periods: int, n_modules: int,
                     channel: int) -> np.ndarray:
    """Uniforms on [0, 1) with shape ``(len(replicates), n_periods, n_modules)``.

    Entry ``[r, i, j]`` depends only on ``seed``, ``replicates[r]``, ``i``,
    ``j`` and ``channel``; it does not depend on the grid size, so a
    configuration with more periods or modules extends a smaller one.
    """
    reps = np.asarray(replicates, dtype=np.uint64).reshape(-1, 1, 1)
    periods = np.arange(n_periods, dtype=np.uint64).reshape(1, -1, 1)
    modules = np.arange(n_modules, dtype=np.uint64).reshape(1, 1, -1)
    with np.errstate(over="ignore"):
        h = _mix(_key(seed) ^ reps)
        h = _mix(h ^ periods)
        h = _mix(h ^ modules)
        h = _mix(h ^ np.uint64(channel))
    return (h >> _S11).astype(np.float64) * _INV53
