"""Thrust profiles, the contact-noise process and single-bac disturbance.

A bac (basic active contact) nominally lasts ``tau`` seconds and produces the
instantaneous thrust ``f(t)``.  On rugose terrain its start is delayed by
``c1 ~ U(0, tau)`` and its duration shrinks to ``tau_u``, drawn from the mixed
law ``G(tau_u) = (1 - b) tau_u / tau + b``: an atom of mass ``b`` at zero
(complete loss) plus a uniform density on ``(0, tau]``.  Contact running past
the end of the bac carries over into the next one, with ``f`` treated as
periodic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PROFILE_KINDS = ("constant", "linear-ramp", "tabulated")

# below this fraction of tau a window integral is taken by the midpoint rule;
# differencing the antiderivative would lose all precision there
_SHORT_WINDOW = 1e-9


@dataclass(frozen=True)
class ThrustProfile:
    """Periodic instantaneous thrust over one bac.

    Use the :meth:`constant`, :meth:`linear_ramp` and :meth:`tabulated`
    constructors.  A tabulated profile interpolates linearly between samples
    and closes the period by interpolating from the last sample back to the
    first one at ``t = tau``.
    """

    tau: float
    kind: str
    times: tuple = ()
    values: tuple = ()
    _knots: np.ndarray = field(init=False, repr=False, compare=False)
    _knot_f: np.ndarray = field(init=False, repr=False, compare=False)
    _knot_F: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not np.isfinite(self.tau) or self.tau <= 0:
            raise ValueError(f"tau must be positive and finite, got {self.tau}")
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}; expected one of {PROFILE_KINDS}")
        if len(self.values) == 0:
            raise ValueError("thrust profile has no samples")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("thrust samples must be finite")
        knots = np.array([], dtype=float)
        knot_f = knot_F = knots
        if self.kind == "tabulated":
            t = np.asarray(self.times, dtype=float)
            f = np.asarray(self.values, dtype=float)
            if t.shape != f.shape:
                raise ValueError("times and thrust samples differ in length")
            if t[0] < 0 or t[-1] >= self.tau or np.any(np.diff(t) <= 0):
                raise ValueError("sample times must be strictly increasing within [0, tau)")
            if t[0] > 0:
                # value at 0 follows from the periodic closing segment
                f0 = f[-1] + (f[0] - f[-1]) * (self.tau - t[-1]) / (self.tau - t[-1] + t[0])
                t = np.concatenate([[0.0], t])
                f = np.concatenate([[f0], f])
            knots = np.concatenate([t, [self.tau]])
            knot_f = np.concatenate([f, [f[0]]])
            areas = 0.5 * (knot_f[1:] + knot_f[:-1]) * np.diff(knots)
            knot_F = np.concatenate([[0.0], np.cumsum(areas)])
        elif len(self.values) != 1:
            raise ValueError(f"{self.kind} profile takes exactly one parameter")
        object.__setattr__(self, "_knots", knots)
        object.__setattr__(self, "_knot_f", knot_f)
        object.__setattr__(self, "_knot_F", knot_F)

    @classmethod
    def constant(cls, value: float, tau: float = 1.0) -> "ThrustProfile":
        return cls(tau=float(tau), kind="constant", values=(float(value),))

    @classmethod
    def linear_ramp(cls, mean: float, tau: float = 1.0) -> "ThrustProfile":
        """Ramp ``f(t) = 2 * mean * t / tau`` that drops back to zero each period."""
        return cls(tau=float(tau), kind="linear-ramp", values=(float(mean),))

    @classmethod
    def tabulated(cls, times: Sequence[float], thrust: Sequence[float],
                  tau: float = 1.0) -> "ThrustProfile":
        return cls(tau=float(tau), kind="tabulated",
                   times=tuple(float(t) for t in times),
                   values=tuple(float(f) for f in thrust))

    def nominal_thrust(self) -> float:
        """Average thrust over one undisturbed bac, ``(1/tau) * int_0^tau f``."""
        return float(self.cumulative(self.tau)) / self.tau

    def __call__(self, t):
        """Instantaneous thrust, periodic in ``t``."""
        s = np.mod(np.asarray(t, dtype=float), self.tau)
        if self.kind == "constant":
            return np.full_like(s, self.values[0])
        if self.kind == "linear-ramp":
            return 2.0 * self.values[0] * s / self.tau
        return np.interp(s, self._knots, self._knot_f)

    def cumulative(self, t):
        """Antiderivative ``int_0^t f`` for ``t`` in ``[0, tau]``."""
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return self.values[0] * t
        if self.kind == "linear-ramp":
            return self.values[0] * t * t / self.tau
        idx = np.clip(np.searchsorted(self._knots, t, side="right") - 1, 0, len(self._knots) - 2)
        t0 = self._knots[idx]
        f0 = self._knot_f[idx]
        slope = (self._knot_f[idx + 1] - f0) / (self._knots[idx + 1] - t0)
        dt = t - t0
        return self._knot_F[idx] + dt * (f0 + 0.5 * slope * dt)

    def integrate(self, start, length):
        """``int_start^{start+length} f(t mod tau) dt`` for ``length >= 0``."""
        start = np.asarray(start, dtype=float)
        length = np.asarray(length, dtype=float)
        if self.kind == "constant":
            return self.values[0] * length
        end = start + length
        whole = np.floor(end / self.tau)
        period_area = float(self.cumulative(self.tau))
        s0 = np.mod(start, self.tau)
        # start may itself sit beyond one period when called with raw offsets
        area = (whole - np.floor(start / self.tau)) * period_area \
            + self.cumulative(end - whole * self.tau) - self.cumulative(s0)
        short = length < _SHORT_WINDOW * self.tau
        if np.any(short):
            area = np.where(short, self(start + 0.5 * length) * length, area)
        return area


@dataclass(frozen=True)
class DragModel:
    """Effective viscous drag linking cycle-averaged thrust and velocity."""

    gamma: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    def velocity(self, thrust):
        return np.asarray(thrust, dtype=float) / self.gamma

    def open_loop_velocity(self, profile: ThrustProfile) -> float:
        return profile.nominal_thrust() / self.gamma


@dataclass(frozen=True)
class NoiseModel:
    """Contact noise: complete-loss probability ``b`` plus the delay law."""

    b: float = 0.0
    enabled: bool = True

    def __post_init__(self):
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must lie in [0, 1], got {self.b}")

    def cdf(self, tau_u, tau: float):
        """``G(tau_u)``; zero below 0 and one from ``tau`` on."""
        x = np.asarray(tau_u, dtype=float)
        g = (1.0 - self.b) * np.clip(x, 0.0, tau) / tau + self.b
        return np.where(x < 0, 0.0, g)


@dataclass(frozen=True)
class BacOutcome:
    c1: float
    tau_u: float
    f_u: float
    f_hat: float


def nominal_thrust(profile: ThrustProfile) -> float:
    return profile.nominal_thrust()


def quantile_tau_u(noise: NoiseModel, u, tau: float):
    """Invert ``G``: zero inside the loss atom, linear on the continuous part.

    Works elementwise on arrays.  With ``b == 1`` every ``u`` maps to 0.
    """
    u = np.asarray(u, dtype=float)
    if noise.b >= 1.0:
        return np.zeros_like(u)
    return np.where(u < noise.b, 0.0, tau * (u - noise.b) / (1.0 - noise.b))


def disturbed_thrust(f_u, tau_u):
    """``sign(tau_u) * f_u / tau_u`` without ever dividing by zero."""
    f_u = np.asarray(f_u, dtype=float)
    tau_u = np.asarray(tau_u, dtype=float)
    hit = tau_u > 0
    return np.where(hit, f_u / np.where(hit, tau_u, 1.0), 0.0)


def disturb(profile: ThrustProfile, noise: NoiseModel, u_delay, u_duration):
    """Map uniform draws to ``(c1, tau_u, f_u)`` arrays of the same shape."""
    u_delay = np.asarray(u_delay, dtype=float)
    tau = profile.tau
    if not noise.enabled:
        zeros = np.zeros_like(u_delay)
        return zeros, zeros + tau, zeros + profile.nominal_thrust() * tau
    c1 = tau * u_delay
    tau_u = quantile_tau_u(noise, u_duration, tau)
    f_u = np.where(tau_u > 0, profile.integrate(c1, tau_u), 0.0)
    return c1, tau_u, f_u


def bac_outcome(profile: ThrustProfile, c1: float, tau_u: float) -> BacOutcome:
    """Outcome of a bac with a given delay and duration (carryover wraps)."""
    if not 0.0 <= c1 < profile.tau:
        raise ValueError(f"c1 must lie in [0, tau), got {c1}")
    if not 0.0 <= tau_u <= profile.tau:
        raise ValueError(f"tau_u must lie in [0, tau], got {tau_u}")
    f_u = float(profile.integrate(c1, tau_u)) if tau_u > 0 else 0.0
    return BacOutcome(float(c1), float(tau_u), f_u, float(disturbed_thrust(f_u, tau_u)))


def sample_bac(profile: ThrustProfile, noise: NoiseModel,
               rng: np.random.Generator) -> BacOutcome:
    """Draw one disturbed bac.  Consumes two uniforms: delay, then duration."""
    if not noise.enabled:
        f_n = profile.nominal_thrust()
        return BacOutcome(0.0, profile.tau, f_n * profile.tau, f_n)
    u_delay, u_duration = rng.random(2)
    c1, tau_u, f_u = disturb(profile, noise, u_delay, u_duration)
    return BacOutcome(float(c1), float(tau_u), float(f_u), float(disturbed_thrust(f_u, tau_u)))


def sample_bacs(profile: ThrustProfile, noise: NoiseModel, n: int,
                rng: np.random.Generator):
    """Vectorised :func:`sample_bac`: arrays ``(c1, tau_u, f_u, f_hat)`` of length ``n``.

    Consumes the stream exactly like ``n`` successive :func:`sample_bac` calls.
    """
    if not noise.enabled:
        f_n = profile.nominal_thrust()
        return np.zeros(n), np.full(n, profile.tau), np.full(n, f_n * profile.tau), np.full(n, f_n)
    u = rng.random((n, 2))
    c1, tau_u, f_u = disturb(profile, noise, u[:, 0], u[:, 1])
    return c1, tau_u, f_u, disturbed_thrust(f_u, tau_u)


def contact_coefficient(outcome: BacOutcome, t, tau: float):
    """Contact weight ``c(t)``: ``tau / tau_u`` inside the realised window, else 0.

    The window ``[c1, c1 + tau_u]`` is taken modulo ``tau`` so the carried-over
    part lands at the start of the period.
    """
    s = np.mod(np.asarray(t, dtype=float), tau)
    if outcome.tau_u <= 0:
        return np.zeros_like(s)
    offset = np.mod(s - outcome.c1, tau)
    inside = offset <= outcome.tau_u
    return np.where(inside, tau / outcome.tau_u, 0.0)


@dataclass(frozen=True)
class BacSequence:
    """Binary contact map over (module, period, slot)."""

    bits: np.ndarray
    resolution: int

    @property
    def flat(self) -> np.ndarray:
        return self.bits.reshape(-1)


def _window_slots(start: float, length: float, tau: float, resolution: int) -> np.ndarray:
    # slots over two consecutive periods; a slot is set only on positive-length overlap
    edges = np.arange(2 * resolution + 1) * (tau / resolution)
    lo = np.maximum(edges[:-1], start)
    hi = np.minimum(edges[1:], start + length)
    return (hi - lo) > 1e-12 * tau


def discretize(c1, tau_u, tau: float, resolution: int) -> BacSequence:
    """Binary contact sequence for a ``(periods, modules)`` grid of outcomes.

    ``c1`` and ``tau_u`` are arrays of shape ``(T, N)`` (scalars are treated as
    a single bac).  The returned bits have shape ``(N, T, resolution)``.
    Contact that runs past the end of a period is written into the same
    module's next period; beyond the last period it is dropped.
    """
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    c1 = np.atleast_2d(np.asarray(c1, dtype=float))
    tau_u = np.atleast_2d(np.asarray(tau_u, dtype=float))
    n_periods, n_modules = c1.shape
    bits = np.zeros((n_modules, n_periods + 1, resolution), dtype=np.uint8)
    for i in range(n_periods):
        for j in range(n_modules):
            if tau_u[i, j] <= 0:
                continue
            hit = _window_slots(c1[i, j], tau_u[i, j], tau, resolution)
            bits[j, i] |= hit[:resolution]
            bits[j, i + 1] |= hit[resolution:]
    return BacSequence(bits[:, :n_periods], resolution)


def desired_sequence(n_modules: int, n_periods: int, resolution: int) -> BacSequence:
    """Intended contact sequence: every slot of every bac in contact."""
    return BacSequence(np.ones((n_modules, n_periods, resolution), dtype=np.uint8), resolution)


def ripple_profile(tau: float = 1.0, mean: float = 1.0, ripple: float = 0.25,
                   samples: int = 16) -> ThrustProfile:
    """Tabulated ``mean * (1 + ripple * sin(2 pi t / tau))``.

    Any window average of this profile stays within ``mean * (1 +/- ripple)``,
    so with a tolerance wider than the ripple a period fails only through
    complete loss of contact on every module.
    """
    if not 0 <= ripple <= 1:
        raise ValueError(f"ripple must lie in [0, 1], got {ripple}")
    if samples < 2:
        raise ValueError("need at least two samples")
    t = np.arange(samples) * tau / samples
    f = mean * (1.0 + ripple * np.sin(2.0 * np.pi * t / tau))
    return ThrustProfile.tabulated(t, f, tau)
