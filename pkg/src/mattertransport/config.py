"""JSON experiment configuration with strict key checking."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .estimator import TransportTask
from .model import DragModel, NoiseModel, ThrustProfile, ripple_profile

OUTPUT_ENV = "MATTERTRANSPORT_OUT"
DEFAULT_OUTPUT = "results"

_TOP_KEYS = {"profile", "gamma", "noise", "N", "T", "task", "replicates", "seed",
             "out", "workers", "ci_level"}
_PROFILE_KEYS = {
    "constant": {"kind", "tau", "value"},
    "linear-ramp": {"kind", "tau", "mean"},
    "tabulated": {"kind", "tau", "times", "thrust"},
    "ripple": {"kind", "tau", "mean", "ripple", "samples"},
}
_NOISE_KEYS = {"b", "enabled"}
_TASK_KEYS = {"D", "T", "epsilon", "p0", "k"}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


def _check_keys(data, allowed, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a JSON object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key {unknown[0]!r}")


def _wrap(key, fn, *args):
    try:
        return fn(*args)
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def parse_profile(data: dict) -> ThrustProfile:
    kind = data.get("kind", "ripple") if isinstance(data, dict) else None
    if kind not in _PROFILE_KEYS:
        raise ConfigError(f"profile.kind: unknown profile kind {kind!r}")
    _check_keys(data, _PROFILE_KEYS[kind], "profile")
    tau = data.get("tau", 1.0)
    if kind == "constant":
        return _wrap("profile.value", ThrustProfile.constant, data.get("value", 1.0), tau)
    if kind == "linear-ramp":
        return _wrap("profile.mean", ThrustProfile.linear_ramp, data.get("mean", 1.0), tau)
    if kind == "tabulated":
        for key in ("times", "thrust"):
            if key not in data:
                raise ConfigError(f"profile.{key}: required for tabulated profiles")
        return _wrap("profile.times", ThrustProfile.tabulated, data["times"], data["thrust"], tau)
    return _wrap("profile.ripple", ripple_profile, tau, data.get("mean", 1.0),
                 data.get("ripple", 0.25), data.get("samples", 16))


def profile_to_dict(profile: ThrustProfile) -> dict:
    if profile.kind == "constant":
        return {"kind": "constant", "tau": profile.tau, "value": profile.values[0]}
    if profile.kind == "linear-ramp":
        return {"kind": "linear-ramp", "tau": profile.tau, "mean": profile.values[0]}
    return {"kind": "tabulated", "tau": profile.tau, "times": list(profile.times),
            "thrust": list(profile.values)}


def _int_list(value, key):
    if isinstance(value, int) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value or not all(
            isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in value):
        raise ConfigError(f"{key}: expected a positive integer or a nonempty list of them")
    return value


@dataclass
class ExperimentConfig:
    profile: ThrustProfile = field(default_factory=ripple_profile)
    drag: DragModel = field(default_factory=DragModel)
    noise: NoiseModel = field(default_factory=lambda: NoiseModel(0.5))
    N: list = field(default_factory=lambda: [1])
    T: list = field(default_factory=lambda: [1])
    task: Optional[TransportTask] = None
    replicates: int = 10_000
    seed: int = 0
    out: Optional[str] = None
    workers: int = 1
    ci_level: float = 0.9

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        _check_keys(data, _TOP_KEYS, "config")
        cfg = cls()
        if "profile" in data:
            cfg.profile = parse_profile(data["profile"])
        if "gamma" in data:
            cfg.drag = _wrap("gamma", DragModel, data["gamma"])
        if "noise" in data:
            noise = data["noise"]
            _check_keys(noise, _NOISE_KEYS, "noise")
            enabled = noise.get("enabled", True)
            if not isinstance(enabled, bool):
                raise ConfigError("noise.enabled: expected true or false")
            cfg.noise = _wrap("noise.b", NoiseModel, noise.get("b", 0.5), enabled)
        if "N" in data:
            cfg.N = _int_list(data["N"], "N")
        if "T" in data:
            cfg.T = _int_list(data["T"], "T")
        if "task" in data:
            task = data["task"]
            _check_keys(task, _TASK_KEYS, "task")
            if "D" not in task or "epsilon" not in task:
                raise ConfigError("task: 'D' and 'epsilon' are required")
            cfg.task = _wrap("task", TransportTask, task["D"], task.get("T", 1),
                             task["epsilon"], task.get("p0", 0.9), task.get("k", 1.0))
        for key in ("replicates", "seed", "workers"):
            if key in data:
                value = data[key]
                lowest = 0 if key == "seed" else 1
                if not isinstance(value, int) or isinstance(value, bool) or value < lowest:
                    raise ConfigError(f"{key}: expected an integer >= {lowest}")
                setattr(cfg, key, value)
        if "ci_level" in data:
            level = data["ci_level"]
            if not isinstance(level, (int, float)) or not 0 < level < 1:
                raise ConfigError("ci_level: expected a number in (0, 1)")
            cfg.ci_level = float(level)
        if "out" in data:
            if not isinstance(data["out"], str):
                raise ConfigError("out: expected a path string")
            cfg.out = data["out"]
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: not valid JSON ({exc})") from exc
        return cls.from_dict(data)

    @property
    def v_open(self) -> float:
        return self.drag.open_loop_velocity(self.profile)

    @property
    def b(self) -> float:
        return self.noise.b if self.noise.enabled else 0.0

    def output_dir(self, override=None) -> Path:
        return Path(override or self.out or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)

    def to_dict(self) -> dict:
        data = {
            "profile": profile_to_dict(self.profile),
            "gamma": self.drag.gamma,
            "noise": {"b": self.noise.b, "enabled": self.noise.enabled},
            "N": list(self.N),
            "T": list(self.T),
            "replicates": self.replicates,
            "seed": self.seed,
            "ci_level": self.ci_level,
        }
        if self.task is not None:
            t = self.task
            data["task"] = {"D": t.D, "T": t.T, "epsilon": t.epsilon, "p0": t.p0, "k": t.k}
        return data
