"""Flat ``key = value`` experiment config files.

Blank lines and ``#`` comments are ignored. Every field of
:class:`LearningConfig`, :class:`TrackerNoiseConfig` and
:class:`EnvironmentSpec` is a key; absent keys keep their defaults. ``env``
selects the base room (``env1``/``env2``/``env3``) before the individual room
keys are applied, and ``seed`` is the master seed for the whole run.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Optional

from .core import SCENARIOS
from .fusion import LearningConfig
from .sim import ENVIRONMENTS, EnvironmentSpec
from .trackers import TrackerNoiseConfig


class ConfigError(ValueError):
    pass


def _fields(cls) -> dict[str, type]:
    defaults = cls() if cls is not EnvironmentSpec else ENVIRONMENTS["env1"]
    return {f.name: type(getattr(defaults, f.name)) for f in dataclasses.fields(cls) if f.name not in ("seed", "env_id")}


_LEARN_KEYS = _fields(LearningConfig)
_NOISE_KEYS = _fields(TrackerNoiseConfig)
_ENV_KEYS = _fields(EnvironmentSpec)
_OTHER_KEYS = {"seed": int, "env": str, "scenario": str, "repetitions": int}


@dataclass
class ExperimentConfig:
    env: EnvironmentSpec = field(default_factory=lambda: ENVIRONMENTS["env1"])
    scenario: str = "rectangular"
    noise: TrackerNoiseConfig = field(default_factory=TrackerNoiseConfig)
    learning: LearningConfig = field(default_factory=LearningConfig)
    repetitions: int = 20

    @property
    def seed(self) -> int:
        return self.learning.seed

    def with_overrides(
        self, seed: Optional[int] = None, scenario: Optional[str] = None, env: Optional[str] = None
    ) -> "ExperimentConfig":
        cfg = self
        if seed is not None:
            cfg = replace(cfg, learning=replace(cfg.learning, seed=seed))
        if scenario is not None:
            if scenario not in SCENARIOS:
                raise ConfigError(f"unknown scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}")
            cfg = replace(cfg, scenario=scenario)
        if env is not None:
            if env not in ENVIRONMENTS:
                raise ConfigError(f"unknown env {env!r}; expected one of {', '.join(ENVIRONMENTS)}")
            cfg = replace(cfg, env=ENVIRONMENTS[env])
        return cfg


def _convert(raw: str, typ: type, key: str, where: str) -> Any:
    try:
        if typ is int:
            return int(raw)
        if typ is float:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
            return value
        return typ(raw)
    except ValueError:
        raise ConfigError(f"{where}: invalid value {raw!r} for {key} (expected {typ.__name__})") from None


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    values: dict[str, tuple[Any, str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        typ = _OTHER_KEYS.get(key) or _LEARN_KEYS.get(key) or _NOISE_KEYS.get(key) or _ENV_KEYS.get(key)
        if typ is None:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        values[key] = (_convert(raw, typ, key, where), where)

    def pick(keys):
        return {k: v for k, (v, _) in values.items() if k in keys}

    def build(what, fn):
        try:
            return fn()
        except (ValueError, TypeError) as exc:
            lines = ", ".join(w for k, (_, w) in values.items() if k in what) or source
            raise ConfigError(f"{lines}: {exc}") from None

    env_name = values.get("env", ("env1", ""))[0]
    if env_name not in ENVIRONMENTS:
        raise ConfigError(f"{values['env'][1]}: unknown env {env_name!r}")
    scenario = values.get("scenario", ("rectangular", ""))[0]
    if scenario not in SCENARIOS:
        raise ConfigError(f"{values['scenario'][1]}: unknown scenario {scenario!r}")
    seed = values.get("seed", (0, ""))[0]

    env = build(_ENV_KEYS, lambda: replace(ENVIRONMENTS[env_name], **pick(_ENV_KEYS)))
    noise = build(_NOISE_KEYS, lambda: TrackerNoiseConfig(**pick(_NOISE_KEYS)))
    learning = build(
        {**_LEARN_KEYS, "seed": int}, lambda: LearningConfig(seed=seed, **pick(_LEARN_KEYS))
    )
    repetitions = values.get("repetitions", (20, ""))[0]
    return ExperimentConfig(env, scenario, noise, learning, repetitions)


def load_config(path: Optional[str | Path]) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path))
