"""Time indexing: timestamps to integer indices, and sliding windows.

A hotspot's integer time index counts intervals of ``timeStep * timeUnit``
from the earliest observation (index 1). Intervals are left-closed,
right-open: an observation exactly one step after the origin starts
index 2. The window at index t spans [max(1, t - activeTime), t].
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import numpy as np

from firecluster.errors import ConfigError, DomainError

UNIT_SECONDS = {"s": 1.0, "m": 60.0, "h": 3600.0, "d": 86400.0}

_UNIT_ALIASES = {
    "s": "s", "sec": "s", "secs": "s", "second": "s", "seconds": "s",
    "m": "m", "min": "m", "mins": "m", "minute": "m", "minutes": "m",
    "h": "h", "hr": "h", "hrs": "h", "hour": "h", "hours": "h",
    "d": "d", "day": "d", "days": "d",
}


def parse_time_unit(text: str) -> str:
    """Canonicalize a time-unit name to one of ``s``, ``m``, ``h``, ``d``."""
    try:
        return _UNIT_ALIASES[text.strip().lower()]
    except KeyError:
        raise ConfigError(f"unknown time unit {text!r} (use s/m/h/d)") from None


@dataclass(frozen=True)
class TimeConfig:
    """Conversion from observed time to integer time index."""

    unit: str = "h"
    step: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "unit", parse_time_unit(self.unit))
        if not self.step > 0:
            raise ConfigError(f"timeStep must be positive, got {self.step}")

    @property
    def unit_seconds(self) -> float:
        """Seconds in one timeUnit (not scaled by step)."""
        return UNIT_SECONDS[self.unit]

    @property
    def index_seconds(self) -> float:
        """Seconds in one time index (step * unit)."""
        s = self.step * UNIT_SECONDS[self.unit]
        # snap near-integer products so exact boundaries bin predictably
        if abs(s - round(s)) < 1e-6:
            s = float(round(s))
        return s


@dataclass(frozen=True)
class TimeWindow:
    """The static snapshot [lo, hi] of time indices ending at t (hi == t)."""

    t: int
    lo: int
    hi: int


def assign_time_index(obs_time: datetime, origin: datetime, cfg: TimeConfig) -> int:
    """1-based index of the interval containing ``obs_time``.

    ``origin`` must be the minimum observed time of the dataset.
    """
    if obs_time < origin:
        raise DomainError(f"observation {obs_time} precedes origin {origin}")
    elapsed = (obs_time - origin).total_seconds()
    return int(elapsed // cfg.index_seconds) + 1


def assign_time_indices(obs_times: np.ndarray, origin, cfg: TimeConfig) -> np.ndarray:
    """Vectorized ``assign_time_index`` over a datetime64 array."""
    obs_s = np.asarray(obs_times, dtype="datetime64[s]").astype(np.int64)
    origin_s = np.datetime64(origin, "s").astype(np.int64)
    if (obs_s < origin_s).any():
        raise DomainError("an observation precedes the dataset origin")
    elapsed = (obs_s - origin_s).astype(np.float64)
    return np.floor(elapsed / cfg.index_seconds).astype(np.int64) + 1


def window_for(t: int, active_time: int) -> TimeWindow:
    """Window of indices visible at index t given the dormancy tolerance."""
    if t < 1:
        raise DomainError(f"time index must be >= 1, got {t}")
    if active_time < 0:
        raise DomainError(f"activeTime must be >= 0, got {active_time}")
    return TimeWindow(t=t, lo=max(1, t - active_time), hi=t)
