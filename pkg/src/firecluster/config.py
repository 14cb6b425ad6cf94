"""Algorithm parameters."""

from __future__ import annotations

from dataclasses import dataclass, field

from firecluster.errors import ConfigError
from firecluster.temporal import TimeConfig


@dataclass(frozen=True)
class ClusterConfig:
    """The five clustering parameters plus time-index conversion settings.

    active_time: max number of indices a fire may go undetected and still
        be the same fire.
    adj_dist: max geodesic distance in metres joining two hotspots into
        one spatial component.
    min_pts / min_time: minimum member count / minimum duration (in
        timeUnit) for a cluster to count as a fire; both inclusive.
    """

    active_time: int = 24
    adj_dist: float = 3000.0
    min_pts: int = 4
    min_time: float = 3.0
    time: TimeConfig = field(default_factory=TimeConfig)
    ignition_center: str = "mean"

    def __post_init__(self):
        if self.active_time < 0:
            raise ConfigError(f"activeTime must be >= 0, got {self.active_time}")
        if not self.adj_dist > 0:
            raise ConfigError(f"adjDist must be positive, got {self.adj_dist}")
        if self.min_pts < 1:
            raise ConfigError(f"minPts must be >= 1, got {self.min_pts}")
        if self.min_time < 0:
            raise ConfigError(f"minTime must be >= 0, got {self.min_time}")
        if self.ignition_center != "mean":
            raise ConfigError(f"unsupported ignitionCenter {self.ignition_center!r}")

    def settings_dict(self) -> dict:
        """Echo of the configuration, as stored in results and settings.json."""
        return {
            "activeTime": self.active_time,
            "adjDist": self.adj_dist,
            "minPts": self.min_pts,
            "minTime": self.min_time,
            "ignitionCenter": self.ignition_center,
            "timeUnit": self.time.unit,
            "timeStep": self.time.step,
        }

    @classmethod
    def from_settings_dict(cls, d: dict) -> "ClusterConfig":
        return cls(
            active_time=int(d["activeTime"]),
            adj_dist=float(d["adjDist"]),
            min_pts=int(d["minPts"]),
            min_time=float(d["minTime"]),
            time=TimeConfig(unit=d["timeUnit"], step=float(d["timeStep"])),
            ignition_center=d.get("ignitionCenter", "mean"),
        )
