"""Parameter-selection support: noise-percentage scan over a grid of
activeTime and adjDist values, for scree-style elbow reading.

The scan emits data for a human decision. ``largest_drop`` adds a hint
(the parameter value following the biggest marginal decrease in noise
percentage per axis); it is never an authoritative choice.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from firecluster.config import ClusterConfig
from firecluster.errors import ConfigError
from firecluster.pipeline import cluster_hotspots
from firecluster.temporal import TimeConfig

SCAN_COLUMNS = ["activeTime", "adjDist", "noisePercent", "clusterCount", "error"]


def _ascending(values, what):
    vals = list(values)
    if not vals:
        raise ConfigError(f"{what} must be a nonempty list")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError(f"{what} must be strictly ascending")
    return vals


@dataclass(frozen=True)
class TuningGrid:
    """Grid of activeTime and adjDist values; other parameters held fixed."""

    active_times: list
    adj_dists: list
    min_pts: int = 4
    min_time: float = 3.0
    time: TimeConfig = field(default_factory=TimeConfig)

    def __post_init__(self):
        object.__setattr__(self, "active_times", _ascending(self.active_times, "activeTimes"))
        object.__setattr__(self, "adj_dists", _ascending(self.adj_dists, "adjDists"))

    def config_for(self, active_time, adj_dist) -> ClusterConfig:
        return ClusterConfig(
            active_time=int(active_time),
            adj_dist=float(adj_dist),
            min_pts=self.min_pts,
            min_time=self.min_time,
            time=self.time,
        )


def _run_cell(df, grid: TuningGrid, active_time, adj_dist) -> dict:
    row = {
        "activeTime": int(active_time),
        "adjDist": float(adj_dist),
        "noisePercent": np.nan,
        "clusterCount": 0,
        "error": "",
    }
    try:
        result = cluster_hotspots(df, grid.config_for(active_time, adj_dist))
        row["noisePercent"] = 100.0 * result.noise_count / len(result.hotspots)
        row["clusterCount"] = result.cluster_count
    except Exception as exc:  # record the cell as failed, keep scanning
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def noise_scan(df, grid: TuningGrid, max_workers: int | None = None) -> pd.DataFrame:
    """Run the full pipeline per grid cell.

    Cells are independent and evaluated in parallel; output rows are
    ordered by (activeTime, adjDist). A failing cell is recorded in the
    ``error`` column instead of aborting the scan.
    """
    cells = [(at, ad) for at in grid.active_times for ad in grid.adj_dists]
    if max_workers is not None and max_workers < 1:
        raise ConfigError(f"max_workers must be >= 1, got {max_workers}")
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(pool.map(lambda cell: _run_cell(df, grid, *cell), cells))
    table = pd.DataFrame(rows, columns=SCAN_COLUMNS)
    return table.sort_values(["activeTime", "adjDist"], kind="stable", ignore_index=True)


def largest_drop(table: pd.DataFrame) -> dict:
    """Per-axis hint: the value after the biggest decrease in noise percent.

    Marginal curves are means over the other axis; an axis with fewer
    than two values (or no successful cells) maps to None.
    """
    ok = table[table["error"] == ""]
    hints = {}
    for axis in ("adjDist", "activeTime"):
        curve = ok.groupby(axis)["noisePercent"].mean().sort_index()
        if len(curve) < 2 or curve.isna().any():
            hints[axis] = None
            continue
        drops = curve.to_numpy()[:-1] - curve.to_numpy()[1:]
        best = int(np.argmax(drops))
        hints[axis] = None if drops[best] <= 0 else curve.index[best + 1]
    return hints
