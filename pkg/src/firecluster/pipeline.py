"""End-to-end clustering: time indexing, window sweep, noise filter, result."""

from __future__ import annotations

import numpy as np
import pandas as pd

from firecluster.config import ClusterConfig
from firecluster.engine import cluster_sweep
from firecluster.errors import DomainError
from firecluster.noisefilter import apply_noise_filter
from firecluster.results import ClusterResult, build_result
from firecluster.temporal import assign_time_indices


def cluster_hotspots(df: pd.DataFrame, cfg: ClusterConfig) -> ClusterResult:
    """Cluster a hotspot table into individual fires.

    ``df`` must have ``lon``, ``lat`` and ``obsTime`` columns (obsTime
    datetime-like); rows should be sorted by obsTime as produced by
    :func:`firecluster.dataio.ingest`. Time indices are assigned from the
    earliest observation.
    """
    if len(df) == 0:
        raise DomainError("no hotspots to cluster (dataset is empty)")
    for col in ("lon", "lat", "obsTime"):
        if col not in df.columns:
            raise DomainError(f"hotspot table lacks required column {col!r}")

    obs = pd.to_datetime(df["obsTime"]).to_numpy(dtype="datetime64[s]")
    work = pd.DataFrame(
        {
            "lon": df["lon"].to_numpy(dtype=np.float64),
            "lat": df["lat"].to_numpy(dtype=np.float64),
            "obsTime": obs,
        }
    )
    work["timeID"] = assign_time_indices(obs, obs.min(), cfg.time)

    raw = cluster_sweep(work, cfg)
    final = apply_noise_filter(raw, work, cfg)
    return build_result(work, final, cfg)
