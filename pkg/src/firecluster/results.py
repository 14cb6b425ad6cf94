"""Result assembly and derived analytics.

A clustering run produces a :class:`ClusterResult` holding the labelled
hotspot table, the per-cluster ignition table, and an echo of the
settings. On top of that sit ``extract_fire`` (flat table),
``summarize`` (distribution statistics), and ``fire_movement`` (centroid
trajectory of one cluster at a chosen temporal coarsening).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from firecluster import kernels
from firecluster.config import ClusterConfig
from firecluster.errors import DomainError
from firecluster.geo import Coordinate

HOTSPOT_COLUMNS = [
    "lon", "lat", "obsTime", "timeID", "membership", "noise",
    "distToIgnition", "timeFromIgnition",
]

IGNITION_COLUMNS = [
    "membership", "lon", "lat", "obsTime", "timeID", "obsInCluster", "clusterTimeLen",
]


@dataclass(frozen=True)
class ClusterResult:
    """Final product of a clustering run.

    hotspots: one row per input hotspot (lon, lat, obsTime, timeID,
        membership, noise, distToIgnition, timeFromIgnition). Noise rows
        carry membership -1 and NaN ignition metrics.
    ignition: one row per surviving cluster (membership, lon, lat,
        obsTime, timeID, obsInCluster, clusterTimeLen), ordered 1..K.
    settings: echo of the configuration used.
    """

    hotspots: pd.DataFrame
    ignition: pd.DataFrame
    settings: dict

    @property
    def cluster_count(self) -> int:
        return len(self.ignition)

    @property
    def noise_count(self) -> int:
        return int(self.hotspots["noise"].sum())

    def __str__(self):
        return (
            f"firecluster result: {self.cluster_count} clusters | "
            f"{len(self.hotspots)} hot spots (including noise points)"
        )


@dataclass(frozen=True)
class PathStep:
    """One centroid of a fire path: a block of `step` time indices."""

    block_start: int
    centroid: Coordinate
    obs_count: int


@dataclass(frozen=True)
class FirePath:
    """Time-ordered centroid trajectory of one cluster."""

    membership: int
    step: int
    steps: tuple


def build_result(df, labels: np.ndarray, cfg: ClusterConfig) -> ClusterResult:
    """Assemble the result tables from final labels.

    ``df`` needs lon/lat/obsTime/timeID columns aligned with ``labels``.
    The ignition point of a cluster is its earliest-observed hotspot, or
    the mean of all members sharing that earliest observed time when
    there are several (the published tables show the ignition equidistant
    from simultaneous first detections, which pins the rule to the
    earliest timestamp rather than the whole first time index).
    """
    labels = np.asarray(labels, dtype=np.int64)
    n = len(df)
    lon = df["lon"].to_numpy(dtype=np.float64)
    lat = df["lat"].to_numpy(dtype=np.float64)
    obs = df["obsTime"].to_numpy(dtype="datetime64[s]")
    obs_s = obs.astype(np.int64)
    tid = df["timeID"].to_numpy(dtype=np.int64)

    hot = pd.DataFrame(
        {
            "lon": lon,
            "lat": lat,
            "obsTime": pd.to_datetime(obs),
            "timeID": tid,
            "membership": labels,
            "noise": labels == -1,
            "distToIgnition": np.full(n, np.nan),
            "timeFromIgnition": np.full(n, np.nan),
        }
    )

    ign_rows = []
    ks = sorted(int(k) for k in np.unique(labels) if k > 0)
    for k in ks:
        members = np.flatnonzero(labels == k)
        times = obs_s[members]
        t0 = times.min()
        founders = members[times == t0]
        ign_lon = float(lon[founders].mean())
        ign_lat = float(lat[founders].mean())
        dist = kernels.geodesic_one_to_many(ign_lon, ign_lat, lon[members], lat[members])
        hot.loc[members, "distToIgnition"] = dist
        hot.loc[members, "timeFromIgnition"] = (times - t0) / cfg.time.unit_seconds
        ign_rows.append(
            {
                "membership": k,
                "lon": ign_lon,
                "lat": ign_lat,
                "obsTime": pd.Timestamp(t0, unit="s"),
                "timeID": int(tid[members[times == t0]].min()),
                "obsInCluster": int(members.size),
                "clusterTimeLen": float((times.max() - t0) / cfg.time.unit_seconds),
            }
        )

    ignition = pd.DataFrame(ign_rows, columns=IGNITION_COLUMNS)
    if ign_rows:
        ignition = ignition.astype({"membership": np.int64, "timeID": np.int64, "obsInCluster": np.int64})
    else:
        ignition = ignition.astype(
            {"membership": np.int64, "lon": np.float64, "lat": np.float64,
             "timeID": np.int64, "obsInCluster": np.int64, "clusterTimeLen": np.float64}
        )
        ignition["obsTime"] = pd.to_datetime(ignition["obsTime"])
    return ClusterResult(hotspots=hot, ignition=ignition, settings=cfg.settings_dict())


def _selected_clusters(result: ClusterResult, clusters) -> list[int]:
    known = result.ignition["membership"].tolist()
    if clusters is None:
        return known
    wanted = [int(c) for c in clusters]
    unknown = sorted(set(wanted) - set(known))
    if unknown:
        raise DomainError(f"unknown cluster id(s) {unknown}; clusters run 1..{len(known)}")
    return sorted(set(wanted))


def extract_fire(result: ClusterResult, clusters=None, include_noise: bool = False) -> pd.DataFrame:
    """Flatten a result into one table of hotspot, ignition, and noise rows.

    Each selected cluster contributes its hotspot rows plus one synthetic
    ignition row, annotated with the per-cluster aggregates. Within a
    cluster rows are ordered by obsTime (ignition row after coincident
    hotspots); noise rows, when requested, come last.
    """
    selected = _selected_clusters(result, clusters)
    hot = result.hotspots
    ign = result.ignition.set_index("membership")

    blocks = []
    for k in selected:
        rows = hot[hot["membership"] == k].copy()
        rows["type"] = "hotspot"
        irow = ign.loc[k]
        ignition_row = pd.DataFrame(
            {
                "lon": [irow["lon"]],
                "lat": [irow["lat"]],
                "obsTime": [irow["obsTime"]],
                "timeID": [int(irow["timeID"])],
                "membership": [k],
                "noise": [False],
                "distToIgnition": [0.0],
                "timeFromIgnition": [0.0],
                "type": ["ignition"],
            }
        )
        block = pd.concat([rows, ignition_row], ignore_index=True)
        block = block.sort_values("obsTime", kind="stable", ignore_index=True)
        block["obsInCluster"] = int(irow["obsInCluster"])
        block["clusterTimeLen"] = float(irow["clusterTimeLen"])
        blocks.append(block)

    if include_noise:
        noise_rows = hot[hot["noise"]].copy()
        if len(noise_rows):
            noise_rows["type"] = "noise"
            noise_rows["obsInCluster"] = np.nan
            noise_rows["clusterTimeLen"] = np.nan
            noise_rows = noise_rows.sort_values("obsTime", kind="stable", ignore_index=True)
            blocks.append(noise_rows)

    columns = HOTSPOT_COLUMNS + ["type", "obsInCluster", "clusterTimeLen"]
    if not blocks:
        return pd.DataFrame(columns=columns)
    out = pd.concat(blocks, ignore_index=True)
    return out[columns]


def _stats(values: np.ndarray) -> dict:
    if values.size == 0:
        return {k: float("nan") for k in ("min", "q1", "median", "q3", "mean", "max")}
    q = np.percentile(values, [0, 25, 50, 75, 100])
    return {
        "min": float(q[0]),
        "q1": float(q[1]),
        "median": float(q[2]),
        "q3": float(q[3]),
        "mean": float(values.mean()),
        "max": float(q[4]),
    }


@dataclass(frozen=True)
class ResultSummary:
    total_hotspots: int
    cluster_count: int
    noise_count: int
    obs_in_cluster: dict
    cluster_time_len: dict
    dist_to_ignition: dict
    time_from_ignition: dict
    time_unit: str

    def __str__(self):
        lines = [
            f"{self.cluster_count} clusters | {self.total_hotspots} hot spots "
            f"(including noise points)",
            f"noise points: {self.noise_count}",
        ]
        u = self.time_unit
        for name, stats, unit in (
            ("hot spots per cluster", self.obs_in_cluster, ""),
            (f"cluster duration ({u})", self.cluster_time_len, ""),
            ("distance to ignition (m)", self.dist_to_ignition, ""),
            (f"time from ignition ({u})", self.time_from_ignition, ""),
        ):
            lines.append(
                f"{name}: min {stats['min']:.4g}, q1 {stats['q1']:.4g}, "
                f"median {stats['median']:.4g}, q3 {stats['q3']:.4g}, "
                f"mean {stats['mean']:.4g}, max {stats['max']:.4g}"
            )
        return "\n".join(lines)


def summarize(result: ClusterResult) -> ResultSummary:
    """Distribution statistics of cluster sizes, durations, and per-hotspot
    ignition metrics, plus the noise count."""
    hot = result.hotspots
    clustered = hot[~hot["noise"]]
    return ResultSummary(
        total_hotspots=len(hot),
        cluster_count=result.cluster_count,
        noise_count=result.noise_count,
        obs_in_cluster=_stats(result.ignition["obsInCluster"].to_numpy(dtype=np.float64)),
        cluster_time_len=_stats(result.ignition["clusterTimeLen"].to_numpy(dtype=np.float64)),
        dist_to_ignition=_stats(clustered["distToIgnition"].to_numpy(dtype=np.float64)),
        time_from_ignition=_stats(clustered["timeFromIgnition"].to_numpy(dtype=np.float64)),
        time_unit=result.settings.get("timeUnit", "h"),
    )


def fire_movement(result: ClusterResult, membership: int, step: int = 1) -> FirePath:
    """Centroid path of one cluster, coarsened to blocks of `step` indices.

    Blocks anchor at the cluster's first time index; blocks with no
    observations are skipped. Noise (-1) has no path.
    """
    if step < 1:
        raise DomainError(f"step must be a positive integer, got {step}")
    membership = int(membership)
    if membership not in set(result.ignition["membership"].tolist()):
        raise DomainError(f"unknown or noise cluster id {membership}")

    rows = result.hotspots[result.hotspots["membership"] == membership]
    tid = rows["timeID"].to_numpy(dtype=np.int64)
    lon = rows["lon"].to_numpy(dtype=np.float64)
    lat = rows["lat"].to_numpy(dtype=np.float64)
    first = int(tid.min())
    blocks = (tid - first) // step

    steps = []
    for b in np.unique(blocks):
        sel = blocks == b
        steps.append(
            PathStep(
                block_start=first + int(b) * step,
                centroid=Coordinate(lon=float(lon[sel].mean()), lat=float(lat[sel].mean())),
                obs_count=int(sel.sum()),
            )
        )
    return FirePath(membership=membership, step=step, steps=tuple(steps))
