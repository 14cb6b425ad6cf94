"""Noise filtering: demote small or short-lived clusters, renumber the rest.

A cluster survives iff it has at least ``minPts`` members and spans at
least ``minTime`` timeUnits between its earliest and latest observation
(both comparisons inclusive). Members of failing clusters become noise
(label -1). Survivors are renumbered 1..K by ascending ignition time.
"""

from __future__ import annotations

import numpy as np

from firecluster.config import ClusterConfig

NOISE = -1


def apply_noise_filter(labels: np.ndarray, df, cfg: ClusterConfig) -> np.ndarray:
    """Map raw sweep labels to final memberships in {-1} + {1..K}.

    ``df`` must carry the ``obsTime`` column aligned with ``labels``.
    Whole clusters are kept or demoted; no hotspot ever moves between
    clusters here.
    """
    labels = np.asarray(labels, dtype=np.int64)
    obs_s = df["obsTime"].to_numpy(dtype="datetime64[s]").astype(np.int64)

    survivors = []  # (ignition_seconds, earliest_member_id, raw_label)
    for raw in np.unique(labels):
        if raw <= 0:
            continue
        members = np.flatnonzero(labels == raw)
        times = obs_s[members]
        duration_units = (times.max() - times.min()) / cfg.time.unit_seconds
        if members.size >= cfg.min_pts and duration_units >= cfg.min_time:
            t0 = times.min()
            survivors.append((t0, int(members[times == t0].min()), raw))

    survivors.sort()
    remap = {raw: new for new, (_, _, raw) in enumerate(survivors, start=1)}

    out = np.full(labels.shape, NOISE, dtype=np.int64)
    for raw, new in remap.items():
        out[labels == raw] = new
    return out
