"""The window sweep: within-window spatial clustering and cross-window
label propagation.

For each time index t (1..T), the points with index in
[max(1, t - activeTime), t] are gathered into a static window. Points
within ``adjDist`` metres are joined into connected components. Points
first seen at index t adopt the label of the geodesically nearest
already-labelled point in their component; components made only of new
points found a fresh cluster. Labels never change once assigned, so two
fires that later burn into each other keep their own labels (the merged
component is split back along prior memberships).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from firecluster import kernels
from firecluster.config import ClusterConfig
from firecluster.errors import DomainError
from firecluster.geo import Coordinate

UNASSIGNED = 0

# equidistance tolerance for the nearest-labelled tie-break, metres
TIE_EPS = 1e-9


@dataclass(frozen=True)
class Hotspot:
    """One satellite observation, with its derived time index."""

    id: int
    coord: Coordinate
    obs_time: datetime
    time_id: int


@dataclass
class MembershipState:
    """Evolving global label assignment during the sweep.

    ``labels[i]`` is the cluster id of hotspot i, or ``UNASSIGNED`` (0).
    Labels are assigned exactly once and never change until the noise
    filter renumbers survivors. ``first_seen`` maps each label to the
    window index at which it was created.
    """

    labels: np.ndarray
    next_label: int = 1
    first_seen: dict = field(default_factory=dict)


def _coords_of(points, lat=None):
    """Accept (lon_array, lat_array) or a sequence of Hotspot/Coordinate."""
    if lat is not None:
        return (
            np.ascontiguousarray(points, dtype=np.float64),
            np.ascontiguousarray(lat, dtype=np.float64),
        )
    pts = list(points)
    coords = [p.coord if isinstance(p, Hotspot) else p for p in pts]
    return (
        np.array([c.lon for c in coords], dtype=np.float64),
        np.array([c.lat for c in coords], dtype=np.float64),
    )


def local_components(points, adj_dist: float, lat=None) -> np.ndarray:
    """Partition points into components of the <= adj_dist threshold graph.

    ``points`` may be a longitude array (with ``lat`` supplied) or a
    sequence of Hotspot/Coordinate. Returns int64 component ids; the
    partition is unique, so it does not depend on point order or on any
    seeding choice.
    """
    if adj_dist <= 0:
        raise DomainError(f"adjDist must be positive, got {adj_dist}")
    lon, lat = _coords_of(points, lat)
    return kernels.connected_components(lon, lat, adj_dist)


def propagate_labels(
    member_ids: np.ndarray,
    lon: np.ndarray,
    lat: np.ndarray,
    state: MembershipState,
    adj_dist: float,
    t: int,
) -> MembershipState:
    """Label the window's new points from its already-labelled ones.

    ``member_ids`` indexes the full dataset arrays ``lon``/``lat`` and
    must contain every hotspot visible in window t (labelled points of
    earlier indices plus unlabeled points of index t). Labelled points
    keep their labels. Each unlabeled point in a component containing
    labelled points takes the label of the nearest labelled point
    (equidistant ties within 1e-9 m go to the smaller cluster id). Each
    all-new component gets a fresh label; fresh labels are ordered by the
    component's minimum hotspot id.
    """
    if member_ids.size == 0:
        return state
    sub_lon = lon[member_ids]
    sub_lat = lat[member_ids]
    sub_labels = state.labels[member_ids]
    if (sub_labels != UNASSIGNED).all():
        return state

    comp = kernels.connected_components(sub_lon, sub_lat, adj_dist)
    new_labels = kernels.nearest_labeled(sub_lon, sub_lat, comp, sub_labels, tie_eps=TIE_EPS)

    fresh = new_labels == UNASSIGNED
    if fresh.any():
        fresh_pos = np.flatnonzero(fresh)
        fresh_comps = comp[fresh_pos]
        # one label per founding component, numbered by min hotspot id
        order = {}
        for pos, c in zip(fresh_pos, fresh_comps):
            gid = member_ids[pos]
            if c not in order or gid < order[c]:
                order[c] = gid
        for c, _ in sorted(order.items(), key=lambda kv: kv[1]):
            label = state.next_label
            state.next_label += 1
            state.first_seen[label] = t
            new_labels[fresh_pos[fresh_comps == c]] = label

    state.labels[member_ids] = new_labels
    return state


def cluster_sweep(df, cfg: ClusterConfig) -> np.ndarray:
    """Run the full window sweep, returning one raw label per hotspot.

    ``df`` must carry ``lon``, ``lat`` and ``timeID`` columns (timeID as
    produced by :func:`firecluster.temporal.assign_time_indices`). The
    returned labels are pre-noise-filter: positive ints in birth order.
    """
    n = len(df)
    if n == 0:
        raise DomainError("cannot cluster an empty dataset")
    lon = df["lon"].to_numpy(dtype=np.float64)
    lat = df["lat"].to_numpy(dtype=np.float64)
    tid = df["timeID"].to_numpy(dtype=np.int64)
    if tid.min() < 1:
        raise DomainError("timeID values must be >= 1")

    order = np.argsort(tid, kind="stable")
    sorted_tid = tid[order]
    T = int(sorted_tid[-1])
    # windows only need processing when they contain unlabeled points,
    # i.e. when index t itself has hotspots
    bucket_lo = np.searchsorted(sorted_tid, np.arange(1, T + 2))

    state = MembershipState(labels=np.zeros(n, dtype=np.int64))
    for t in range(1, T + 1):
        if bucket_lo[t - 1] == bucket_lo[t]:
            continue
        w_lo = max(1, t - cfg.active_time)
        start = int(bucket_lo[w_lo - 1])
        stop = int(bucket_lo[t])
        propagate_labels(order[start:stop], lon, lat, state, cfg.adj_dist, t)
    return state.labels
