"""Synthetic hotspot generator with known ground truth.

Each fire starts at an ignition cell and pushes one or more fronts
outward at ``spread_rate`` metres per time index, emitting detections
snapped to the satellite's 0.02 degree grid (so repeated detections of
the same cell occur, as in the real product). Smolder gaps suspend
emission while freezing the fronts; a gap of at least
``active_time_ref`` indices is declared (and generated) as a new fire
segment. Geometry is validated so the expected clustering at
(``active_time_ref``, ``adj_dist_ref``) is unambiguous: detections of
consecutive indices chain within one grid-cell diagonal, separate fires
never approach each other, and noise points stay at least three
adjacency radii from everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from firecluster.config import ClusterConfig
from firecluster.errors import DomainError
from firecluster.geo import Coordinate

GRID_DEG = 0.02

# extras re-detect recently burnt front cells at most this many indices back
_LOOKBACK_CAP = 3

_M_PER_DEG_LAT = 110_992.0
_M_PER_DEG_LON_EQ = 111_319.49


@dataclass(frozen=True)
class FireScenario:
    """Ground-truth scenario description.

    ignitions: (coordinate, start index) per fire; indices are 1-based.
    duration: burning indices per fire (gap indices included in the span).
    directions: fronts per fire, evenly spaced around the heading; 4 or
        more spreads roughly symmetrically.
    headings: optional per-fire base heading in degrees (east = 0);
        defaults to a seeded random heading.
    smolder_gaps: (fire index, gap start index, gap length) triples.
        Gaps shorter than ``active_time_ref`` keep the fire alive; longer
        ones split it into a new ground-truth segment.
    noise_points: isolated one-off detections far from every fire.
    """

    ignitions: list
    start_indices: list | None = None
    duration: int = 24
    spread_rate: float = 1200.0
    detections_per_index: int = 2
    directions: int = 1
    headings: list | None = None
    smolder_gaps: list = field(default_factory=list)
    noise_points: int = 0
    rng_seed: int = 0
    active_time_ref: int = 24
    adj_dist_ref: float = 3000.0
    allow_contact: bool = False
    origin: str = "2020-01-01 00:00:00"

    def __post_init__(self):
        if not self.ignitions:
            raise DomainError("scenario needs at least one ignition")
        if self.detections_per_index < 1:
            raise DomainError("detections_per_index must be >= 1")
        if self.duration < 1:
            raise DomainError("duration must be >= 1")
        if self.directions < 1:
            raise DomainError("directions must be >= 1")
        if self.spread_rate < 0:
            raise DomainError("spread_rate cannot be negative")
        if self.active_time_ref < 1 or self.adj_dist_ref <= 0:
            raise DomainError("active_time_ref/adj_dist_ref must be positive")


def _snap(x: float) -> float:
    return round(x / GRID_DEG) * GRID_DEG


def _m_per_deg_lon(lat: float) -> float:
    return _M_PER_DEG_LON_EQ * math.cos(math.radians(lat))


def _cell_diag_m(lat: float) -> float:
    return math.hypot(GRID_DEG * _M_PER_DEG_LAT, GRID_DEG * _m_per_deg_lon(lat))


def _validate_geometry(sc: FireScenario, starts):
    reach_m = sc.spread_rate * sc.duration
    max_abs_lat = max(abs(c.lat) for c in sc.ignitions) + reach_m / _M_PER_DEG_LAT + 0.1
    if max_abs_lat > 80:
        raise DomainError("scenario latitude too extreme for grid guarantees")

    # consecutive front cells must stay within one cell step per axis
    per_axis_limit = 0.95 * GRID_DEG * min(_M_PER_DEG_LAT, _m_per_deg_lon(max_abs_lat))
    if sc.spread_rate > per_axis_limit:
        raise DomainError(
            f"spread_rate {sc.spread_rate} exceeds the {per_axis_limit:.0f} m/index "
            "grid-connectivity limit at this latitude"
        )
    if _cell_diag_m(max_abs_lat) > sc.adj_dist_ref:
        raise DomainError("adj_dist_ref smaller than a grid-cell diagonal")

    if sc.allow_contact or len(sc.ignitions) < 2:
        return
    margin = 3.0 * sc.adj_dist_ref
    for i in range(len(sc.ignitions)):
        for j in range(i + 1, len(sc.ignitions)):
            a, b = sc.ignitions[i], sc.ignitions[j]
            d_m = math.hypot(
                (a.lon - b.lon) * _m_per_deg_lon(max_abs_lat),
                (a.lat - b.lat) * _M_PER_DEG_LAT,
            )
            if d_m < 2 * reach_m + margin:
                raise DomainError(
                    f"fires {i} and {j} may approach within 3*adjDist; "
                    "increase separation or set allow_contact"
                )


def generate(scenario: FireScenario):
    """Produce (hotspot table, ground-truth labels).

    The table has lon/lat/obsTime columns sorted by obsTime, matching the
    ingest schema. Truth labels identify expected clusters at the
    scenario's reference parameters (noise rows are -1); feed them through
    :func:`expected_labels` to apply a minPts/minTime filter and the
    ignition-time renumbering before comparing with pipeline output.
    """
    sc = scenario
    starts = sc.start_indices or [1] * len(sc.ignitions)
    if len(starts) != len(sc.ignitions):
        raise DomainError("start_indices length must match ignitions")
    if any(s < 1 for s in starts):
        raise DomainError("start indices are 1-based")
    _validate_geometry(sc, starts)

    rng = np.random.default_rng(sc.rng_seed)
    gaps_by_fire = {}
    for fire_idx, gap_start, gap_len in sc.smolder_gaps:
        if not 0 <= fire_idx < len(sc.ignitions):
            raise DomainError(f"gap references unknown fire {fire_idx}")
        gaps_by_fire.setdefault(fire_idx, set()).update(range(gap_start, gap_start + gap_len))

    rows = []  # (t, lon, lat, fire, segment)
    for f, (ign, start) in enumerate(zip(sc.ignitions, starts)):
        base = rng.uniform(0.0, 360.0) if sc.headings is None else float(sc.headings[f])
        thetas = [math.radians(base + k * 360.0 / sc.directions) for k in range(sc.directions)]
        pos = [(ign.lon, ign.lat)] * sc.directions
        gap_idx = gaps_by_fire.get(f, set())
        if starts[f] in gap_idx:
            raise DomainError(f"fire {f} cannot start inside a gap")

        history = []  # (abs_index, cell_lon, cell_lat) of mandatory front emissions
        segment = 0
        prev_active = None
        for t in range(start, start + sc.duration):
            if t in gap_idx:
                continue
            if prev_active is not None and (t - prev_active - 1) >= sc.active_time_ref:
                segment += 1
            prev_active = t
            for d in range(sc.directions):
                cell = (_snap(pos[d][0]), _snap(pos[d][1]))
                history.append((t, cell[0], cell[1]))
                rows.append((t, cell[0], cell[1], f, segment))
            recent = [h for h in history if h[0] >= t - min(_LOOKBACK_CAP, sc.active_time_ref)]
            for _ in range((sc.detections_per_index - 1) * sc.directions):
                _, cl, ca = recent[rng.integers(0, len(recent))]
                rows.append((t, cl, ca, f, segment))
            for d in range(sc.directions):
                lon0, lat0 = pos[d]
                pos[d] = (
                    lon0 + sc.spread_rate * math.cos(thetas[d]) / _m_per_deg_lon(lat0),
                    lat0 + sc.spread_rate * math.sin(thetas[d]) / _M_PER_DEG_LAT,
                )

    t_min = min(starts)
    t_max = max(s + sc.duration - 1 for s in starts)
    if sc.noise_points:
        lat_ref = sum(c.lat for c in sc.ignitions) / len(sc.ignitions)
        lon_max = max(r[1] for r in rows)
        lat0 = _snap(lat_ref)
        spacing_cells = int(math.ceil(3.0 * sc.adj_dist_ref / (GRID_DEG * _m_per_deg_lon(lat_ref)))) + 1
        base_lon_cells = int(math.ceil(lon_max / GRID_DEG)) + spacing_cells
        for i in range(sc.noise_points):
            lon_i = (base_lon_cells + i * spacing_cells) * GRID_DEG
            t_i = int(rng.integers(t_min, t_max + 1))
            rows.append((t_i, lon_i, lat0, -1, 0))

    # timestamps: each index is one hour wide, observations land on the
    # product's 10-minute ticks; the very first detection anchors the origin
    origin = np.datetime64(sc.origin, "s")
    offsets = rng.integers(0, 6, size=len(rows)) * 600
    first = min(range(len(rows)), key=lambda i: (rows[i][0], i))
    offsets[first] = 0
    obs = np.array(
        [origin + np.timedelta64((r[0] - t_min) * 3600 + int(o), "s") for r, o in zip(rows, offsets)]
    )

    df = pd.DataFrame(
        {
            "lon": [r[1] for r in rows],
            "lat": [r[2] for r in rows],
            "obsTime": obs,
        }
    )

    # ground-truth group ids, ordered by first appearance
    group_first = {}
    for r in rows:
        key = (r[3], r[4])
        if r[3] >= 0 and key not in group_first:
            group_first[key] = (r[0], len(group_first))
    ordered = sorted(group_first, key=lambda k: (group_first[k][0], k))
    group_id = {key: i + 1 for i, key in enumerate(ordered)}
    truth = np.array([group_id[(r[3], r[4])] if r[3] >= 0 else -1 for r in rows], dtype=np.int64)

    order = np.argsort(df["obsTime"].to_numpy(), kind="stable")
    return df.iloc[order].reset_index(drop=True), truth[order]


def expected_labels(df: pd.DataFrame, truth: np.ndarray, cfg: ClusterConfig) -> np.ndarray:
    """Apply the minPts/minTime filter and ignition-time renumbering to a
    ground-truth vector, yielding labels directly comparable with pipeline
    memberships. Derived from the construction, not from the engine."""
    truth = np.asarray(truth, dtype=np.int64)
    obs_s = df["obsTime"].to_numpy(dtype="datetime64[s]").astype(np.int64)
    survivors = []
    for g in np.unique(truth):
        if g <= 0:
            continue
        members = np.flatnonzero(truth == g)
        times = obs_s[members]
        duration = (times.max() - times.min()) / cfg.time.unit_seconds
        if members.size >= cfg.min_pts and duration >= cfg.min_time:
            survivors.append((times.min(), int(members[times == times.min()].min()), g))
    survivors.sort()
    remap = {g: new for new, (_, _, g) in enumerate(survivors, start=1)}
    out = np.full(truth.shape, -1, dtype=np.int64)
    for g, new in remap.items():
        out[truth == g] = new
    return out


def preset(name: str, seed: int = 0, **overrides) -> FireScenario:
    """Named ready-made scenarios (see ``PRESETS`` for the list)."""
    try:
        factory = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return factory(seed, **overrides)


def _preset_single(seed, **kw):
    args = dict(
        ignitions=[Coordinate(146.0, -37.0)],
        duration=30,
        spread_rate=1200.0,
        detections_per_index=3,
        directions=2,
        rng_seed=seed,
    )
    args.update(kw)
    return FireScenario(**args)


def _preset_separated(seed, **kw):
    args = dict(
        ignitions=[Coordinate(146.0, -37.0), Coordinate(146.0, -36.55)],
        duration=30,
        spread_rate=600.0,
        detections_per_index=3,
        directions=1,
        headings=[0.0, 180.0],
        rng_seed=seed,
    )
    args.update(kw)
    return FireScenario(**args)


def _preset_merging(seed, **kw):
    # two fronts burning toward each other; they meet near lon 146.18
    args = dict(
        ignitions=[Coordinate(146.0, -37.0), Coordinate(146.36, -37.0)],
        duration=16,
        spread_rate=1000.0,
        detections_per_index=3,
        directions=1,
        headings=[0.0, 180.0],
        allow_contact=True,
        rng_seed=seed,
    )
    args.update(kw)
    return FireScenario(**args)


def _preset_smolder(seed, gap_len=None, **kw):
    args = dict(
        ignitions=[Coordinate(146.0, -37.0)],
        duration=40,
        spread_rate=1000.0,
        detections_per_index=3,
        directions=1,
        active_time_ref=12,
        rng_seed=seed,
    )
    args.update(kw)
    gap = gap_len if gap_len is not None else args["active_time_ref"] - 2
    args["smolder_gaps"] = [(0, 10, gap)]
    return FireScenario(**args)


def _preset_noisy(seed, **kw):
    args = dict(
        ignitions=[Coordinate(146.0, -37.0)],
        duration=30,
        spread_rate=1000.0,
        detections_per_index=3,
        directions=2,
        noise_points=5,
        rng_seed=seed,
    )
    args.update(kw)
    return FireScenario(**args)


def _preset_victoria_scale(seed, **kw):
    # ~76k detections, ~400 fires staggered over ~180 days of hourly indices
    ignitions = []
    starts = []
    for row in range(20):
        for col in range(20):
            ignitions.append(Coordinate(141.0 + col * 0.45, -38.8 + row * 0.30))
            starts.append(1 + ((row * 20 + col) * 10) % 4000)
    args = dict(
        ignitions=ignitions,
        start_indices=starts,
        duration=24,
        spread_rate=400.0,
        detections_per_index=4,
        directions=2,
        noise_points=30,
        rng_seed=seed,
    )
    args.update(kw)
    return FireScenario(**args)


PRESETS = {
    "single": _preset_single,
    "separated": _preset_separated,
    "merging": _preset_merging,
    "smolder": _preset_smolder,
    "noisy": _preset_noisy,
    "victoria-scale": _preset_victoria_scale,
}
