"""CSV ingest, result serialization, and plot-data emission.

Ingest reads a headed CSV, applies optional irradiance and bounding-box
filters, and returns rows sorted by observed time (stable, so input
order breaks ties). Output is a directory of flat files: the two result
tables as CSV, point and path GeoJSON, timeline plot data, and a
settings echo. Timestamps serialize as ``YYYY-MM-DD HH:MM:SS``; floats
use shortest-repr formatting, so a write/re-ingest round trip is
lossless.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from firecluster.config import ClusterConfig
from firecluster.errors import ConfigError, IngestError
from firecluster.results import ClusterResult, FirePath, HOTSPOT_COLUMNS, IGNITION_COLUMNS

log = logging.getLogger("firecluster")

TIME_FORMAT = "%Y-%m-%d %H:%M:%S"


@dataclass(frozen=True)
class IngestSpec:
    """What to read and how to filter it."""

    path: str
    lon_column: str = "lon"
    lat_column: str = "lat"
    obs_time_column: str = "obsTime"
    irradiance_column: str | None = None
    irradiance_min: float | None = None
    bbox: tuple | None = None  # (lonMin, latMin, lonMax, latMax)
    lenient: bool = False


def _parse_times(raw: pd.Series) -> pd.Series:
    parsed = pd.to_datetime(raw, format="ISO8601", errors="coerce")
    if isinstance(parsed.dtype, pd.DatetimeTZDtype):
        parsed = parsed.dt.tz_localize(None)  # wall-clock semantics
    return parsed


def _exact_floats(texts: pd.Series) -> np.ndarray:
    """Correctly rounded str-to-float conversion; unparseable entries -> NaN."""
    values = np.full(len(texts), np.nan)
    arr = texts.to_numpy(dtype=object)
    ok = np.array([x is not None and x == x for x in arr], dtype=bool)
    try:
        values[ok] = np.asarray(arr[ok], dtype="U").astype(np.float64)
        return values
    except ValueError:
        pass
    for i in np.flatnonzero(ok):
        try:
            values[i] = float(arr[i])
        except (TypeError, ValueError):
            values[i] = np.nan
    return values


def ingest(spec: IngestSpec) -> pd.DataFrame:
    """Read hotspots from CSV into a lon/lat/obsTime table.

    Unparseable rows abort the run with their line numbers unless
    ``lenient`` is set, in which case they are dropped and counted.
    """
    path = Path(spec.path)
    try:
        raw = pd.read_csv(path, dtype=str, skipinitialspace=True)
    except FileNotFoundError:
        raise IngestError(f"cannot read {path}: no such file") from None
    except pd.errors.EmptyDataError:
        raise IngestError(f"{path} has no header row") from None

    needed = [spec.lon_column, spec.lat_column, spec.obs_time_column]
    if spec.irradiance_column is not None and spec.irradiance_min is not None:
        needed.append(spec.irradiance_column)
    missing = [c for c in needed if c not in raw.columns]
    if missing:
        raise ConfigError(f"{path} lacks column(s) {missing}; found {list(raw.columns)}")

    # pd.to_numeric's fast path is not correctly rounded; go through numpy
    # so written coordinates re-ingest bit-for-bit
    lon = pd.Series(_exact_floats(raw[spec.lon_column]))
    lat = pd.Series(_exact_floats(raw[spec.lat_column]))
    obs = _parse_times(raw[spec.obs_time_column])

    bad = (
        lon.isna() | lat.isna() | obs.isna()
        | (lon < -180) | (lon > 180) | (lat < -90) | (lat > 90)
    )
    if spec.irradiance_column is not None and spec.irradiance_min is not None:
        irr = pd.to_numeric(raw[spec.irradiance_column], errors="coerce")
        bad |= irr.isna()
    if bad.any():
        lines = (np.flatnonzero(bad.to_numpy()) + 2).tolist()  # +2: header and 1-basing
        if not spec.lenient:
            shown = ", ".join(map(str, lines[:5])) + ("..." if len(lines) > 5 else "")
            raise IngestError(
                f"{path}: {len(lines)} unparseable or out-of-range row(s) at line(s) {shown} "
                "(use lenient mode to skip them)"
            )
        log.warning("%s: skipped %d unparseable row(s)", path, len(lines))

    df = pd.DataFrame({"lon": lon, "lat": lat, "obsTime": obs})
    keep = ~bad
    if spec.irradiance_column is not None and spec.irradiance_min is not None:
        keep &= irr > spec.irradiance_min
    if spec.bbox is not None:
        lon_min, lat_min, lon_max, lat_max = spec.bbox
        keep &= (lon >= lon_min) & (lon <= lon_max) & (lat >= lat_min) & (lat <= lat_max)

    df = df[keep]
    df = df.sort_values("obsTime", kind="stable", ignore_index=True)
    df["lon"] = df["lon"].astype(np.float64)
    df["lat"] = df["lat"].astype(np.float64)
    log.info("%s: ingested %d hotspot(s)", path, len(df))
    return df


def _write_csv(df: pd.DataFrame, path: Path):
    df.to_csv(path, index=False, date_format=TIME_FORMAT)


def _dump_json(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def _point_feature(lon, lat, props):
    return {
        "type": "Feature",
        "geometry": {"type": "Point", "coordinates": [float(lon), float(lat)]},
        "properties": props,
    }


def clusters_geojson(result: ClusterResult) -> dict:
    features = [
        _point_feature(r.lon, r.lat, {"membership": int(r.membership), "timeID": int(r.timeID), "noise": bool(r.noise)})
        for r in result.hotspots.itertuples()
    ]
    features += [
        _point_feature(r.lon, r.lat, {"type": "ignition", "membership": int(r.membership)})
        for r in result.ignition.itertuples()
    ]
    return {"type": "FeatureCollection", "features": features}


def paths_geojson(paths: list[FirePath]) -> dict:
    features = []
    for p in paths:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[s.centroid.lon, s.centroid.lat] for s in p.steps],
                },
                "properties": {
                    "membership": p.membership,
                    "step": p.step,
                    "blockStarts": [s.block_start for s in p.steps],
                    "obsCounts": [s.obs_count for s in p.steps],
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}


def write_outputs(result: ClusterResult, out_dir, paths: list[FirePath] | None = None) -> list[Path]:
    """Write the result file set into ``out_dir``; returns written paths."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = []

        hotspots = result.hotspots[HOTSPOT_COLUMNS]
        _write_csv(hotspots, out / "hotspots.csv")
        written.append(out / "hotspots.csv")

        _write_csv(result.ignition[IGNITION_COLUMNS], out / "ignitions.csv")
        written.append(out / "ignitions.csv")

        _dump_json(clusters_geojson(result), out / "clusters.geojson")
        written.append(out / "clusters.geojson")

        _write_csv(result.hotspots[["obsTime", "membership", "noise"]], out / "timeline.csv")
        written.append(out / "timeline.csv")

        _dump_json(result.settings, out / "settings.json")
        written.append(out / "settings.json")

        if paths is not None:
            _dump_json(paths_geojson(paths), out / "paths.geojson")
            written.append(out / "paths.geojson")
        return written
    except OSError as exc:
        raise IngestError(f"cannot write outputs under {out}: {exc}") from exc


def load_result(out_dir) -> ClusterResult:
    """Rebuild a ClusterResult from a directory written by write_outputs."""
    out = Path(out_dir)
    for name in ("hotspots.csv", "ignitions.csv", "settings.json"):
        if not (out / name).exists():
            raise IngestError(f"{out} is not a result directory (missing {name})")

    settings = json.loads((out / "settings.json").read_text(encoding="utf-8"))
    ClusterConfig.from_settings_dict(settings)  # validates the echo

    hot = pd.read_csv(out / "hotspots.csv", float_precision="round_trip")
    hot["obsTime"] = pd.to_datetime(hot["obsTime"], format="ISO8601")
    hot["noise"] = hot["noise"].astype(bool)
    hot = hot.astype({"timeID": np.int64, "membership": np.int64})

    ign = pd.read_csv(out / "ignitions.csv", float_precision="round_trip")
    if len(ign):
        ign["obsTime"] = pd.to_datetime(ign["obsTime"], format="ISO8601")
        ign = ign.astype({"membership": np.int64, "timeID": np.int64, "obsInCluster": np.int64})
    else:
        ign = ign.reindex(columns=IGNITION_COLUMNS)
        ign["obsTime"] = pd.to_datetime(ign["obsTime"])
    return ClusterResult(hotspots=hot, ignition=ign, settings=settings)
