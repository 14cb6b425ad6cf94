"""Command-line interface.

Progress and log lines go to stderr, human-readable summaries to stdout,
and machine-readable data only to files. Exit codes: 0 success, 1
runtime failure, 2 usage error.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from firecluster import __version__, dataio, results, synth, tuning
from firecluster.config import ClusterConfig
from firecluster.errors import FireclusterError
from firecluster.pipeline import cluster_hotspots
from firecluster.temporal import TimeConfig

log = logging.getLogger("firecluster")


def _positive(kind):
    def check(ctx, param, value):
        if value is not None and value <= 0:
            raise click.BadParameter(f"must be a positive {kind}")
        return value
    return check


def _non_negative(ctx, param, value):
    if value is not None and value < 0:
        raise click.BadParameter("cannot be negative")
    return value


def _bbox(ctx, param, value):
    if value is None:
        return None
    try:
        parts = [float(x) for x in value.split(",")]
        lon_min, lat_min, lon_max, lat_max = parts
    except ValueError:
        raise click.BadParameter("expected lonMin,latMin,lonMax,latMax") from None
    if lon_min > lon_max or lat_min > lat_max:
        raise click.BadParameter("bbox minima exceed maxima")
    return (lon_min, lat_min, lon_max, lat_max)


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter("expected a comma-separated list of integers") from None


def _float_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter("expected a comma-separated list of numbers") from None


def _ingest_options(f):
    opts = [
        click.option("--lon-col", default="lon", show_default=True, help="Longitude column name."),
        click.option("--lat-col", default="lat", show_default=True, help="Latitude column name."),
        click.option("--time-col", default="obsTime", show_default=True, help="Observed-time column name."),
        click.option("--irradiance-col", default="irradiance", show_default=True,
                     help="Irradiance column (used only with --irradiance-min)."),
        click.option("--irradiance-min", type=float, default=None,
                     help="Keep only rows with irradiance strictly above this W/m^2."),
        click.option("--bbox", callback=_bbox, default=None,
                     help="Keep only rows inside lonMin,latMin,lonMax,latMax."),
        click.option("--lenient", is_flag=True, help="Skip unparseable rows instead of aborting."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _param_options(f):
    opts = [
        click.option("--active-time", default=24, show_default=True, type=int, callback=_non_negative,
                     help="Max time indices a fire may go undetected."),
        click.option("--adj-dist", default=3000.0, show_default=True, type=float,
                     callback=_positive("distance in metres"),
                     help="Max geodesic distance (m) joining two hotspots."),
        click.option("--min-pts", default=4, show_default=True, type=int, callback=_positive("count"),
                     help="Min hotspots for a cluster to count as a fire."),
        click.option("--min-time", default=3.0, show_default=True, type=float, callback=_non_negative,
                     help="Min duration (in time units) for a cluster to count as a fire."),
        click.option("--time-unit", default="h", show_default=True,
                     help="Time unit for indexing: s, m, h, or d."),
        click.option("--time-step", default=1.0, show_default=True, type=float,
                     callback=_positive("step"), help="Time units per index."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _make_config(active_time, adj_dist, min_pts, min_time, time_unit, time_step) -> ClusterConfig:
    try:
        return ClusterConfig(
            active_time=active_time,
            adj_dist=adj_dist,
            min_pts=min_pts,
            min_time=min_time,
            time=TimeConfig(unit=time_unit, step=time_step),
        )
    except FireclusterError as exc:
        raise click.UsageError(str(exc)) from exc


def _ingest(input_csv, lon_col, lat_col, time_col, irradiance_col, irradiance_min, bbox, lenient):
    spec = dataio.IngestSpec(
        path=input_csv,
        lon_column=lon_col,
        lat_column=lat_col,
        obs_time_column=time_col,
        irradiance_column=irradiance_col if irradiance_min is not None else None,
        irradiance_min=irradiance_min,
        bbox=bbox,
        lenient=lenient,
    )
    return dataio.ingest(spec)


@click.group()
@click.version_option(version=__version__, prog_name="firecluster")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
def main(verbose):
    """Cluster satellite fire hotspots across space and time.

    Defaults mirror the demonstrated parameterization: activeTime 24,
    adjDist 3000 m, minPts 4, minTime 3, hourly time indices.
    """
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(message)s",
        force=True,
    )


@main.command()
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False))
@_ingest_options
@_param_options
@click.option("--out", "-o", default="firecluster_out", show_default=True,
              type=click.Path(file_okay=False), help="Output directory.")
@click.option("--threads", type=int, default=None, envvar="FIRECLUSTER_THREADS",
              callback=_positive("thread count"), help="Cap internal parallelism.")
def cluster(input_csv, out, threads, active_time, adj_dist, min_pts, min_time,
            time_unit, time_step, **ingest_kw):
    """Ingest a hotspot CSV, run the pipeline, write the result files."""
    cfg = _make_config(active_time, adj_dist, min_pts, min_time, time_unit, time_step)
    try:
        df = _ingest(input_csv, **ingest_kw)
        result = cluster_hotspots(df, cfg)
        log.info(
            "%d clusters | %d hot spots (including noise points) | %d noise",
            result.cluster_count, len(result.hotspots), result.noise_count,
        )
        written = dataio.write_outputs(result, out)
    except FireclusterError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(str(result))
    click.echo(f"wrote {len(written)} files under {out}")


@main.command()
@click.argument("result_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--clusters", callback=_int_list, default=None,
              help="Comma-separated cluster ids (default: all).")
@click.option("--include-noise", is_flag=True, help="Include noise rows.")
@click.option("--out", "-o", default=None, type=click.Path(dir_okay=False),
              help="Output CSV path [default: RESULT_DIR/extract.csv].")
def extract(result_dir, clusters, include_noise, out):
    """Flatten a stored result into one hotspot/ignition/noise table."""
    try:
        result = dataio.load_result(result_dir)
        table = results.extract_fire(result, clusters=clusters, include_noise=include_noise)
        out_path = Path(out) if out else Path(result_dir) / "extract.csv"
        table.to_csv(out_path, index=False, date_format=dataio.TIME_FORMAT)
    except FireclusterError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"wrote {len(table)} rows to {out_path}")


@main.command()
@click.argument("result_dir", type=click.Path(exists=True, file_okay=False))
def summary(result_dir):
    """Print distribution statistics of a stored result."""
    try:
        result = dataio.load_result(result_dir)
        click.echo(str(results.summarize(result)))
    except FireclusterError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@click.argument("result_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--cluster", "cluster_id", type=int, default=None,
              help="Cluster id (default: every cluster).")
@click.option("--step", default=12, show_default=True, type=int,
              callback=_positive("step"), help="Time indices per path point.")
@click.option("--out", "-o", default=None, type=click.Path(dir_okay=False),
              help="GeoJSON path [default: RESULT_DIR/paths.geojson].")
def movement(result_dir, cluster_id, step, out):
    """Export fire-movement centroid paths as GeoJSON LineStrings."""
    try:
        result = dataio.load_result(result_dir)
        ids = [cluster_id] if cluster_id is not None else result.ignition["membership"].tolist()
        paths = [results.fire_movement(result, k, step=step) for k in ids]
        out_path = Path(out) if out else Path(result_dir) / "paths.geojson"
        dataio._dump_json(dataio.paths_geojson(paths), out_path)
    except FireclusterError as exc:
        raise click.ClickException(str(exc)) from exc
    for p in paths:
        click.echo(f"cluster {p.membership}: {len(p.steps)} path point(s) at step {p.step}")
    click.echo(f"wrote {out_path}")


@main.command()
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False))
@_ingest_options
@click.option("--active-times", callback=_int_list, required=True,
              help="Comma-separated ascending activeTime values.")
@click.option("--adj-dists", callback=_float_list, required=True,
              help="Comma-separated ascending adjDist values (m).")
@click.option("--min-pts", default=4, show_default=True, type=int, callback=_positive("count"))
@click.option("--min-time", default=3.0, show_default=True, type=float, callback=_non_negative)
@click.option("--time-unit", default="h", show_default=True)
@click.option("--time-step", default=1.0, show_default=True, type=float, callback=_positive("step"))
@click.option("--out", "-o", default="noise_scan.csv", show_default=True,
              type=click.Path(dir_okay=False), help="Output CSV path.")
@click.option("--threads", type=int, default=None, envvar="FIRECLUSTER_THREADS",
              callback=_positive("thread count"), help="Parallel grid cells.")
def tune(input_csv, active_times, adj_dists, min_pts, min_time, time_unit, time_step,
         out, threads, **ingest_kw):
    """Scan a parameter grid and write the noise-percentage table."""
    try:
        grid = tuning.TuningGrid(
            active_times=active_times,
            adj_dists=adj_dists,
            min_pts=min_pts,
            min_time=min_time,
            time=TimeConfig(unit=time_unit, step=time_step),
        )
    except FireclusterError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        df = _ingest(input_csv, **ingest_kw)
        table = tuning.noise_scan(df, grid, max_workers=threads)
        table.to_csv(out, index=False)
    except FireclusterError as exc:
        raise click.ClickException(str(exc)) from exc
    hints = tuning.largest_drop(table)
    click.echo(f"wrote {len(table)} grid cells to {out}")
    click.echo(
        "largest noise drop (hint, not a decision): "
        f"adjDist -> {hints['adjDist']}, activeTime -> {hints['activeTime']}"
    )


@main.command()
@click.option("--preset", default="single", show_default=True,
              type=click.Choice(sorted(synth.PRESETS)), help="Scenario preset.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--noise-points", type=int, default=None, callback=_non_negative,
              help="Override the preset's isolated noise detections.")
@click.option("--gap-len", type=int, default=None, callback=_non_negative,
              help="Override the smolder preset's gap length (indices).")
@click.option("--out", "-o", default="synthetic.csv", show_default=True,
              type=click.Path(dir_okay=False), help="Output CSV path.")
def simulate(preset, seed, noise_points, gap_len, out):
    """Generate a synthetic hotspot CSV with a ground-truth column."""
    overrides = {}
    if noise_points is not None:
        overrides["noise_points"] = noise_points
    if preset == "smolder" and gap_len is not None:
        overrides["gap_len"] = gap_len
    try:
        scenario = synth.preset(preset, seed=seed, **overrides)
        df, truth = synth.generate(scenario)
    except FireclusterError as exc:
        raise click.ClickException(str(exc)) from exc
    df = df.assign(truth=truth)
    df.to_csv(out, index=False, date_format=dataio.TIME_FORMAT)
    click.echo(f"wrote {len(df)} synthetic hotspots to {out}")
