import json
from datetime import datetime

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from firecluster import dataio, results, synth
from firecluster.cli import main
from firecluster.config import ClusterConfig
from firecluster.dataio import IngestSpec, ingest, load_result, write_outputs
from firecluster.errors import ConfigError, DomainError, IngestError
from firecluster.pipeline import cluster_hotspots

GOOD_CSV = """lon,lat,obsTime,irradiance
149.30,-37.76,2019-12-29 13:10:00,150
149.32,-37.78,2019-12-29 13:10:00,80
149.30,-37.78,2019-12-29 13:20:00,101
149.34,-37.78,2019-12-29 12:50:00,99.9
149.36,-37.78,2019-12-29 14:10:00,250
149.38,-37.80,2019-12-29 15:10:00,100
149.40,-37.80,2019-12-29 16:10:00,300
149.42,-37.82,2019-12-29 17:10:00,100.0
149.44,-37.82,2019-12-29 18:10:00,90
149.46,-37.84,2019-12-29 19:10:00,20
"""


def _write(tmp_path, text, name="hotspots.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def _synthetic_result(seed=20):
    df, _ = synth.generate(synth.preset("noisy", seed=seed))
    return df, cluster_hotspots(df, ClusterConfig())


class TestIngest:
    def test_plain_read_sorted(self, tmp_path):
        path = _write(tmp_path, GOOD_CSV)
        df = ingest(IngestSpec(path=str(path)))
        assert len(df) == 10
        assert df["obsTime"].is_monotonic_increasing
        assert df["obsTime"].iloc[0] == pd.Timestamp("2019-12-29 12:50:00")
        # ties keep input order: 13:10 rows stay lon 149.30 then 149.32
        assert df["lon"].iloc[1] == 149.30 and df["lon"].iloc[2] == 149.32

    def test_irradiance_filter_strictly_above(self, tmp_path):
        path = _write(tmp_path, GOOD_CSV)
        df = ingest(
            IngestSpec(path=str(path), irradiance_column="irradiance", irradiance_min=100.0)
        )
        # strictly above 100: 150, 101, 250, 300; the two boundary rows at
        # exactly 100 are excluded
        vals = [150, 80, 101, 99.9, 250, 100, 300, 100.0, 90, 20]
        assert sum(v > 100.0 for v in vals) == 4
        assert len(df) == 4

    def test_bbox_filter(self, tmp_path):
        path = _write(tmp_path, GOOD_CSV)
        df = ingest(IngestSpec(path=str(path), bbox=(149.29, -37.79, 149.37, -37.75)))
        assert len(df) == 5

    def test_missing_column_is_config_error(self, tmp_path):
        path = _write(tmp_path, GOOD_CSV)
        with pytest.raises(ConfigError, match="brightness"):
            ingest(IngestSpec(path=str(path), lon_column="brightness"))

    def test_bad_rows_strict_reports_line(self, tmp_path):
        text = GOOD_CSV + "oops,-37.0,2019-12-29 20:10:00,50\n"
        path = _write(tmp_path, text)
        with pytest.raises(IngestError, match="line.*12"):
            ingest(IngestSpec(path=str(path)))

    def test_bad_rows_lenient_skips(self, tmp_path):
        text = GOOD_CSV + "oops,-37.0,2019-12-29 20:10:00,50\n149.5,-91.0,2019-12-29 21:10:00,50\n"
        path = _write(tmp_path, text)
        df = ingest(IngestSpec(path=str(path), lenient=True))
        assert len(df) == 10

    def test_empty_file_with_header(self, tmp_path):
        path = _write(tmp_path, "lon,lat,obsTime\n")
        df = ingest(IngestSpec(path=str(path)))
        assert len(df) == 0
        with pytest.raises(DomainError, match="empty"):
            cluster_hotspots(df, ClusterConfig())

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestError):
            ingest(IngestSpec(path=str(tmp_path / "nope.csv")))

    def test_timezone_offsets_dropped(self, tmp_path):
        text = "lon,lat,obsTime\n146.0,-37.0,2019-12-29T13:10:00+11:00\n"
        path = _write(tmp_path, text)
        df = ingest(IngestSpec(path=str(path)))
        assert df["obsTime"].iloc[0] == pd.Timestamp("2019-12-29 13:10:00")


class TestWriteOutputs:
    def test_file_set_and_counts(self, tmp_path):
        df, res = _synthetic_result()
        written = write_outputs(res, tmp_path / "out")
        names = {p.name for p in written}
        assert names == {"hotspots.csv", "ignitions.csv", "clusters.geojson", "timeline.csv", "settings.json"}
        hot = pd.read_csv(tmp_path / "out" / "hotspots.csv")
        ign = pd.read_csv(tmp_path / "out" / "ignitions.csv")
        assert len(hot) == len(res.hotspots)
        assert len(ign) == res.cluster_count
        tl = pd.read_csv(tmp_path / "out" / "timeline.csv")
        assert list(tl.columns) == ["obsTime", "membership", "noise"]

    def test_settings_echo(self, tmp_path):
        df, res = _synthetic_result()
        write_outputs(res, tmp_path / "out")
        settings = json.loads((tmp_path / "out" / "settings.json").read_text())
        assert settings == {
            "activeTime": 24,
            "adjDist": 3000.0,
            "minPts": 4,
            "minTime": 3.0,
            "ignitionCenter": "mean",
            "timeUnit": "h",
            "timeStep": 1.0,
        }

    def test_all_noise_gives_header_only_ignitions(self, tmp_path):
        df, _ = _synthetic_result()
        res = cluster_hotspots(df, ClusterConfig(min_pts=10**6))
        assert res.cluster_count == 0
        write_outputs(res, tmp_path / "out")
        lines = (tmp_path / "out" / "ignitions.csv").read_text().strip().splitlines()
        assert len(lines) == 1

    def test_geojson_structure(self, tmp_path):
        df, res = _synthetic_result()
        write_outputs(res, tmp_path / "out")
        gj = json.loads((tmp_path / "out" / "clusters.geojson").read_text())
        assert gj["type"] == "FeatureCollection"
        assert len(gj["features"]) == len(res.hotspots) + res.cluster_count
        point = gj["features"][0]
        assert list(point["geometry"]["coordinates"]) == [
            res.hotspots["lon"].iloc[0], res.hotspots["lat"].iloc[0],
        ]
        ignition_features = [
            f for f in gj["features"] if f["properties"].get("type") == "ignition"
        ]
        assert len(ignition_features) == res.cluster_count

    def test_paths_geojson(self, tmp_path):
        df, res = _synthetic_result()
        paths = [results.fire_movement(res, 1, step=6)]
        write_outputs(res, tmp_path / "out", paths=paths)
        gj = json.loads((tmp_path / "out" / "paths.geojson").read_text())
        assert gj["features"][0]["geometry"]["type"] == "LineString"
        assert gj["features"][0]["properties"]["membership"] == 1

    def test_write_is_deterministic(self, tmp_path):
        df, res = _synthetic_result()
        write_outputs(res, tmp_path / "a")
        write_outputs(res, tmp_path / "b")
        for name in ("hotspots.csv", "ignitions.csv", "clusters.geojson", "timeline.csv", "settings.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestRoundTrip:
    def test_reingest_and_recluster_identical(self, tmp_path):
        df, res = _synthetic_result()
        write_outputs(res, tmp_path / "out")
        again = ingest(IngestSpec(path=str(tmp_path / "out" / "hotspots.csv")))
        res2 = cluster_hotspots(again, ClusterConfig())
        assert (
            res.hotspots["membership"].to_numpy() == res2.hotspots["membership"].to_numpy()
        ).all()
        assert np.allclose(res.hotspots["lon"], res2.hotspots["lon"])  # lossless lon/lat

    def test_load_result_matches(self, tmp_path):
        df, res = _synthetic_result()
        write_outputs(res, tmp_path / "out")
        loaded = load_result(tmp_path / "out")
        assert loaded.cluster_count == res.cluster_count
        assert loaded.noise_count == res.noise_count
        assert (loaded.hotspots["membership"] == res.hotspots["membership"]).all()
        assert loaded.settings == res.settings
        # analytics run identically on the loaded result
        assert str(results.summarize(loaded)) == str(results.summarize(res))
        p1 = results.fire_movement(res, 1, step=6)
        p2 = results.fire_movement(loaded, 1, step=6)
        assert p1 == p2

    def test_load_result_rejects_other_dirs(self, tmp_path):
        with pytest.raises(IngestError):
            load_result(tmp_path)


class TestCli:
    def _simulate(self, runner, path, preset="noisy", seed=3):
        out = runner.invoke(main, ["simulate", "--preset", preset, "--seed", str(seed), "--out", str(path)])
        assert out.exit_code == 0, out.output
        return path

    def test_cluster_happy_path(self, tmp_path):
        runner = CliRunner()
        csv = self._simulate(runner, tmp_path / "synth.csv")
        result = runner.invoke(
            main, ["cluster", str(csv), "--out", str(tmp_path / "run")], catch_exceptions=False
        )
        assert result.exit_code == 0
        assert "clusters" in result.output
        assert (tmp_path / "run" / "hotspots.csv").exists()

    def test_cluster_logs_counts(self, tmp_path):
        runner = CliRunner()
        csv = self._simulate(runner, tmp_path / "synth.csv")
        result = runner.invoke(main, ["cluster", str(csv), "--out", str(tmp_path / "run")])
        assert result.exit_code == 0
        # the log line carries both counts (stderr is merged into output here)
        assert "1 clusters" in result.output
        assert "5 noise" in result.output

    def test_min_pts_zero_is_usage_error(self, tmp_path):
        runner = CliRunner()
        csv = self._simulate(runner, tmp_path / "synth.csv")
        result = runner.invoke(main, ["cluster", str(csv), "--min-pts", "0"])
        assert result.exit_code == 2

    def test_unknown_option_is_usage_error(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, ["cluster", "--frobnicate"])
        assert result.exit_code == 2

    def test_empty_input_is_runtime_error(self, tmp_path):
        runner = CliRunner()
        path = _write(tmp_path, "lon,lat,obsTime\n")
        result = runner.invoke(main, ["cluster", str(path), "--out", str(tmp_path / "run")])
        assert result.exit_code == 1
        assert "empty" in result.output.lower()

    def test_tune_grid_cardinality(self, tmp_path):
        runner = CliRunner()
        csv = self._simulate(runner, tmp_path / "synth.csv")
        out_csv = tmp_path / "scan.csv"
        result = runner.invoke(
            main,
            [
                "tune", str(csv),
                "--active-times", "6,12,24,48",
                "--adj-dists", "1000,2000,3000,4000",
                "--out", str(out_csv),
            ],
        )
        assert result.exit_code == 0, result.output
        table = pd.read_csv(out_csv)
        assert len(table) == 16

    def test_extract_summary_movement_on_stored_result(self, tmp_path):
        runner = CliRunner()
        csv = self._simulate(runner, tmp_path / "synth.csv")
        run_dir = tmp_path / "run"
        assert runner.invoke(main, ["cluster", str(csv), "--out", str(run_dir)]).exit_code == 0

        result = runner.invoke(
            main, ["extract", str(run_dir), "--include-noise", "--clusters", "1"]
        )
        assert result.exit_code == 0, result.output
        table = pd.read_csv(run_dir / "extract.csv")
        assert set(table["type"]) >= {"hotspot", "ignition"}

        result = runner.invoke(main, ["summary", str(run_dir)])
        assert result.exit_code == 0
        assert "noise points" in result.output

        result = runner.invoke(main, ["movement", str(run_dir), "--cluster", "1", "--step", "6"])
        assert result.exit_code == 0
        assert (run_dir / "paths.geojson").exists()

    def test_movement_unknown_cluster_fails_cleanly(self, tmp_path):
        runner = CliRunner()
        csv = self._simulate(runner, tmp_path / "synth.csv")
        run_dir = tmp_path / "run"
        runner.invoke(main, ["cluster", str(csv), "--out", str(run_dir)])
        result = runner.invoke(main, ["movement", str(run_dir), "--cluster", "42"])
        assert result.exit_code == 1

    def test_simulate_emits_ingestible_csv(self, tmp_path):
        runner = CliRunner()
        csv = self._simulate(runner, tmp_path / "synth.csv", preset="separated", seed=8)
        df = ingest(IngestSpec(path=str(csv)))
        assert len(df) > 0

    def test_cluster_rerun_byte_identical(self, tmp_path):
        runner = CliRunner()
        csv = self._simulate(runner, tmp_path / "synth.csv")
        runner.invoke(main, ["cluster", str(csv), "--out", str(tmp_path / "r1")])
        runner.invoke(main, ["cluster", str(csv), "--out", str(tmp_path / "r2")])
        for name in ("hotspots.csv", "ignitions.csv", "clusters.geojson"):
            assert (tmp_path / "r1" / name).read_bytes() == (tmp_path / "r2" / name).read_bytes()
