#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy fallback.

Times the two hot kernels on a realistic sliding-window workload and the
full pipeline on a regional-scale synthetic dataset, then prints a
comparison table.

Usage:
    python benchmarks/bench_kernels.py [--window-size 500] [--repeats 20]
"""

import argparse
import time

import numpy as np

from firecluster import kernels, synth
from firecluster.config import ClusterConfig
from firecluster.pipeline import cluster_hotspots


def _window(rng, n):
    """A window-shaped point cloud: gridded cells with heavy duplication."""
    lon = np.round(rng.uniform(145.8, 146.3, n) / 0.02) * 0.02
    lat = np.round(rng.uniform(-37.3, -36.8, n) / 0.02) * 0.02
    labels = np.where(rng.random(n) < 0.9, rng.integers(1, 9, n), 0).astype(np.int64)
    return lon, lat, labels


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(window_size, repeats):
    rng = np.random.default_rng(0)
    lon, lat, labels = _window(rng, window_size)
    rows = []
    for backend in kernels.available_backends():
        kernels.use(backend)
        comp = kernels.connected_components(lon, lat, 3000.0)
        t_comp = _time(lambda: kernels.connected_components(lon, lat, 3000.0), repeats)
        t_near = _time(lambda: kernels.nearest_labeled(lon, lat, comp, labels), repeats)
        t_dist = _time(lambda: kernels.geodesic_pairs(lon, lat, lon[::-1], lat[::-1]), repeats)
        rows.append((backend, t_comp, t_near, t_dist))
    kernels.use("auto")
    return rows


def bench_pipeline():
    df, _ = synth.generate(synth.preset("victoria-scale", seed=7))
    cfg = ClusterConfig()
    rows = []
    for backend in kernels.available_backends():
        kernels.use(backend)
        t0 = time.perf_counter()
        result = cluster_hotspots(df, cfg)
        rows.append((backend, time.perf_counter() - t0, len(df), result.cluster_count))
    kernels.use("auto")
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--window-size", type=int, default=500)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--skip-pipeline", action="store_true")
    args = parser.parse_args()

    print(f"backends available: {kernels.available_backends()}")
    print(f"\nkernels on a {args.window_size}-point window (best of {args.repeats}):")
    print(f"{'backend':<10} {'components':>12} {'nearest':>12} {'distances':>12}")
    rows = bench_kernels(args.window_size, args.repeats)
    for backend, t_comp, t_near, t_dist in rows:
        print(f"{backend:<10} {t_comp * 1e3:>10.3f}ms {t_near * 1e3:>10.3f}ms {t_dist * 1e3:>10.3f}ms")
    if len(rows) == 2:
        print(
            f"{'speedup':<10} {rows[1][1] / rows[0][1]:>11.1f}x "
            f"{rows[1][2] / rows[0][2]:>11.1f}x {rows[1][3] / rows[0][3]:>11.1f}x"
        )

    if not args.skip_pipeline:
        print("\nfull pipeline on the victoria-scale synthetic dataset:")
        rows = bench_pipeline()
        for backend, elapsed, n, k in rows:
            print(f"{backend:<10} {elapsed:>9.2f}s   ({n} hotspots -> {k} clusters)")
        if len(rows) == 2:
            print(f"{'speedup':<10} {rows[1][1] / rows[0][1]:>10.1f}x")


if __name__ == "__main__":
    main()
