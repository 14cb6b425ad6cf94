"""firecluster: spatiotemporal clustering of satellite fire hotspots.

Groups hotspot observations into individual bushfires by sweeping a
sliding window of time indices, joining points within a geodesic
threshold, and carrying cluster labels forward in time; small or
short-lived clusters are filtered out as noise. The result exposes each
fire's ignition point and time, per-hotspot ignition metrics, and
centroid movement paths.
"""

__version__ = "0.1.0"

from firecluster.config import ClusterConfig
from firecluster.engine import (
    Hotspot,
    MembershipState,
    cluster_sweep,
    local_components,
    propagate_labels,
)
from firecluster.errors import (
    ConfigError,
    DomainError,
    FireclusterError,
    IngestError,
    InvalidCoordinateError,
)
from firecluster.geo import Coordinate, centroid, geodesic_distance
from firecluster.noisefilter import apply_noise_filter
from firecluster.pipeline import cluster_hotspots
from firecluster.results import (
    ClusterResult,
    FirePath,
    PathStep,
    ResultSummary,
    build_result,
    extract_fire,
    fire_movement,
    summarize,
)
from firecluster.synth import FireScenario, expected_labels, generate
from firecluster.temporal import (
    TimeConfig,
    TimeWindow,
    assign_time_index,
    assign_time_indices,
    window_for,
)
from firecluster.tuning import TuningGrid, largest_drop, noise_scan

__all__ = [
    "ClusterConfig",
    "ClusterResult",
    "ConfigError",
    "Coordinate",
    "DomainError",
    "FireclusterError",
    "FirePath",
    "FireScenario",
    "Hotspot",
    "IngestError",
    "InvalidCoordinateError",
    "MembershipState",
    "PathStep",
    "ResultSummary",
    "TimeConfig",
    "TimeWindow",
    "TuningGrid",
    "apply_noise_filter",
    "assign_time_index",
    "assign_time_indices",
    "build_result",
    "centroid",
    "cluster_hotspots",
    "cluster_sweep",
    "expected_labels",
    "extract_fire",
    "fire_movement",
    "generate",
    "geodesic_distance",
    "largest_drop",
    "local_components",
    "noise_scan",
    "propagate_labels",
    "summarize",
    "window_for",
]
