import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from firecluster import kernels

FIXTURE_PATH = Path(
    os.environ.get("FIRECLUSTER_FIXTURE", Path(__file__).parent / "data" / "hotspots.csv")
)

requires_fixture = pytest.mark.skipif(
    not FIXTURE_PATH.exists(),
    reason=(
        f"golden 1070-row fixture not vendored (network-restricted build); place the "
        f"R package's hotspots data as CSV at {FIXTURE_PATH} or set FIRECLUSTER_FIXTURE"
    ),
)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run a test under each available kernel backend."""
    kernels.use(request.param)
    yield request.param
    kernels.use("auto")
