from pathlib import Path

import pytest

from energy_coverage.engine import run_scenario
from energy_coverage.scenario import load_scenario

DATA = Path(__file__).parent / "data"

_cache = {}


def cached_run(name: str, controller: str | None = None):
    """Bundled scenario runs are deterministic, so share them across tests."""
    key = (name, controller)
    if key not in _cache:
        cfg = load_scenario(name)
        if controller:
            cfg = cfg.with_controller(controller)
        _cache[key] = run_scenario(cfg)
    return _cache[key]


@pytest.fixture
def data_dir() -> Path:
    return DATA
