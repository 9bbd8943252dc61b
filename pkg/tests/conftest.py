import pytest
import sys
import os

# Add the project root to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from loguru import logger

from src.core.config import get_settings

# Import fixtures so they're available to all tests
from tests.fixtures.datasets import (
    separable_dataset,
    mixed_dataset,
    stump_tree,
    eth_tree,
)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees default settings, independent of the caller's environment."""
    for name in ("PRINDT_LOG_LEVEL", "PRINDT_LOG_FILE", "PRINDT_N_JOBS", "PRINDT_HISTOGRAM_BINS", "PRINDT_TOP_DOT"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop sinks added by the command line so later tests do not write to closed streams."""
    yield
    logger.remove()
    logger.add(sys.stderr)


@pytest.fixture
def write_text(tmp_path):
    """Write a text file under tmp_path and return its path."""
    def _write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
