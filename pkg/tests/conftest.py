import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.environment.coefficients import LqCoefficients
from mfc_engine.utils.config_loader import load_config

CONFIG_DIR = os.path.join(ROOT, "config")


@pytest.fixture
def config_dir() -> str:
    return CONFIG_DIR


@pytest.fixture
def trading_config():
    return load_config(os.path.join(CONFIG_DIR, "trading.json"))


@pytest.fixture
def sysrisk_config():
    return load_config(os.path.join(CONFIG_DIR, "sysrisk.json"))


@pytest.fixture
def trading_coeffs() -> LqCoefficients:
    return LqCoefficients.trading()


@pytest.fixture
def sysrisk_coeffs() -> LqCoefficients:
    return LqCoefficients.systemic_risk()


@pytest.fixture
def small_grid() -> TimeGrid:
    return TimeGrid(1.0, 10)


@pytest.fixture
def fine_grid() -> TimeGrid:
    return TimeGrid(1.0, 2000)
