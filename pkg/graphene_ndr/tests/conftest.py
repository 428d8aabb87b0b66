import json
import tempfile
from pathlib import Path

import pytest

from graphene_ndr.config import DeviceConfig
from graphene_ndr.core.landauer import IVCurve, IVPoint


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests"""
    with tempfile.TemporaryDirectory() as tmpdirname:
        yield Path(tmpdirname)


@pytest.fixture
def fig3_config():
    """Middle curve of the fig3 family: alpha = 0.3, phi1 = 15 deg, D = 100 nm, 300 K, default V0"""
    return DeviceConfig(D=100.0, alpha=0.3, phi1=15.0)


@pytest.fixture
def normal_incidence_config():
    return DeviceConfig(D=100.0, E_F=24.8, phi1=0.0)


@pytest.fixture
def config_file(temp_dir):
    """Write a small valid config document and return its path"""
    file_path = temp_dir / "device.json"
    data = {
        "D": 100,
        "alpha": 0.3,
        "phi1": 15,
        "bias_sweep": {"start": 0, "stop": 600, "count": 7},
    }
    file_path.write_text(json.dumps(data))
    return file_path


def make_curve(voltages, currents, cfg):
    points = tuple(
        IVPoint(V=float(v), I=float(i), n_evals=0, est_error=0.0)
        for v, i in zip(voltages, currents)
    )
    return IVCurve(points=points, config_echo=cfg)


@pytest.fixture
def curve_factory(fig3_config):
    """Build an IVCurve from plain sequences"""

    def factory(voltages, currents, cfg=None):
        return make_curve(voltages, currents, cfg or fig3_config)

    return factory
