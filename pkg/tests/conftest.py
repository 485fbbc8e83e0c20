"""
Pytest configuration and common fixtures for the Cartan workbench.
"""

import os
import tempfile

os.environ.setdefault("ENV_NAME", "test")

import pytest

from src.cartan_algebras import DerivationElement, regular_nilpotent_derivation
from src.cli.config import build_config
from src.divided_power import AlgebraShape, DPElement
from src.scalars import ext_field_make
from src.utils.rng import substream


@pytest.fixture
def field5():
    """Fixture providing the prime field F_5"""
    return ext_field_make(5)


@pytest.fixture
def field3():
    """Fixture providing the prime field F_3"""
    return ext_field_make(3)


@pytest.fixture
def rng():
    """Fixture providing a seeded random stream"""
    return substream(1234, 0)


@pytest.fixture
def o11(field5):
    """Fixture providing O(1;1) over F_5"""
    return AlgebraShape.truncated(field5, 1)


@pytest.fixture
def o21(field5):
    """Fixture providing O(2;1) over F_5"""
    return AlgebraShape.truncated(field5, 2)


@pytest.fixture
def o31(field5):
    """Fixture providing O(3;1) over F_5"""
    return AlgebraShape.truncated(field5, 3)


@pytest.fixture
def o12(field5):
    """Fixture providing O(1;2) over F_5, the coefficient ring of the Zassenhaus algebra"""
    return AlgebraShape.one_variable(field5, 2)


@pytest.fixture
def o21_p3(field3):
    """Fixture providing O(2;1) over F_3"""
    return AlgebraShape.truncated(field3, 2)


@pytest.fixture
def regular_w21(o21):
    """Fixture providing d_1 + x_1^{p-1} d_2 in W(2;1)"""
    return regular_nilpotent_derivation(o21)


@pytest.fixture
def partial_w21(o21):
    """Fixture providing d_1 in W(2;1)"""
    return DerivationElement.partial(o21, 0)


@pytest.fixture
def x1_o21(o21):
    """Fixture providing the variable x_1 of O(2;1)"""
    return DPElement.variable(o21, 0)


@pytest.fixture
def witt_config():
    """Fixture providing a W(1;1) session over F_5"""
    return build_config(p=5, family="witt", m=1, seed=7, workers=1)


@pytest.fixture
def envelope_config():
    """Fixture providing a W(1;2)_p session over F_5"""
    return build_config(p=5, family="zassenhaus-envelope", n=2, seed=7, workers=1)


@pytest.fixture
def semidirect_config():
    """Fixture providing an sl_2 x O(1;1) x| k d session over F_5"""
    return build_config(p=5, family="sl2-semidirect", seed=7, workers=1)


@pytest.fixture
def temp_dir():
    """Fixture providing temporary directory for file operations"""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield temp_dir


@pytest.fixture
def clean_workbench_env(monkeypatch):
    """Fixture removing workbench overrides from the environment"""
    monkeypatch.delenv("WORKBENCH_SEED", raising=False)
    monkeypatch.delenv("WORKBENCH_WORKERS", raising=False)
    yield monkeypatch


# Pytest configuration
def pytest_configure(config):
    """Configure pytest with custom markers"""
    config.addinivalue_line(
        "markers", "unit: mark test as a unit test"
    )
    config.addinivalue_line(
        "markers", "integration: mark test as an integration test"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )
    config.addinivalue_line(
        "markers", "performance: mark test as performance test"
    )
    config.addinivalue_line(
        "markers", "smoke: mark test as a quick smoke test"
    )


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers based on test location"""
    for item in items:
        # Add unit marker for tests in unit directory
        if "unit" in item.nodeid:
            item.add_marker(pytest.mark.unit)

        # Add integration marker for tests in integration directory
        if "integration" in item.nodeid:
            item.add_marker(pytest.mark.integration)

        # Acceptance reproductions run the full-size checks
        if "performance" in item.nodeid:
            item.add_marker(pytest.mark.performance)
            item.add_marker(pytest.mark.slow)
