from unittest.mock import patch

import numpy as np
import pytest

from pspin.config import get_settings
from pspin.schemas.model import ModelSpec
from pspin.services.critical_service import solve_boundary
from pspin.services.quadrature_service import gauss_hermite


@pytest.fixture(scope="session")
def rule():
    """Default 200-point Gauss-Hermite rule"""
    return gauss_hermite(200)


@pytest.fixture(scope="session")
def fine_rule():
    """Doubled-order rule for stability checks"""
    return gauss_hermite(400)


@pytest.fixture(scope="session")
def coarse_rule():
    """Small rule for the n^k Cole-Hopf levels"""
    return gauss_hermite(60)


@pytest.fixture(scope="session")
def boundary_p3(rule):
    """Solved RS/1RSB boundary for p = 3"""
    return solve_boundary(3, rule)


@pytest.fixture(scope="session")
def boundary_p20(rule):
    """Solved RS/1RSB boundary for p = 20"""
    return solve_boundary(20, rule)


@pytest.fixture
def identity_models():
    """Nine models used by the property checks"""
    return [ModelSpec(p=p, beta=beta) for p in (3, 4, 10) for beta in (0.5, 1.0, 1.5)]


@pytest.fixture
def mc_normals():
    """Fixed-seed standard normal sample for Monte Carlo oracles"""
    return np.random.default_rng(20240501).standard_normal(10**7)


@pytest.fixture
def mock_env_vars():
    """Mock environment variables for testing"""
    with patch.dict('os.environ', {
        'PSPIN_QUAD_ORDER': '120',
        'PSPIN_GRID': '501',
        'PSPIN_ROOT_GRID': '2001',
        'PSPIN_F_TOLERANCE': '1e-6',
        'PSPIN_LOG_LEVEL': 'debug',
    }):
        get_settings.cache_clear()
        yield
    get_settings.cache_clear()
