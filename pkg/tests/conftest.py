"""
Shared fixtures and configuration for all tests.
"""
import os

import pytest

# Override environment settings for testing
os.environ["ENVIRONMENT"] = "testing"
os.environ["LOG_LEVEL"] = "WARNING"
os.environ["MAX_WORKERS"] = "1"
os.environ["BACKEND_CORS_ORIGINS"] = '["http://localhost:3000"]'

from fastapi.testclient import TestClient

from app.main import app
from app.services.formula_service import FormulaService
from app.services.ground_transform_service import GroundTransformService
from app.services.lifted_transform_service import LiftedTransformService
from app.services.reasoning_service import ReasoningService
from tests.helpers import load_mln


# Bundled MLNs
@pytest.fixture
def example3():
    return load_mln("example3")


@pytest.fixture
def example4():
    return load_mln("example4")


@pytest.fixture
def example5():
    return load_mln("example5")


@pytest.fixture
def birds():
    return load_mln("birds")


@pytest.fixture
def smokers():
    return load_mln("smokers")


# Services
@pytest.fixture
def formula_service():
    return FormulaService()


@pytest.fixture
def ground_transform_service():
    return GroundTransformService()


@pytest.fixture
def lifted_transform_service():
    return LiftedTransformService()


@pytest.fixture
def reasoning_service():
    return ReasoningService()


# Test client
@pytest.fixture
def client():
    """Return a TestClient for making requests to the app."""
    with TestClient(app) as test_client:
        yield test_client
    app.dependency_overrides = {}
