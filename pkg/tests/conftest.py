from functools import lru_cache
from pathlib import Path

import pytest

from quiverext.quiver import load_presentation, path_basis_algebra

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@lru_cache(maxsize=None)
def pres(name: str):
    return load_presentation(fixture_path(name))


@lru_cache(maxsize=None)
def alg(name: str):
    return path_basis_algebra(pres(name))


@pytest.fixture
def fixtures_dir():
    return FIXTURES
