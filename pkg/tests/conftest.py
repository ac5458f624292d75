from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

SEED_DOI = "10.1016/s0140-6736(97)11096-0"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def wakefield_dir() -> Path:
    return FIXTURES / "wakefield"


@pytest.fixture(scope="session")
def mini_dir() -> Path:
    return FIXTURES / "mini"


@pytest.fixture(scope="session")
def grid():
    from retrace.annotate import load_decision_grid
    return load_decision_grid()
