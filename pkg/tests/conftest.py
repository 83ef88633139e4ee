import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mirrorkit.ci_model import CISpec

FIXTURES = Path(__file__).parent.parent / "src" / "mirrorkit" / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def spec_6_1() -> CISpec:
    return CISpec.load(FIXTURES / "example_6_1.json")


@pytest.fixture(scope="session")
def spec_6_2() -> CISpec:
    return CISpec.load(FIXTURES / "example_6_2.json")


@pytest.fixture(scope="session")
def quadric() -> CISpec:
    return CISpec.load(FIXTURES / "derived_quadric.json")


@pytest.fixture(scope="session")
def corrupted() -> CISpec:
    return CISpec.load(FIXTURES / "corrupted_weights.json")
