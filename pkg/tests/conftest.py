import pathlib

import pytest

from uvk.kernel import GlobalEnv
from uvk.library.session import Session
from uvk.settings import LoadPathEntry
from uvk.universes import UniverseMode

ROOT = pathlib.Path(__file__).parent.parent


@pytest.fixture(scope="session")
def repo_root() -> pathlib.Path:
    return ROOT


@pytest.fixture(scope="session")
def foundations() -> LoadPathEntry:
    return LoadPathEntry(prefix="Foundations", directory=ROOT / "lib" / "Foundations", recursive=True)


@pytest.fixture
def env() -> GlobalEnv:
    return GlobalEnv(UniverseMode.STRICT)


@pytest.fixture
def strict_session(foundations) -> Session:
    return Session(UniverseMode.STRICT, [foundations])


@pytest.fixture
def off_session(foundations) -> Session:
    return Session(UniverseMode.OFF, [foundations])
