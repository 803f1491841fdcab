import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from iql.contexts import SpectralPresheaf  # noqa: E402
from iql.instances import fixture_path, load_instance  # noqa: E402

GOLDEN = Path(__file__).resolve().parent / "golden"


def _lattice(name):
    return load_instance(fixture_path(name + ".json"))


@pytest.fixture(scope="session")
def mo2():
    return _lattice("mo2")


@pytest.fixture(scope="session")
def o6():
    return _lattice("o6")


@pytest.fixture(scope="session")
def b22():
    return _lattice("boolean-2-2")


@pytest.fixture(scope="session")
def b23():
    return _lattice("boolean-2-3")


@pytest.fixture(scope="session")
def c2():
    return _lattice("c2-rays")


@pytest.fixture(scope="session")
def c3():
    return _lattice("c3-demo")


@pytest.fixture(scope="session")
def mo2_sheaf(mo2):
    return SpectralPresheaf(mo2)


@pytest.fixture(scope="session")
def c3_sheaf(c3):
    return SpectralPresheaf(c3)


@pytest.fixture(scope="session")
def b23_sheaf(b23):
    return SpectralPresheaf(b23)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
