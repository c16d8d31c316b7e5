import logging
from dataclasses import asdict

import pytest

from balanced.core import Limits, build, set_limits

logging.basicConfig(level=logging.INFO)


# Every test starts from the default limits
@pytest.fixture(autouse=True)
def default_limits():
    set_limits(**asdict(Limits()))
    yield
    set_limits(**asdict(Limits()))


@pytest.fixture
def P3():
    return build([1, 2, 3], [{1, 2}, {2, 3}])


@pytest.fixture
def C3():
    return build([1, 2, 3], [{1, 2}, {2, 3}, {3, 1}])


@pytest.fixture
def C4():
    return build([1, 2, 3, 4], [{1, 2}, {2, 3}, {3, 4}, {4, 1}])


@pytest.fixture
def T1():
    return build([1, 2, 3, 4], [{1, 2, 3}, {3, 4}])


@pytest.fixture
def H5():
    return build([1, 2, 3, 4], [{1, 2}, {2, 3}, {1, 3, 4}])


@pytest.fixture
def P5():
    return build([1, 2, 3, 4, 5], [{1, 2}, {2, 3}, {3, 4}, {4, 5}])


@pytest.fixture
def singleton():
    """A singleton edge {1} next to {1, 2}."""
    return build([1, 2], [{1}, {1, 2}])


@pytest.fixture
def edge12():
    return build([1, 2], [{1, 2}])


@pytest.fixture
def star3():
    """K_{1,3}: three edges through vertex 1."""
    return build([1, 2, 3, 4], [{1, 2}, {1, 3}, {1, 4}])


# CLI runs must not write log files or touch a ledger unless a test asks for one
@pytest.fixture
def cli_env(monkeypatch, tmp_path):
    monkeypatch.setenv("LOG_DIR", "")
    monkeypatch.delenv("REPORT_DB", raising=False)
    monkeypatch.delenv("DRY_RUN", raising=False)
    monkeypatch.delenv("DEFAULT_WEIGHTS", raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="run acceptance-scale tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale test, runs with --run-slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
