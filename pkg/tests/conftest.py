import pathlib

import numpy as np
import pytest

from labyrinth.imageio import read_pgm

DATA = pathlib.Path(__file__).parent / "data"

_acceptance = []


@pytest.fixture(scope="session")
def astronaut():
    """256x256 gray portrait (NASA, public domain), BT.601 gray, anti-aliased resize, rounded half-up."""
    return read_pgm((DATA / "astronaut_256.pgm").read_bytes())


@pytest.fixture
def nprng():
    return np.random.default_rng(20061015)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
