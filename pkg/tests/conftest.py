import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from adandor import build_graph, parse_graph  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"


def load(name):
    return build_graph(parse_graph((DATA / name).read_text()))


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def five_classes():
    return load("fig2.graph")


@pytest.fixture
def tuples3():
    return load("fig3.graph")


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES = []


def report_criterion(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
