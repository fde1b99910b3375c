import os
from pathlib import Path

import numpy as np
import pytest

from roughrank.datasets import ehr_surrogate, age_lems_table, toy_stroke_table
from roughrank.table import DecisionTable, default_schema, discretize, load_csv, parse_rows

FIXTURES = Path(__file__).parent / "fixtures"
PLANTED_CSV = FIXTURES / "planted_1096.csv"

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_table(rng, n_rows=None, n_attrs=None, max_levels=4) -> DecisionTable:
    n_rows = int(rng.integers(1, 40)) if n_rows is None else n_rows
    n_attrs = int(rng.integers(1, 5)) if n_attrs is None else n_attrs
    cols = {f"a{j}": rng.integers(0, int(rng.integers(1, max_levels + 1)), n_rows)
            for j in range(n_attrs)}
    return DecisionTable.from_columns(cols, rng.integers(0, 2, n_rows))


@pytest.fixture
def t1():
    return age_lems_table()


@pytest.fixture
def t2():
    return toy_stroke_table()


@pytest.fixture(scope="session")
def planted():
    return load_csv(PLANTED_CSV, default_schema())


@pytest.fixture(scope="session")
def surrogate():
    """The real EHR file when ROUGHRANK_STROKE_CSV points at it, else the calibrated stand-in."""
    path = os.environ.get("ROUGHRANK_STROKE_CSV")
    if path:
        return load_csv(path, default_schema())
    return discretize(parse_rows(ehr_surrogate(seed=0), default_schema()), default_schema())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
