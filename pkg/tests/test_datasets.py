import numpy as np
import pytest

from conftest import PLANTED_CSV
from roughrank.datasets import (
    N_PATIENTS,
    N_STROKE,
    REFERENCE_IMPACT,
    ehr_surrogate,
    planted_rows,
    write_csv,
)
from roughrank.impact import impact_value
from roughrank.table import default_schema, discretize, parse_rows


def test_checked_in_fixture_matches_generator(tmp_path):
    regen = write_csv(planted_rows(), tmp_path / "planted.csv")
    assert regen.read_bytes() == PLANTED_CSV.read_bytes()


def test_planted_fixture_is_balanced(planted):
    assert planted.n_rows == 2 * N_STROKE
    assert int(planted.decision.sum()) == N_STROKE


def test_surrogate_shape(surrogate):
    assert surrogate.n_rows == N_PATIENTS
    assert int(surrogate.decision.sum()) == N_STROKE


def test_surrogate_tracks_reference_scores(surrogate):
    for attr, target in REFERENCE_IMPACT.items():
        assert float(impact_value(surrogate, attr)) == pytest.approx(target, rel=0.15)


def test_surrogate_is_deterministic():
    a = ehr_surrogate(seed=3, n=2000, n_pos=60)
    assert a == ehr_surrogate(seed=3, n=2000, n_pos=60)
    assert a != ehr_surrogate(seed=4, n=2000, n_pos=60)


def test_surrogate_parses_under_the_default_schema():
    rows = ehr_surrogate(seed=1, n=500, n_pos=20)
    t = discretize(parse_rows(rows, default_schema()), default_schema())
    assert t.n_rows == 500
    assert np.isin(t.decision, (0, 1)).all()
