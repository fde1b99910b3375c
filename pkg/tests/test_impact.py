from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from strategies import permutations_of, tables
from roughrank.datasets import PLANTED_ORDER, planted_impact
from roughrank.errors import UnknownAttributeError
from roughrank.impact import (
    impact_factor,
    impact_value,
    minmax,
    rank_attributes,
    retention_index,
)
from roughrank.table import DecisionTable


class TestWorkedTable:
    def test_retention_and_impact_exact(self, t2):
        assert retention_index(t2, "age").retention == Fraction(11, 6)
        assert impact_factor(t2, "age").exact == Fraction(1100, 42)
        assert retention_index(t2, "heart disease").retention == Fraction(13, 10)
        assert impact_factor(t2, "heart disease").exact == Fraction(130, 7)

    def test_trace_lists_every_class(self, t2):
        tr = retention_index(t2, "age")
        assert [(c.members, c.positives, c.size) for c in tr.classes] == [
            ((0, 1, 5), 2, 3), ((2, 3), 1, 2), ((4, 6), 0, 2)]
        assert [c.contribution for c in tr.classes] == [Fraction(4, 3), Fraction(1, 2), 0]
        d = tr.to_dict()
        assert d["retention_index"] == pytest.approx(11 / 6)

    def test_target_label_zero(self, t2):
        # hand count with label 0 as the concept: {0,1,5}->1, {2,3}->1, {4,6}->2
        assert impact_value(t2, "age", target_label=0) == Fraction(850, 21)
        # {0,2,3,4,6}->3, {1,5}->1
        assert impact_value(t2, "heart disease", target_label=0) == Fraction(230, 7)

    def test_unit_scale(self, t2):
        assert impact_value(t2, "age", scale="unit") == Fraction(11, 42)

    def test_ranking(self, t2):
        ranked = rank_attributes(t2)
        assert [s.attribute for s in ranked] == ["age", "heart disease"]
        assert [s.normalized for s in ranked] == [1.0, 0.0]

    def test_binary_attribute_keeps_signal_where_gamma_is_zero(self, t2):
        assert impact_value(t2, "heart disease") > 0

    def test_unknown_attribute(self, t2):
        with pytest.raises(UnknownAttributeError):
            impact_factor(t2, "weight")
        with pytest.raises(UnknownAttributeError):
            impact_factor(t2, "stroke")


def test_no_positives_means_zero(t1):
    assert impact_value(t1, "Age") == 0
    assert impact_value(t1, "LEMS") == 0


def test_planted_fixture_order(planted):
    ranked = rank_attributes(planted)
    assert tuple(s.attribute for s in ranked) == PLANTED_ORDER
    expected = planted_impact()
    for s in ranked:
        assert s.value == pytest.approx(expected[s.attribute], abs=1e-12)


def test_perfect_predictor_is_maximal():
    d = [0, 1, 1, 0, 1, 0, 0, 1]
    t = DecisionTable.from_columns({"copy": d, "noise": [0, 0, 1, 1, 0, 0, 1, 1]}, d)
    p = Fraction(sum(d), len(d))
    assert impact_value(t, "copy") == 100 * p
    assert impact_value(t, "noise") < impact_value(t, "copy")


def test_minmax():
    assert minmax([2.0, 4.0, 3.0]).tolist() == [0.0, 1.0, 0.5]
    assert minmax([5.0, 5.0]).tolist() == [0.0, 0.0]


@settings(max_examples=150, deadline=None)
@given(tables())
def test_matches_definition_and_bounds(t):
    p = Fraction(int(t.decision.sum()), t.n_rows)
    for a in t.attributes:
        v = impact_value(t, a)
        assert v == oracles.impact(t, a)
        # pos^2/size >= pos * p overall (Cauchy-Schwarz), and pos^2/size <= pos
        assert 100 * p * p <= v <= 100 * p
        assert impact_factor(t, a).exact == v
        assert retention_index(t, a).impact() == v


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_row_permutation_invariance(data):
    t = data.draw(tables())
    perm = data.draw(permutations_of(t.n_rows))
    shuffled = t.take(perm)
    for a in t.attributes:
        assert impact_value(shuffled, a) == impact_value(t, a)


@settings(max_examples=150, deadline=None)
@given(tables(), st.integers(2, 4))
def test_duplicating_rows_keeps_the_score(t, k):
    rep = t.take(np.tile(np.arange(t.n_rows), k))
    for a in t.attributes:
        assert impact_value(rep, a) == impact_value(t, a)
