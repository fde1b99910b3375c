import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from roughrank.benchmark import (
    BENCHMARK_METHODS,
    MethodScoreSet,
    correlate,
    loading_factor,
    loading_factors,
    method_scores,
    midranks,
    pbi,
    pearson_r,
    rank_sum_test,
    sample_excess_kurtosis,
    sample_skewness,
    wilcoxon,
)
from roughrank.errors import DataError, ZeroVarianceError
from roughrank.table import DecisionTable

finite = st.floats(-1e3, 1e3, allow_nan=False)


class TestMoments:
    def test_against_scipy(self, rng):
        x = rng.gamma(2.0, size=500)
        assert sample_skewness(x) == pytest.approx(stats.skew(x, bias=False), rel=1e-10)
        assert sample_excess_kurtosis(x) == pytest.approx(
            stats.kurtosis(x, bias=False), rel=1e-10)

    def test_pbi_two_point_mass(self):
        # closed form for n/2 zeros and n/2 ones: (n-2)(n-3) / ((n-1)(n+1))
        n = 100
        x = np.array([0.0, 1.0] * (n // 2))
        assert pbi(x) == pytest.approx((n - 2) * (n - 3) / ((n - 1) * (n + 1)), rel=1e-12)

    def test_pbi_normal_is_a_third(self, rng):
        assert pbi(rng.standard_normal(200_000)) == pytest.approx(1 / 3, abs=0.01)

    def test_pbi_rejects_bad_input(self):
        with pytest.raises(ValueError):
            pbi([1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            pbi([1.0, 2.0, 3.0, math.nan])
        with pytest.raises(ZeroVarianceError):
            pbi([2.0] * 5)


@settings(max_examples=150, deadline=None)
@given(st.lists(finite, min_size=4, max_size=40), st.floats(0.1, 50), st.floats(-100, 100))
def test_pbi_location_scale_invariance(x, a, b):
    x = np.array(x)
    if np.ptp(x) < 1e-6:
        return
    assert pbi(a * x + b) == pytest.approx(pbi(x), rel=1e-6, abs=1e-9)


class TestRankSum:
    def test_hand_example(self):
        # ranks 1, 2.5, 2.5, 4, 5, 6; label-1 ranks 1 + 2.5 + 5 = 8.5
        # variance 3*3/12 * (7 - 6/30) = 5.1
        r = rank_sum_test([1, 2, 2, 3, 5, 8], [1, 0, 1, 0, 1, 0])
        assert r.statistic == 8.5
        assert r.z == pytest.approx((8.5 - 10.5) / math.sqrt(5.1), rel=1e-12)

    def test_against_scipy_with_ties(self, rng):
        x = rng.integers(0, 5, 300).astype(float)
        y = rng.integers(0, 2, 300)
        res = stats.mannwhitneyu(x[y == 1], x[y == 0], use_continuity=False,
                                 method="asymptotic")
        assert wilcoxon(x, y) == pytest.approx(stats.norm.isf(res.pvalue / 2), rel=1e-8)

    def test_midranks(self):
        assert midranks([3, 1, 3, 2]).tolist() == [3.5, 1.0, 3.5, 2.0]

    def test_constant_values_give_zero(self):
        assert wilcoxon([1, 1, 1, 1], [0, 1, 0, 1]) == 0.0

    def test_needs_both_groups(self):
        with pytest.raises(DataError):
            rank_sum_test([1, 2], [1, 1])

    def test_null_calibration(self, rng):
        x = rng.integers(0, 4, 60).astype(float)
        y = np.array([0, 1] * 30)
        zs = np.array([rank_sum_test(x, rng.permutation(y)).z for _ in range(1000)])
        assert abs(np.abs(zs).mean() - math.sqrt(2 / math.pi)) < 0.06
        # tie-free values so the permutation distribution is close to continuous
        v = rng.standard_normal(60)
        p = 2 * stats.norm.sf([abs(rank_sum_test(v, rng.permutation(y)).z) for _ in range(1000)])
        assert stats.kstest(p, "uniform").pvalue > 1e-3


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=4, max_size=40), st.data())
def test_swapping_labels_flips_z(x, data):
    y = np.array(data.draw(st.lists(st.integers(0, 1), min_size=len(x), max_size=len(x))))
    if y.min() == y.max():
        return
    assert rank_sum_test(x, 1 - y).z == pytest.approx(-rank_sum_test(x, y).z, abs=1e-9)


class TestLoadings:
    def _table(self, rng, n=20_000):
        a = rng.integers(0, 5, n)
        b = np.where(rng.random(n) < 0.7, a, rng.integers(0, 5, n))
        c = rng.integers(0, 5, n)
        return DecisionTable.from_columns({"a": a, "b": b, "c": c}, (a > 2).astype(int))

    def test_two_block_closed_form(self, rng):
        t = self._table(rng)
        rho = np.corrcoef(t.column("a"), t.column("b"))[0, 1]
        f = loading_factors(t)
        assert f["a"] == pytest.approx(math.sqrt((1 + rho) / 2), abs=0.02)
        assert f["b"] == pytest.approx(math.sqrt((1 + rho) / 2), abs=0.02)
        assert abs(f["c"]) < 0.05
        assert loading_factor(t, "a") == f["a"]

    def test_sign_follows_decision(self, rng):
        a = rng.integers(0, 5, 500)
        lv = tuple(str(k) for k in range(5))
        t = DecisionTable(("a", "b"), (lv, lv), np.column_stack([a, 4 - a]),
                          (a > 2).astype(int))
        f = loading_factors(t)
        assert f["a"] == pytest.approx(1.0, abs=1e-6)
        assert f["b"] == pytest.approx(-1.0, abs=1e-6)

    def test_needs_two_varying(self):
        t = DecisionTable.from_columns({"a": [0, 1, 0], "b": [1, 1, 1]}, [0, 1, 0])
        with pytest.raises(DataError):
            loading_factors(t)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_loadings_are_bounded(seed, k):
    rng = np.random.default_rng(seed)
    cols = {f"a{j}": rng.integers(0, 4, 30) for j in range(k)}
    cols["a0"][:2] = [0, 1]
    cols["a1"][:2] = [1, 0]
    t = DecisionTable.from_columns(cols, rng.integers(0, 2, 30))
    assert all(-1.0 <= v <= 1.0 for v in loading_factors(t).values())


class TestPearson:
    def test_against_scipy(self, rng):
        x, y = rng.standard_normal(50), rng.standard_normal(50)
        assert pearson_r(x, y) == pytest.approx(stats.pearsonr(x, y)[0], rel=1e-12)

    def test_zero_variance(self):
        with pytest.raises(ZeroVarianceError):
            pearson_r([1, 1, 1], [1, 2, 3])


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=3, max_size=30),
       st.floats(0.1, 10), st.floats(-10, 10))
def test_pearson_affine_invariance(pairs, a, b):
    x, y = map(np.array, zip(*pairs))
    if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
        return
    assert pearson_r(a * x + b, y) == pytest.approx(pearson_r(x, y), abs=1e-9)


@settings(max_examples=150, deadline=None)
@given(st.dictionaries(st.text("abc", min_size=1, max_size=3), finite, min_size=2))
def test_normalization_preserves_order(scores):
    m = MethodScoreSet.from_raw("x", scores)
    for i in range(len(m.raw)):
        for j in range(len(m.raw)):
            if m.raw[i] < m.raw[j]:
                assert m.normalized[i] <= m.normalized[j]
    assert min(m.normalized) == 0.0


def test_method_scores_and_correlate(planted):
    scores = method_scores(planted)
    assert tuple(scores) == BENCHMARK_METHODS
    acc = {a: float(i) for i, a in enumerate(planted.attributes)}
    res = correlate(scores, acc)
    assert [r.method for r in res] == list(BENCHMARK_METHODS)
    assert all(-1 <= r.pearson_r <= 1 for r in res)
    with pytest.raises(DataError):
        correlate(scores, {"nope": 1.0, "age": 0.0})
