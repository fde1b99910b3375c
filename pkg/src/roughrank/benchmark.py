"""Competing ranking statistics and the accuracy-correlation harness."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError, ZeroVarianceError
from .impact import IMPACT_FACTOR, LOADING, PBI, WILCOXON, impact_value, minmax
from .table import DecisionTable

# added to the correlation-matrix diagonal before the eigendecomposition
RIDGE = 1e-9

BENCHMARK_METHODS = (IMPACT_FACTOR, WILCOXON, PBI, LOADING)


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError("pearson_r needs two equal-length vectors of length >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVarianceError("correlation undefined for a constant vector")
    return max(-1.0, min(1.0, float(dx @ dy) / math.sqrt(sxx * syy)))


def sample_skewness(x) -> float:
    """Bias-corrected sample skewness (G1)."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    d = x - x.mean()
    m2, m3 = np.mean(d**2), np.mean(d**3)
    if m2 == 0:
        raise ZeroVarianceError("skewness undefined for zero variance")
    g1 = m3 / m2**1.5
    return g1 * math.sqrt(n * (n - 1)) / (n - 2)


def sample_excess_kurtosis(x) -> float:
    """Bias-corrected sample excess kurtosis (G2)."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    d = x - x.mean()
    m2, m4 = np.mean(d**2), np.mean(d**4)
    if m2 == 0:
        raise ZeroVarianceError("kurtosis undefined for zero variance")
    g2 = m4 / m2**2 - 3.0
    return ((n + 1) * g2 + 6.0) * (n - 1) / ((n - 2) * (n - 3))


def pbi(values: Sequence[float]) -> float:
    """Sample bimodality coefficient ``(G1^2 + 1) / (G2 + 3(n-1)^2 / ((n-2)(n-3)))``.

    About 1/3 for a normal sample, approaching 1 for a two-point mass.
    Larger means more bimodal.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or len(x) < 4:
        raise ValueError("bimodality coefficient needs at least 4 values")
    if not np.all(np.isfinite(x)):
        raise ValueError("bimodality coefficient needs finite values")
    if np.all(x == x[0]):
        raise ZeroVarianceError("bimodality coefficient undefined for zero variance")
    n = len(x)
    g1 = sample_skewness(x)
    g2 = sample_excess_kurtosis(x)
    return (g1 * g1 + 1.0) / (g2 + 3.0 * (n - 1) ** 2 / ((n - 2) * (n - 3)))


def loading_factors(table: DecisionTable, attrs: Sequence[str] | None = None) -> dict[str, float]:
    """Loadings on the first principal factor of the attribute correlation matrix.

    A loading is the correlation between an attribute and the first
    principal component scores (eigenvector times sqrt(eigenvalue)). The
    component is oriented so the attribute most correlated (in absolute
    value) with the decision loads positively. Constant attributes get
    zero correlation with everything else.
    """
    attrs = tuple(table.attributes if attrs is None else attrs)
    X = np.column_stack([table.column(a) for a in attrs]).astype(np.float64)
    sd = X.std(axis=0)
    varying = sd > 0
    if varying.sum() < 2:
        raise DataError("loading factors need at least 2 attributes with variance")
    Z = np.zeros_like(X)
    Z[:, varying] = (X[:, varying] - X[:, varying].mean(axis=0)) / sd[varying]
    R = (Z.T @ Z) / len(X)
    np.fill_diagonal(R, 1.0)
    R = (R + RIDGE * np.eye(len(attrs))) / (1.0 + RIDGE)
    eigval, eigvec = np.linalg.eigh(R)
    loadings = eigvec[:, -1] * math.sqrt(max(eigval[-1], 0.0))

    y = table.decision.astype(np.float64)
    y_sd = y.std()
    if y_sd > 0:
        corr_d = np.abs(Z.T @ ((y - y.mean()) / y_sd)) / len(y)
        anchor = int(np.argmax(corr_d))
    else:
        anchor = int(np.argmax(np.abs(loadings)))
    if loadings[anchor] == 0:
        anchor = int(np.argmax(np.abs(loadings)))
    if loadings[anchor] < 0:
        loadings = -loadings
    return {a: float(np.clip(v, -1.0, 1.0)) for a, v in zip(attrs, loadings)}


def loading_factor(table: DecisionTable, attr: str) -> float:
    table.index(attr)
    return loading_factors(table)[attr]


def midranks(values) -> np.ndarray:
    """1-based ranks with ties sharing the mean of their positions."""
    v = np.asarray(values)
    _, inverse, counts = np.unique(v, return_inverse=True, return_counts=True)
    start = np.concatenate(([0], np.cumsum(counts)[:-1]))
    return (start + (counts + 1) / 2.0)[inverse.reshape(-1)]


@dataclass(frozen=True)
class RankSumResult:
    statistic: float   # rank sum of the label-1 group
    z: float
    n_pos: int
    n_neg: int


def rank_sum_test(values, labels) -> RankSumResult:
    """Wilcoxon rank-sum with midranks and tie-corrected normal approximation."""
    v = np.asarray(values, dtype=np.float64)
    lab = np.asarray(labels)
    if v.shape != lab.shape:
        raise ValueError("values and labels differ in length")
    pos = lab == 1
    n1, n2 = int(pos.sum()), int((~pos).sum())
    if n1 == 0 or n2 == 0:
        raise DataError("rank-sum test needs both groups nonempty")
    n = n1 + n2
    ranks = midranks(v)
    w = float(ranks[pos].sum())
    _, t = np.unique(v, return_counts=True)
    tie = float(np.sum(t.astype(np.float64) ** 3 - t)) / (n * (n - 1)) if n > 1 else 0.0
    var = n1 * n2 / 12.0 * ((n + 1) - tie)
    z = (w - n1 * (n + 1) / 2.0) / math.sqrt(var) if var > 0 else 0.0
    return RankSumResult(w, z, n1, n2)


def wilcoxon(values, labels) -> float:
    """Separation strength ``|z|`` of the rank-sum test."""
    return abs(rank_sum_test(values, labels).z)


@dataclass(frozen=True)
class MethodScoreSet:
    method: str
    attributes: tuple[str, ...]
    raw: tuple[float, ...]
    normalized: tuple[float, ...]

    @classmethod
    def from_raw(cls, method: str, scores: Mapping[str, float]) -> "MethodScoreSet":
        attrs = tuple(scores)
        raw = tuple(float(scores[a]) for a in attrs)
        return cls(method, attrs, raw, tuple(float(v) for v in minmax(raw)))

    def normalized_map(self) -> dict[str, float]:
        return dict(zip(self.attributes, self.normalized))

    def raw_map(self) -> dict[str, float]:
        return dict(zip(self.attributes, self.raw))


@dataclass(frozen=True)
class CorrelationResult:
    method: str
    pearson_r: float
    points: tuple[tuple[str, float, float], ...]   # (attribute, accuracy, normalized score)


def method_scores(table: DecisionTable, target_label: int = 1,
                  attrs: Sequence[str] | None = None) -> dict[str, MethodScoreSet]:
    attrs = tuple(table.attributes if attrs is None else attrs)
    labels = (table.decision == target_label).astype(np.int8)
    raw = {
        IMPACT_FACTOR: {a: float(impact_value(table, a, target_label)) for a in attrs},
        WILCOXON: {a: wilcoxon(table.column(a), labels) for a in attrs},
        PBI: {a: pbi(table.column(a)) for a in attrs},
        LOADING: loading_factors(table, attrs),
    }
    return {m: MethodScoreSet.from_raw(m, raw[m]) for m in BENCHMARK_METHODS}


def correlate(methods: Sequence[MethodScoreSet] | Mapping[str, MethodScoreSet],
              accuracy: Mapping[str, float]) -> list[CorrelationResult]:
    if isinstance(methods, Mapping):
        methods = list(methods.values())
    attrs = tuple(accuracy)
    acc = [float(accuracy[a]) for a in attrs]
    out = []
    for m in methods:
        norm = m.normalized_map()
        missing = [a for a in attrs if a not in norm]
        if missing:
            raise DataError(f"method {m.method} has no score for {missing[0]!r}")
        scores = [norm[a] for a in attrs]
        r = pearson_r(scores, acc)
        out.append(CorrelationResult(m.method, r, tuple(zip(attrs, acc, scores))))
    return out
