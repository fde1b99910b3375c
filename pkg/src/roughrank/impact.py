"""Impact-factor relevance scores and single-attribute rankings.

For each equivalence class of IND({a}) the class contributes
``pos * (pos / size)``, where ``pos`` counts members whose decision equals
the target label. The retention index is the sum over classes and the
impact factor is ``100 * retention / |U|``. Unlike the dependency degree
(gamma), it does not collapse to zero when no class is decision-pure,
which is the normal situation for binary attributes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import UnknownAttributeError
from .roughset import class_codes
from .table import DecisionTable

IMPACT_FACTOR = "impact-factor"
GAMMA = "gamma"
PBI = "pbi"
LOADING = "loading"
WILCOXON = "wilcoxon"
METHODS = (IMPACT_FACTOR, GAMMA, PBI, LOADING, WILCOXON)

SCALES = {"percent": 100, "unit": 1}


@dataclass(frozen=True)
class ClassRecord:
    members: tuple[int, ...]
    positives: int
    size: int

    @property
    def contribution(self) -> Fraction:
        return Fraction(self.positives * self.positives, self.size)


@dataclass(frozen=True)
class ScoreTrace:
    attribute: str
    target_label: int
    universe: int
    classes: tuple[ClassRecord, ...]

    @property
    def retention(self) -> Fraction:
        return sum((c.contribution for c in self.classes), Fraction(0))

    def impact(self, scale: str = "percent") -> Fraction:
        return SCALES[scale] * self.retention / self.universe

    def to_dict(self) -> dict:
        return {
            "attribute": self.attribute,
            "target_label": self.target_label,
            "universe": self.universe,
            "retention_index": float(self.retention),
            "classes": [
                {"members": list(c.members), "positives": c.positives, "size": c.size,
                 "contribution": float(c.contribution)}
                for c in self.classes
            ],
        }


@dataclass(frozen=True)
class FeatureScore:
    attribute: str
    method: str
    value: float
    normalized: float = math.nan
    exact: Fraction | None = field(default=None, compare=False)
    trace: ScoreTrace | None = field(default=None, compare=False, repr=False)


def _check_conditional(table: DecisionTable, attr: str) -> None:
    if attr not in table.attributes:
        raise UnknownAttributeError(attr)


def _class_counts(table: DecisionTable, attr: str, target_label: int):
    codes, n_classes = class_codes(table, attr)
    size = np.bincount(codes, minlength=n_classes)
    pos = np.bincount(codes, weights=(table.decision == target_label), minlength=n_classes)
    return codes, size, pos.astype(np.int64)


def retention_index(table: DecisionTable, attr: str, target_label: int = 1) -> ScoreTrace:
    _check_conditional(table, attr)
    codes, size, pos = _class_counts(table, attr, target_label)
    order = np.argsort(codes, kind="stable")
    groups = np.split(order, np.cumsum(size)[:-1])
    classes = tuple(
        ClassRecord(tuple(int(i) for i in g), int(p), int(s))
        for g, p, s in zip(groups, pos, size)
    )
    return ScoreTrace(attr, target_label, table.n_rows, classes)


def impact_value(table: DecisionTable, attr: str, target_label: int = 1,
                 scale: str = "percent") -> Fraction:
    """Exact impact factor without building the per-class member lists."""
    _check_conditional(table, attr)
    _, size, pos = _class_counts(table, attr, target_label)
    retention = sum((Fraction(int(p) * int(p), int(s)) for p, s in zip(pos, size)), Fraction(0))
    return SCALES[scale] * retention / table.n_rows


def impact_factor(table: DecisionTable, attr: str, target_label: int = 1,
                  scale: str = "percent") -> FeatureScore:
    trace = retention_index(table, attr, target_label)
    exact = trace.impact(scale)
    return FeatureScore(attr, IMPACT_FACTOR, float(exact), exact=exact, trace=trace)


def minmax(values: Sequence[float]) -> np.ndarray:
    """Min-max scale to [0, 1]; a constant vector maps to all zeros."""
    v = np.asarray(values, dtype=np.float64)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def rank_attributes(table: DecisionTable, target_label: int = 1, scale: str = "percent",
                    trace: bool = False) -> list[FeatureScore]:
    """Impact factor of every conditional attribute, best first.

    Ties are broken by attribute name so the order is deterministic.
    """
    if trace:
        scores = [impact_factor(table, a, target_label, scale) for a in table.attributes]
    else:
        scores = []
        for a in table.attributes:
            exact = impact_value(table, a, target_label, scale)
            scores.append(FeatureScore(a, IMPACT_FACTOR, float(exact), exact=exact))
    norm = minmax([s.exact for s in scores])
    scores = [
        FeatureScore(s.attribute, s.method, s.value, float(n), s.exact, s.trace)
        for s, n in zip(scores, norm)
    ]
    return sorted(scores, key=lambda s: (-s.exact, s.attribute))
