"""Classical rough-set algebra: indiscernibility partitions, approximations, relevance."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import DataError, UnknownAttributeError
from .table import DecisionTable


def _attr_list(table: DecisionTable, attrs) -> tuple[str, ...]:
    if isinstance(attrs, str):
        attrs = (attrs,)
    attrs = tuple(dict.fromkeys(attrs))
    if not attrs:
        raise ValueError("attribute set must be nonempty")
    for a in attrs:
        if a != table.decision_name and a not in table.attributes:
            raise UnknownAttributeError(a)
    return attrs


def class_codes(table: DecisionTable, attrs) -> tuple[np.ndarray, int]:
    """Per-row equivalence-class id under IND(attrs).

    Ids are canonical: class 0 holds row 0, and classes are numbered in
    order of their smallest member.
    """
    attrs = _attr_list(table, attrs)
    n = table.n_rows
    cols = [np.asarray(table.column(a), dtype=np.int64) for a in attrs]
    radices = [int(c.max()) + 1 for c in cols]
    if math.prod(radices) >= 2**62:
        block = np.column_stack(cols)
        _, first, inverse = np.unique(block, axis=0, return_index=True, return_inverse=True)
        inverse = inverse.reshape(-1)
        rank = np.empty(len(first), dtype=np.intp)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        return rank[inverse], len(first)

    # mixed-radix key per row, then relabel keys by first occurrence
    key = np.zeros(n, dtype=np.int64)
    for c, r in zip(cols, radices):
        key = key * r + c
    n_keys = math.prod(radices)
    if n_keys <= 4 * n + 1024:
        first = np.full(n_keys, n, dtype=np.intp)
        np.minimum.at(first, key, np.arange(n))
        used = np.flatnonzero(first < n)
        used = used[np.argsort(first[used], kind="stable")]
        relabel = np.empty(n_keys, dtype=np.intp)
        relabel[used] = np.arange(len(used))
        return relabel[key], len(used)
    uniq, first, inverse = np.unique(key, return_index=True, return_inverse=True)
    rank = np.empty(len(uniq), dtype=np.intp)
    rank[np.argsort(first, kind="stable")] = np.arange(len(uniq))
    return rank[inverse.reshape(-1)], len(uniq)


@dataclass(frozen=True)
class Partition:
    classes: tuple[tuple[int, ...], ...]
    attribute_set: tuple[str, ...]

    @property
    def universe_size(self) -> int:
        return sum(len(c) for c in self.classes)

    def as_sets(self) -> list[frozenset[int]]:
        return [frozenset(c) for c in self.classes]

    def to_json(self) -> str:
        return json.dumps({"attribute_set": list(self.attribute_set),
                           "classes": [list(c) for c in self.classes]})


def indiscernibility(table: DecisionTable, attrs: Iterable[str] | str) -> Partition:
    """U/IND(P): rows grouped by their value tuple on ``attrs``."""
    attrs = _attr_list(table, attrs)
    codes, n_classes = class_codes(table, attrs)
    order = np.argsort(codes, kind="stable")
    bounds = np.cumsum(np.bincount(codes, minlength=n_classes))[:-1]
    classes = tuple(tuple(int(i) for i in grp) for grp in np.split(order, bounds))
    return Partition(classes, attrs)


@dataclass(frozen=True)
class RegionResult:
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    target: tuple[int, ...]

    @property
    def boundary(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.upper) - set(self.lower)))


def approximations(partition: Partition, target: Iterable[int]) -> RegionResult:
    """Lower approximation (classes contained in target) and upper (classes meeting it)."""
    target = frozenset(int(t) for t in target)
    n = partition.universe_size
    bad = [t for t in target if not 0 <= t < n]
    if bad:
        raise DataError(f"target index out of range: {min(bad)}")
    lower, upper = [], []
    for cls in partition.classes:
        hit = sum(1 for i in cls if i in target)
        if hit:
            upper.extend(cls)
            if hit == len(cls):
                lower.extend(cls)
    return RegionResult(tuple(sorted(lower)), tuple(sorted(upper)), tuple(sorted(target)))


def positive_region(table: DecisionTable, cond) -> np.ndarray:
    """Boolean row mask of POS_C(D): rows whose C-class is decision-pure."""
    codes, n_classes = class_codes(table, cond)
    size = np.bincount(codes, minlength=n_classes)
    pos = np.bincount(codes, weights=table.decision, minlength=n_classes)
    pure = (pos == 0) | (pos == size)
    return pure[codes]


def gamma(table: DecisionTable, cond, decision: str | None = None) -> Fraction:
    """Dependency degree |POS_C(D)| / |U| as an exact fraction."""
    if decision is not None and decision != table.decision_name:
        raise UnknownAttributeError(decision)
    return Fraction(int(positive_region(table, cond).sum()), table.n_rows)
