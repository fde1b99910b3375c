"""Balanced resampling, stratified splits and the per-feature classification study."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _backend
from .benchmark import pearson_r
from .errors import DataError, ZeroVarianceError
from .impact import impact_value
from .table import DecisionTable

MASK64 = (1 << 64) - 1

# independent random streams per experiment
_BALANCE, _SPLIT, _SUBSAMPLE = 0, 1, 2


def mix(seed: int, index: int) -> int:
    """Derive the 64-bit sub-seed of experiment ``index`` from a master seed."""
    ss = np.random.SeedSequence([seed & MASK64, index & MASK64])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _rng(seed: int, index: int, stream: int, *extra: int) -> np.random.Generator:
    return np.random.default_rng([mix(seed, index), stream, *extra])


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    n_experiments: int = 100
    train_fraction: float = 0.70
    minority_label: int = 1
    dataset_fraction: float = 1.0
    epochs: int = 200
    eta0: float = 0.01
    lam: float = 0.01
    one_hot: bool = False

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if self.n_experiments < 1:
            raise ValueError("n_experiments must be >= 1")
        if not 0.0 < self.dataset_fraction <= 1.0:
            raise ValueError("dataset_fraction must lie in (0, 1]")
        if self.minority_label not in (0, 1):
            raise ValueError("minority_label must be 0 or 1")

    def to_dict(self) -> dict:
        return asdict(self)


def _floor_count(fraction: float, n: int) -> int:
    # round first so that e.g. 0.7 * 20 = 13.999999999999998 counts as 14
    return math.floor(round(fraction * n, 9))


def subsample(table: DecisionTable, cfg: ExperimentConfig, experiment_index: int) -> DecisionTable:
    """Uniform row subsample of ``cfg.dataset_fraction``; identity at 1.0."""
    if cfg.dataset_fraction >= 1.0:
        return table
    k = _floor_count(cfg.dataset_fraction, table.n_rows)
    if k < 1:
        raise DataError(f"dataset fraction {cfg.dataset_fraction} leaves no rows")
    key = round(cfg.dataset_fraction * 1_000_000)
    rng = _rng(cfg.seed, experiment_index, _SUBSAMPLE, key)
    rows = np.sort(rng.choice(table.n_rows, size=k, replace=False))
    return table.take(rows)


def balance(table: DecisionTable, cfg: ExperimentConfig, experiment_index: int) -> DecisionTable:
    """Keep every minority row and an equal-size random draw of majority rows.

    If ``cfg.minority_label`` is in fact the larger class, the roles swap;
    the output always has exactly ``2 * min(class counts)`` rows, in
    original row order.
    """
    minority = np.flatnonzero(table.decision == cfg.minority_label)
    majority = np.flatnonzero(table.decision != cfg.minority_label)
    if len(minority) == 0 or len(majority) == 0:
        raise DataError("balancing needs both decision labels present")
    if len(minority) > len(majority):
        minority, majority = majority, minority
    rng = _rng(cfg.seed, experiment_index, _BALANCE)
    chosen = rng.choice(majority, size=len(minority), replace=False)
    return table.take(np.sort(np.concatenate([minority, chosen])))


def split(table: DecisionTable, cfg: ExperimentConfig,
          experiment_index: int) -> tuple[DecisionTable, DecisionTable]:
    """Stratified train/test split; ``floor(train_fraction * n)`` per stratum goes to train.

    Training rows come back shuffled (the SGD visits them in that order);
    test rows keep table order.
    """
    rng = _rng(cfg.seed, experiment_index, _SPLIT)
    train_idx, test_idx = [], []
    for label in (0, 1):
        idx = np.flatnonzero(table.decision == label)
        if len(idx) < 2:
            raise DataError(f"stratum for label {label} has {len(idx)} rows; need at least 2")
        perm = rng.permutation(idx)
        k = _floor_count(cfg.train_fraction, len(idx))
        train_idx.append(perm[:k])
        test_idx.append(perm[k:])
    train = rng.permutation(np.concatenate(train_idx))
    test = np.sort(np.concatenate(test_idx))
    return table.take(train), table.take(test)


def feature_matrix(table: DecisionTable, attr: str, one_hot: bool = False) -> np.ndarray:
    x = table.column(attr)
    if not one_hot:
        return x.astype(np.float64).reshape(-1, 1)
    n_levels = 2 if attr == table.decision_name else len(table.levels[table.index(attr)])
    return np.eye(n_levels, dtype=np.float64)[x]


@dataclass(frozen=True)
class LinearRule:
    """``predict(x) = 1`` iff ``w . x + b > 0``; degenerate rules return a constant label."""

    weight: tuple[float, ...]
    bias: float
    one_hot: bool = False
    degenerate: bool = False
    constant_label: int | None = None

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return X @ np.asarray(self.weight) + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self.degenerate:
            return np.full(X.shape[0], self.constant_label, dtype=np.int8)
        return (self.decision_function(X) > 0).astype(np.int8)


def train_single_feature(train: DecisionTable, attr: str, epochs: int = 200,
                         eta0: float = 0.01, lam: float = 0.01,
                         one_hot: bool = False) -> LinearRule:
    """Linear max-margin rule on one attribute, by hinge-loss SGD.

    A single-label training set or a constant feature yields a degenerate
    majority-vote rule (ties go to label 0).
    """
    X = feature_matrix(train, attr, one_hot)
    y01 = train.decision
    n_pos = int(y01.sum())
    majority = 1 if n_pos > len(y01) - n_pos else 0
    if n_pos in (0, len(y01)) or np.all(X == X[0]):
        return LinearRule((0.0,) * X.shape[1], 0.0, one_hot, True, majority)
    y = np.where(y01 == 1, 1.0, -1.0)
    w, b = _backend.hinge_sgd(X, y, epochs, eta0, lam)
    return LinearRule(tuple(float(v) for v in w), float(b), one_hot)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @classmethod
    def from_predictions(cls, y_true, y_pred) -> "ConfusionCounts":
        t = np.asarray(y_true) == 1
        p = np.asarray(y_pred) == 1
        return cls(int(np.sum(t & p)), int(np.sum(~t & p)),
                   int(np.sum(~t & ~p)), int(np.sum(t & ~p)))

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    # zero denominators give 0 rather than NaN
    @property
    def precision(self) -> float:
        d = self.tp + self.fp
        return self.tp / d if d else 0.0

    @property
    def recall(self) -> float:
        d = self.tp + self.fn
        return self.tp / d if d else 0.0

    @property
    def f_score(self) -> float:
        # harmonic mean of precision and recall, written on the counts so
        # it needs a single rounding and never exceeds max(precision, recall)
        d = 2 * self.tp + self.fp + self.fn
        return 2 * self.tp / d if d else 0.0

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total if self.total else 0.0


METRICS = ("precision", "recall", "f_score", "accuracy")


@dataclass(frozen=True)
class EvalMetrics:
    attribute: str
    counts: tuple[ConfusionCounts, ...]

    def values(self, metric: str) -> np.ndarray:
        if metric not in METRICS:
            raise KeyError(metric)
        return np.array([getattr(c, metric) for c in self.counts])

    def mean(self, metric: str) -> float:
        return float(self.values(metric).mean())

    def quartiles(self, metric: str) -> tuple[float, float, float, float, float]:
        """(min, q1, median, q3, max) for box plots."""
        v = self.values(metric)
        return tuple(float(q) for q in np.quantile(v, [0.0, 0.25, 0.5, 0.75, 1.0]))

    @property
    def precision(self) -> float:
        return self.mean("precision")

    @property
    def recall(self) -> float:
        return self.mean("recall")

    @property
    def f_score(self) -> float:
        return self.mean("f_score")

    @property
    def accuracy(self) -> float:
        return self.mean("accuracy")


def run_experiment(table: DecisionTable, cfg: ExperimentConfig, experiment_index: int,
                   attrs: Sequence[str], raw: DecisionTable | None = None
                   ) -> dict[str, ConfusionCounts]:
    """One subsample -> balance -> split -> train -> test round for every attribute."""
    if raw is None:
        raw = subsample(table, cfg, experiment_index)
    balanced = balance(raw, cfg, experiment_index)
    train, test = split(balanced, cfg, experiment_index)
    out = {}
    for attr in attrs:
        rule = train_single_feature(train, attr, cfg.epochs, cfg.eta0, cfg.lam, cfg.one_hot)
        pred = rule.predict(feature_matrix(test, attr, cfg.one_hot))
        out[attr] = ConfusionCounts.from_predictions(test.decision, pred)
    return out


def _fan_out(fn, n: int, jobs: int) -> list:
    if jobs <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, range(n)))


def evaluate_features(table: DecisionTable, cfg: ExperimentConfig,
                      attrs: Iterable[str] | None = None,
                      jobs: int = 1) -> dict[str, EvalMetrics]:
    attrs = tuple(table.attributes if attrs is None else attrs)
    for a in attrs:
        table.column(a)
    runs = _fan_out(lambda i: run_experiment(table, cfg, i, attrs), cfg.n_experiments, jobs)
    return {a: EvalMetrics(a, tuple(r[a] for r in runs)) for a in attrs}


@dataclass(frozen=True)
class SweepResult:
    fraction: float
    correlations: tuple[float, ...]

    @property
    def defined(self) -> np.ndarray:
        c = np.asarray(self.correlations)
        return c[~np.isnan(c)]

    @property
    def mean(self) -> float:
        d = self.defined
        return float(d.mean()) if len(d) else math.nan

    @property
    def n_undefined(self) -> int:
        return len(self.correlations) - len(self.defined)

    def quartiles(self) -> tuple[float, float, float, float, float]:
        d = self.defined
        if not len(d):
            return (math.nan,) * 5
        return tuple(float(q) for q in np.quantile(d, [0.0, 0.25, 0.5, 0.75, 1.0]))


def fraction_correlation(table: DecisionTable, cfg: ExperimentConfig, experiment_index: int,
                         attrs: Sequence[str]) -> float:
    """Pearson r between impact factors and single-feature accuracies in one experiment.

    NaN when either vector is constant.
    """
    raw = subsample(table, cfg, experiment_index)
    counts = run_experiment(table, cfg, experiment_index, attrs, raw)
    scores = [float(impact_value(raw, a)) for a in attrs]
    acc = [counts[a].accuracy for a in attrs]
    try:
        return pearson_r(scores, acc)
    except ZeroVarianceError:
        return math.nan


def fraction_sweep(table: DecisionTable, cfg: ExperimentConfig, fractions: Iterable[float],
                   attrs: Iterable[str] | None = None,
                   jobs: int = 1) -> dict[float, SweepResult]:
    attrs = tuple(table.attributes if attrs is None else attrs)
    out = {}
    for f in fractions:
        if not 0.0 < f <= 1.0:
            raise ValueError(f"fraction {f} outside (0, 1]")
        cfg_f = replace(cfg, dataset_fraction=f)
        try:
            rs = _fan_out(lambda i: fraction_correlation(table, cfg_f, i, attrs),
                          cfg.n_experiments, jobs)
        except DataError as exc:
            raise DataError(f"fraction {f}: {exc}") from None
        out[f] = SweepResult(f, tuple(rs))
    return out


def parse_grid(spec: str) -> list[float]:
    """``"0.1:1.0:10"`` -> ten evenly spaced fractions; also accepts a comma list."""
    if ":" in spec:
        try:
            lo, hi, n = spec.split(":")
            lo, hi, n = float(lo), float(hi), int(n)
        except ValueError:
            raise ValueError(f"bad grid {spec!r}; expected start:stop:count") from None
        if n < 1:
            raise ValueError("grid count must be >= 1")
        if n == 1:
            return [hi]
        return [round(lo + (hi - lo) * k / (n - 1), 10) for k in range(n)]
    return [float(s) for s in spec.split(",") if s.strip()]


def metrics_table(metrics: Mapping[str, EvalMetrics]) -> list[tuple]:
    return [(a, m.precision, m.recall, m.f_score, m.accuracy) for a, m in metrics.items()]
