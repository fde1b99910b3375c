"""End-to-end benchmark: per-feature accuracy versus every ranking method."""
from __future__ import annotations

from dataclasses import dataclass

from .benchmark import CorrelationResult, MethodScoreSet, correlate, method_scores
from .sampling import EvalMetrics, ExperimentConfig, evaluate_features
from .table import DecisionTable


@dataclass(frozen=True)
class BenchmarkResult:
    metrics: dict[str, EvalMetrics]
    methods: dict[str, MethodScoreSet]
    correlations: list[CorrelationResult]

    def r(self, method: str) -> float:
        return next(c.pearson_r for c in self.correlations if c.method == method)


def run_benchmark(table: DecisionTable, cfg: ExperimentConfig, target_label: int = 1,
                  jobs: int = 1) -> BenchmarkResult:
    """Score every attribute with each method on the full table, then correlate
    the min-max normalised scores with mean single-feature accuracy."""
    metrics = evaluate_features(table, cfg, jobs=jobs)
    methods = method_scores(table, target_label)
    accuracy = {a: m.accuracy for a, m in metrics.items()}
    return BenchmarkResult(metrics, methods, correlate(methods, accuracy))
