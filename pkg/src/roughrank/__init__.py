"""Rough-set impact-factor feature ranking and its benchmarking harness."""

__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402
from .errors import (  # noqa: E402
    DataError,
    InvariantViolation,
    RoughRankError,
    SchemaError,
    UnknownAttributeError,
    ZeroVarianceError,
)
from .impact import (  # noqa: E402
    FeatureScore,
    ScoreTrace,
    impact_factor,
    rank_attributes,
    retention_index,
)
from .roughset import Partition, RegionResult, approximations, gamma, indiscernibility  # noqa: E402
from .table import (  # noqa: E402
    AttributeSpec,
    DecisionTable,
    Schema,
    column,
    default_schema,
    discretize,
    load_csv,
    parse_csv,
)

__all__ = [
    "BACKEND", "AttributeSpec", "DataError", "DecisionTable", "FeatureScore",
    "InvariantViolation", "Partition", "RegionResult", "RoughRankError", "Schema",
    "SchemaError", "ScoreTrace", "UnknownAttributeError", "ZeroVarianceError",
    "approximations", "column", "default_schema", "discretize", "gamma", "impact_factor",
    "indiscernibility", "load_csv", "parse_csv", "rank_attributes", "retention_index",
]
