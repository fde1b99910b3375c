"""Exception hierarchy. The CLI maps each family to an exit code."""


class RoughRankError(Exception):
    exit_code = 4


class SchemaError(RoughRankError):
    """Bad or missing schema/configuration (usage error)."""

    exit_code = 2


class UnknownAttributeError(RoughRankError, KeyError):
    exit_code = 2

    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown attribute: {self.name!r}"


class DataError(RoughRankError):
    """Input data violates a precondition (bad cell, wrong arity, empty class)."""

    exit_code = 3


class ZeroVarianceError(DataError, ValueError):
    pass


class InvariantViolation(RoughRankError):
    exit_code = 4
