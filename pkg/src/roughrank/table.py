"""CSV ingestion, schema-driven discretization and the immutable decision table."""
from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, SchemaError, UnknownAttributeError

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"
BINARY = "binary"
KINDS = (CONTINUOUS, CATEGORICAL, BINARY)

OWN_LEVEL = "own-level"
DROP_ROW = "drop-row"
MISSING_POLICIES = (OWN_LEVEL, DROP_ROW)

MISSING_MARKERS = frozenset({"", "N/A"})
MISSING_LEVEL = "<missing>"


def equal_width_cuts(lo: float, hi: float, n_bins: int) -> tuple[float, ...]:
    """Interior cut points of ``n_bins`` equal-width bins over ``[lo, hi)``."""
    if n_bins < 1 or not hi > lo:
        raise SchemaError(f"cannot build {n_bins} bins over [{lo}, {hi})")
    width = (hi - lo) / n_bins
    return tuple(lo + width * i for i in range(1, n_bins))


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str = CATEGORICAL
    cuts: tuple[float, ...] | None = None
    unit: str | None = None
    missing_policy: str = OWN_LEVEL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"{self.name}: unknown kind {self.kind!r}")
        if self.missing_policy not in MISSING_POLICIES:
            raise SchemaError(f"{self.name}: unknown missing policy {self.missing_policy!r}")
        if self.kind == CONTINUOUS:
            if not self.cuts:
                raise SchemaError(f"{self.name}: continuous attribute needs cut points")
            cuts = tuple(float(c) for c in self.cuts)
            if any(not math.isfinite(c) for c in cuts):
                raise SchemaError(f"{self.name}: cut points must be finite")
            if any(b <= a for a, b in zip(cuts, cuts[1:])):
                raise SchemaError(f"{self.name}: cut points must be strictly increasing")
            object.__setattr__(self, "cuts", cuts)
        elif self.cuts:
            raise SchemaError(f"{self.name}: cut points only apply to continuous attributes")

    def bin_index(self, value: float) -> int:
        """Half-open interval lookup; values outside the cuts clamp into the edge bins."""
        return bisect_right(self.cuts, value)

    def bin_labels(self) -> tuple[str, ...]:
        edges = ("-inf",) + tuple(f"{c:g}" for c in self.cuts) + ("inf",)
        return tuple(f"[{lo},{hi})" for lo, hi in zip(edges, edges[1:]))


@dataclass(frozen=True)
class Schema:
    attributes: tuple[AttributeSpec, ...]
    decision: str
    identifier: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        names = self.columns
        if len(set(names)) != len(names):
            raise SchemaError("duplicate column names in schema")
        if not self.attributes:
            raise SchemaError("schema declares no conditional attributes")

    @property
    def columns(self) -> tuple[str, ...]:
        cols = tuple(a.name for a in self.attributes) + (self.decision,)
        if self.identifier is not None:
            cols += (self.identifier,)
        return cols

    @classmethod
    def from_file(cls, path: str | Path) -> "Schema":
        path = Path(path)
        if not path.is_file():
            raise SchemaError(f"schema file not found: {path}")
        return cls.from_text(path.read_text(encoding="utf-8"), source=str(path))

    @classmethod
    def from_text(cls, text: str, source: str = "<schema>") -> "Schema":
        """Parse the INI-style schema format.

        A ``[decision-table]`` section names the ``decision`` column and an
        optional ``identifier``; each ``[attribute:<name>]`` section declares
        ``kind``, optional ``cuts`` (comma separated), ``unit`` and ``missing``.
        Attribute order follows section order.
        """
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise SchemaError(f"{source}: {exc}") from None
        if not parser.has_section("decision-table"):
            raise SchemaError(f"{source}: missing [decision-table] section")
        head = parser["decision-table"]
        if "decision" not in head:
            raise SchemaError(f"{source}: [decision-table] must name the decision column")
        attrs = []
        for section in parser.sections():
            if not section.startswith("attribute:"):
                continue
            body = parser[section]
            cuts = body.get("cuts")
            try:
                parsed = tuple(float(c) for c in cuts.split(",")) if cuts else None
            except ValueError:
                raise SchemaError(f"{source}: [{section}] has non-numeric cuts") from None
            attrs.append(
                AttributeSpec(
                    name=section[len("attribute:"):].strip(),
                    kind=body.get("kind", CATEGORICAL).strip(),
                    cuts=parsed,
                    unit=body.get("unit"),
                    missing_policy=body.get("missing", OWN_LEVEL).strip(),
                )
            )
        return cls(tuple(attrs), head["decision"].strip(), head.get("identifier"))

    def to_text(self) -> str:
        parser = configparser.ConfigParser(interpolation=None)
        parser["decision-table"] = {"decision": self.decision}
        if self.identifier is not None:
            parser["decision-table"]["identifier"] = self.identifier
        for a in self.attributes:
            body = {"kind": a.kind, "missing": a.missing_policy}
            if a.cuts:
                body["cuts"] = ", ".join(f"{c:g}" for c in a.cuts)
            if a.unit:
                body["unit"] = a.unit
            parser[f"attribute:{a.name}"] = body
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()


def default_schema() -> Schema:
    """Schema for the public stroke EHR file (column names as distributed)."""
    text = resources.files("roughrank").joinpath("data/stroke_schema.ini").read_text("utf-8")
    return Schema.from_text(text, source="stroke_schema.ini")


@dataclass(frozen=True)
class RawRecord:
    line: int
    values: Mapping[str, str]


def parse_csv(path: str | Path, schema: Schema) -> list[RawRecord]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"data file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        return parse_rows(csv.reader(fh), schema)


def parse_rows(reader: Iterable[Sequence[str]], schema: Schema) -> list[RawRecord]:
    rows = iter(reader)
    try:
        header = [h.strip() for h in next(rows)]
    except StopIteration:
        raise DataError("empty file: no header row") from None
    if len(set(header)) != len(header):
        dup = next(h for h in header if header.count(h) > 1)
        raise DataError(f"header mismatch: duplicate column {dup!r}")
    expected = set(schema.columns)
    for h in header:
        if h not in expected:
            raise DataError(f"header mismatch: unexpected column {h!r}")
    for c in schema.columns:
        if c not in header:
            raise DataError(f"header mismatch: missing column {c!r}")

    records = []
    line = 1
    for cells in rows:
        line = getattr(reader, "line_num", line + 1)
        if not cells:
            continue
        if len(cells) != len(header):
            raise DataError(
                f"row at line {line}: expected {len(header)} cells, got {len(cells)}"
            )
        records.append(RawRecord(line, dict(zip(header, cells))))
    return records


def _is_missing(token: str) -> bool:
    return token.strip() in MISSING_MARKERS


def _parse_decision(token: str, line: int, name: str) -> int:
    tok = token.strip()
    try:
        value = float(tok)
    except ValueError:
        value = math.nan
    if value not in (0.0, 1.0):
        raise DataError(f"row at line {line}, column {name}: decision must be 0 or 1, got {tok!r}")
    return int(value)


def _binary_order(labels: Iterable[str]) -> list[str]:
    labels = sorted(set(labels))
    try:
        return sorted(labels, key=float)
    except ValueError:
        return labels


def discretize(records: Sequence[RawRecord], schema: Schema) -> "DecisionTable":
    """Map raw tokens to level indices and build the decision table.

    Continuous values go to half-open bins ``[cut_i, cut_{i+1})``;
    categorical labels get integer levels in order of first appearance;
    binary labels are ordered numerically (``0`` before ``1``). Missing
    tokens either form their own level or drop the row, per attribute.
    The identifier column is never a conditional attribute.
    """
    drop_attrs = [a.name for a in schema.attributes if a.missing_policy == DROP_ROW]
    kept = [
        r for r in records
        if not any(_is_missing(r.values[name]) for name in drop_attrs)
    ]
    if not kept:
        raise DataError("no rows left after applying missing-value policy")

    n = len(kept)
    cells = np.empty((n, len(schema.attributes)), dtype=np.int32)
    levels = []
    for j, spec in enumerate(schema.attributes):
        tokens = [r.values[spec.name].strip() for r in kept]
        missing = [t in MISSING_MARKERS for t in tokens]
        if spec.kind == CONTINUOUS:
            labels = list(spec.bin_labels())
            miss_idx = len(labels)
            col = cells[:, j]
            for i, (tok, miss) in enumerate(zip(tokens, missing)):
                if miss:
                    col[i] = miss_idx
                    continue
                try:
                    value = float(tok)
                except ValueError:
                    value = math.nan
                if math.isnan(value):
                    raise DataError(
                        f"row at line {kept[i].line}, column {spec.name}: "
                        f"cannot parse {tok!r} as a number"
                    )
                col[i] = spec.bin_index(value)
            if any(missing):
                labels.append(MISSING_LEVEL)
        else:
            present = [t for t, m in zip(tokens, missing) if not m]
            if spec.kind == BINARY:
                labels = _binary_order(present)
                if len(labels) > 2:
                    raise DataError(
                        f"column {spec.name}: binary attribute has {len(labels)} levels "
                        f"({', '.join(labels[:5])})"
                    )
            else:
                labels = list(dict.fromkeys(t if not m else MISSING_LEVEL
                                            for t, m in zip(tokens, missing)))
            if any(missing) and MISSING_LEVEL not in labels:
                labels.append(MISSING_LEVEL)
            index = {lab: k for k, lab in enumerate(labels)}
            cells[:, j] = [index[MISSING_LEVEL if m else t] for t, m in zip(tokens, missing)]
        levels.append(tuple(labels))

    decision = np.array(
        [_parse_decision(r.values[schema.decision], r.line, schema.decision) for r in kept],
        dtype=np.int8,
    )
    return DecisionTable(
        attributes=tuple(a.name for a in schema.attributes),
        levels=tuple(levels),
        cells=cells,
        decision=decision,
        decision_name=schema.decision,
    )


def load_csv(path: str | Path, schema: Schema) -> "DecisionTable":
    return discretize(parse_csv(path, schema), schema)


def _readonly(a: np.ndarray, dtype) -> np.ndarray:
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DecisionTable:
    """Rows of discretized attribute levels plus one binary decision column.

    ``cells[i, j]`` is the level index of row ``i`` on attribute ``j``; the
    level labels live in ``levels[j]``. Arrays are read-only.
    """

    attributes: tuple[str, ...]
    levels: tuple[tuple[str, ...], ...]
    cells: np.ndarray
    decision: np.ndarray
    decision_name: str = "decision"
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        cells = _readonly(self.cells, np.int32)
        decision = _readonly(self.decision, np.int8)
        attrs = tuple(self.attributes)
        levels = tuple(tuple(lv) for lv in self.levels)
        if cells.ndim != 2 or cells.shape[1] != len(attrs) or len(levels) != len(attrs):
            raise DataError("cells shape does not match the attribute list")
        if decision.shape != (cells.shape[0],):
            raise DataError("decision column length does not match row count")
        if cells.shape[0] == 0:
            raise DataError("decision table has no rows")
        if len(set(attrs)) != len(attrs) or self.decision_name in attrs:
            raise DataError("attribute names must be unique and distinct from the decision")
        for j, lv in enumerate(levels):
            if not lv:
                raise DataError(f"attribute {attrs[j]!r} has no levels")
            col = cells[:, j]
            if col.min() < 0 or col.max() >= len(lv):
                raise DataError(f"attribute {attrs[j]!r} has an out-of-range level index")
        if not np.isin(decision, (0, 1)).all():
            raise DataError("decision column must contain only 0 and 1")
        object.__setattr__(self, "attributes", attrs)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "decision", decision)
        object.__setattr__(self, "_index", {a: j for j, a in enumerate(attrs)})

    @classmethod
    def from_columns(cls, columns: Mapping[str, Sequence], decision: Sequence[int],
                     decision_name: str = "decision") -> "DecisionTable":
        """Build a table from raw per-column values, levels in first-appearance order."""
        attrs = tuple(columns)
        cells, levels = [], []
        for name in attrs:
            labels = list(dict.fromkeys(str(v) for v in columns[name]))
            index = {lab: k for k, lab in enumerate(labels)}
            cells.append([index[str(v)] for v in columns[name]])
            levels.append(tuple(labels))
        return cls(attrs, tuple(levels), np.array(cells, dtype=np.int32).T.reshape(len(decision), len(attrs)),
                   np.asarray(decision), decision_name)

    @property
    def n_rows(self) -> int:
        return self.cells.shape[0]

    def __len__(self):
        return self.n_rows

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownAttributeError(name) from None

    def column(self, name: str) -> np.ndarray:
        if name == self.decision_name:
            return self.decision
        return self.cells[:, self.index(name)]

    def take(self, rows) -> "DecisionTable":
        rows = np.asarray(rows, dtype=np.intp)
        return DecisionTable(self.attributes, self.levels, self.cells[rows],
                             self.decision[rows], self.decision_name)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(json.dumps([self.attributes, self.levels, self.decision_name]).encode())
        h.update(np.ascontiguousarray(self.cells, dtype="<i4").tobytes())
        h.update(np.ascontiguousarray(self.decision, dtype="i1").tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, DecisionTable):
            return NotImplemented
        return (self.attributes == other.attributes and self.levels == other.levels
                and self.decision_name == other.decision_name
                and np.array_equal(self.cells, other.cells)
                and np.array_equal(self.decision, other.decision))

    __hash__ = None


def column(table: DecisionTable, name: str) -> np.ndarray:
    return table.column(name)


def save_table(table: DecisionTable, fh) -> None:
    """Write ``table`` as an ``.npz`` archive to a binary file object."""
    meta = json.dumps({"attributes": table.attributes, "levels": table.levels,
                       "decision_name": table.decision_name})
    np.savez(fh, cells=table.cells, decision=table.decision, meta=np.array(meta))


def load_table(path: str | Path) -> DecisionTable:
    try:
        with np.load(path, allow_pickle=False) as npz:
            meta = json.loads(str(npz["meta"]))
            return DecisionTable(tuple(meta["attributes"]),
                                 tuple(tuple(lv) for lv in meta["levels"]),
                                 npz["cells"], npz["decision"], meta["decision_name"])
    except (OSError, KeyError, ValueError) as exc:
        raise DataError(f"cannot read decision table {path}: {exc}") from None
