"""Report assembly and atomic file output."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__


def config_hash(echo: dict) -> str:
    blob = json.dumps(echo, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]], chash: str) -> str:
    buf = io.StringIO()
    buf.write(f"# roughrank {__version__} config_hash={chash}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def atomic_write(path: str | Path, data: str | bytes) -> Path:
    """Write via a temp file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data.encode("utf-8") if isinstance(data, str) else data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


@dataclass
class RankingReport:
    dataset: dict
    config: dict
    ranking: list[dict] = field(default_factory=list)
    scores: dict[str, dict[str, float]] = field(default_factory=dict)
    metrics: dict[str, dict[str, float]] = field(default_factory=dict)
    correlations: list[dict] = field(default_factory=list)
    fraction_sweep: list[dict] | None = None
    traces: list[dict] | None = None

    @property
    def config_hash(self) -> str:
        return config_hash({"dataset": self.dataset, "config": self.config})

    def to_json(self) -> str:
        out = {"roughrank": __version__, "config_hash": self.config_hash,
               "dataset": self.dataset, "config": self.config}
        for key in ("ranking", "scores", "metrics", "correlations", "fraction_sweep", "traces"):
            value = getattr(self, key)
            if value:
                out[key] = value
        return json.dumps(out, indent=2, sort_keys=False) + "\n"
