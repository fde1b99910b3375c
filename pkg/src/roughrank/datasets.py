"""Built-in micro tables and synthetic stand-ins for the stroke EHR file.

``ehr_surrogate`` draws a 29,072-row table with 548 positives whose
per-attribute impact factors are calibrated to reference ranking
scores (``REFERENCE_IMPACT``). ``planted_rows`` builds the deterministic
1,096-row balanced fixture whose impact-factor order is fixed by
construction (``PLANTED_ORDER``).
"""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .table import DecisionTable, default_schema

STROKE_COLUMNS = ("id", "gender", "age", "hypertension", "heart_disease", "ever_married",
                  "work_type", "Residence_type", "avg_glucose_level", "bmi",
                  "smoking_status", "stroke")

N_PATIENTS = 29_072
N_STROKE = 548

# target impact factor per attribute on the full 29,072-row file
REFERENCE_IMPACT = {
    "gender": 0.0358,
    "age": 0.0921,
    "hypertension": 0.0469,
    "heart_disease": 0.0559,
    "ever_married": 0.0397,
    "work_type": 0.0405,
    "Residence_type": 0.0355,
    "avg_glucose_level": 0.0476,
    "bmi": 0.0358,
    "smoking_status": 0.0369,
}

PLANTED_ORDER = ("age", "heart_disease", "avg_glucose_level", "hypertension", "work_type",
                 "ever_married", "smoking_status", "gender", "bmi", "Residence_type")


def age_lems_table() -> DecisionTable:
    """Seven-row information table (age, LEMS). It has no decision; all zeros."""
    return DecisionTable.from_columns(
        {"Age": [16, 16, 31, 31, 46, 16, 46], "LEMS": [50, 0, 1, 1, 26, 26, 26]},
        [0] * 7, "decision")


def toy_stroke_table() -> DecisionTable:
    """Seven-row decision table (age, heart disease -> stroke)."""
    return DecisionTable.from_columns(
        {"age": [16, 16, 31, 31, 46, 16, 46], "heart disease": [1, 0, 1, 1, 1, 0, 1]},
        [1, 0, 0, 1, 0, 1, 0], "stroke")


def _categorical(rng, n, labels, probs):
    return rng.choice(np.array(labels, dtype=object), size=n, p=probs)


def _calibrate(levels: np.ndarray, direction: np.ndarray, target_ratio: float) -> float:
    """Solve for the log-risk slope giving ``E[r^2] = target_ratio`` for relative risk ``r``."""
    w = np.bincount(levels, minlength=len(direction)) / len(levels)

    def ratio(k):
        e = np.exp(k * direction)
        r = e / (w @ e)
        return float(w @ r**2)

    if target_ratio <= 1.0 or ratio(0.0) >= target_ratio:
        return 0.0
    lo, hi = 0.0, 1.0
    while ratio(hi) < target_ratio:
        hi *= 2
        if hi > 64:
            return hi
    for _ in range(100):
        mid = (lo + hi) / 2
        if ratio(mid) < target_ratio:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def ehr_surrogate(seed: int = 0, n: int = N_PATIENTS, n_pos: int = N_STROKE) -> list[list[str]]:
    """Synthetic stroke-EHR rows (header first) shaped like the public file.

    Attributes are drawn independently; the stroke label is then assigned
    to ``n_pos`` rows by weighted sampling, where each attribute multiplies
    the weight by a relative risk along a fixed direction. Each direction's
    slope is solved so the attribute's impact factor matches
    ``REFERENCE_IMPACT`` in expectation.
    """
    rng = np.random.default_rng(seed)
    schema = {a.name: a for a in default_schema().attributes}
    cols = {
        "gender": _categorical(rng, n, ["Female", "Male"], [0.59, 0.41]),
        "age": rng.integers(10, 83, size=n).astype(float),
        "hypertension": _categorical(rng, n, ["0", "1"], [0.89, 0.11]),
        "heart_disease": _categorical(rng, n, ["0", "1"], [0.945, 0.055]),
        "ever_married": _categorical(rng, n, ["Yes", "No"], [0.72, 0.28]),
        "work_type": _categorical(rng, n, ["Private", "Self-employed", "Govt_job", "children",
                                           "Never_worked"], [0.6, 0.17, 0.14, 0.05, 0.04]),
        "Residence_type": _categorical(rng, n, ["Urban", "Rural"], [0.5, 0.5]),
        "avg_glucose_level": np.round(np.clip(np.where(
            rng.random(n) < 0.8, rng.normal(92, 14, n), rng.normal(190, 40, n)), 55, 280), 2),
        "bmi": np.round(np.clip(rng.normal(30, 7, n), 12, 90), 1),
        "smoking_status": _categorical(rng, n, ["never smoked", "formerly smoked", "smokes"],
                                       [0.5, 0.24, 0.26]),
    }
    # (level index per row, risk direction per level)
    risk_axes = {}
    for name, values in cols.items():
        spec = schema[name]
        if spec.cuts:
            lv = np.array([spec.bin_index(v) for v in values])
            n_lv = len(spec.cuts) + 1
            direction = {"age": np.arange(n_lv, dtype=float),
                         "avg_glucose_level": (np.arange(n_lv) == n_lv - 1).astype(float),
                         "bmi": (np.arange(n_lv) == n_lv - 1).astype(float)}[name]
        else:
            risky = {"gender": "Male", "hypertension": "1", "heart_disease": "1",
                     "ever_married": "Yes", "work_type": "Self-employed",
                     "Residence_type": "Urban", "smoking_status": "formerly smoked"}[name]
            lv = (values == risky).astype(int)
            direction = np.array([0.0, 1.0])
        risk_axes[name] = (lv, direction)

    p_bar = n_pos / n
    log_w = np.zeros(n)
    for name, (lv, direction) in risk_axes.items():
        target = REFERENCE_IMPACT[name] / 100.0 / p_bar**2
        k = _calibrate(lv, direction, target)
        log_w += k * direction[lv]
    weights = np.exp(log_w - log_w.max())
    positives = rng.choice(n, size=n_pos, replace=False, p=weights / weights.sum())
    stroke = np.zeros(n, dtype=int)
    stroke[positives] = 1

    rows = [list(STROKE_COLUMNS)]
    for i in range(n):
        rows.append([
            str(i + 1), cols["gender"][i], f"{cols['age'][i]:g}", cols["hypertension"][i],
            cols["heart_disease"][i], cols["ever_married"][i], cols["work_type"][i],
            cols["Residence_type"][i], f"{cols['avg_glucose_level'][i]:.2f}",
            f"{cols['bmi'][i]:.1f}", cols["smoking_status"][i], str(stroke[i]),
        ])
    return rows


# (raw value, positives, negatives) per level; 548 of each label per attribute
_PLANTED_LEVELS = {
    "age": [("15", 20, 100), ("25", 40, 90), ("35", 60, 80), ("45", 78, 78),
            ("55", 100, 70), ("65", 120, 66), ("75", 130, 64)],
    "heart_disease": [("0", 368, 478), ("1", 180, 70)],
    "avg_glucose_level": [("60.00", 96, 144), ("85.00", 150, 200), ("110.00", 130, 130),
                          ("160.00", 172, 74)],
    "hypertension": [("0", 300, 410), ("1", 248, 138)],
    "work_type": [("Private", 280, 330), ("Self-employed", 130, 70), ("Govt_job", 90, 98),
                  ("children", 28, 30), ("Never_worked", 20, 20)],
    "ever_married": [("Yes", 360, 290), ("No", 188, 258)],
    "smoking_status": [("never smoked", 250, 290), ("formerly smoked", 150, 110),
                       ("smokes", 148, 148)],
    "gender": [("Female", 300, 330), ("Male", 248, 218)],
    "bmi": [("17.0", 40, 44), ("22.0", 150, 160), ("27.0", 180, 182), ("33.0", 178, 162)],
    "Residence_type": [("Urban", 280, 274), ("Rural", 268, 274)],
}


def planted_rows(seed: int = 1096) -> list[list[str]]:
    """Balanced 1,096-row fixture with a known impact-factor ranking.

    Each attribute's level/label contingency table is fixed, so its impact
    factor does not depend on the shuffle; only which rows carry which
    level is random.
    """
    rng = np.random.default_rng(seed)
    n_half = N_STROKE
    stroke = np.array([1] * n_half + [0] * n_half)
    cols = {}
    for name, levels in _PLANTED_LEVELS.items():
        pos = [v for v, p, _ in levels for _ in range(p)]
        neg = [v for v, _, q in levels for _ in range(q)]
        assert len(pos) == n_half and len(neg) == n_half, name
        cols[name] = np.array(list(rng.permutation(pos)) + list(rng.permutation(neg)), dtype=object)
    order = rng.permutation(2 * n_half)
    rows = [list(STROKE_COLUMNS)]
    for k, i in enumerate(order):
        rows.append([str(k + 1)] + [cols[c][i] for c in STROKE_COLUMNS[1:-1]] + [str(stroke[i])])
    return rows


def planted_impact(scale: str = "percent") -> dict[str, float]:
    """Closed-form impact factor of each planted attribute."""
    mult = 100.0 if scale == "percent" else 1.0
    return {name: mult * math.fsum(p * p / (p + q) for _, p, q in levels) / (2 * N_STROKE)
            for name, levels in _PLANTED_LEVELS.items()}


def write_csv(rows: Sequence[Sequence[str]], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    return path
