"""Side-by-side model comparison reports and prediction-latency probes.

A report carries one row per model family in the fixed order (linear, svr,
tree, forest, gbt): test MAE/MSE, fit wall time, and median per-sample
prediction time.  Metric fields are reproducible under a fixed seed; timing
fields are not, so report writers can omit them for golden comparisons.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass

from . import dataset as ds
from .errors import FitError
from .metrics import mae, mse
from .models import build_model

MODEL_ORDER = ("linear", "svr", "tree", "forest", "gbt")


@dataclass(frozen=True)
class ReportRow:
    name: str
    test_mae_db: float
    test_mse_db2: float
    fit_seconds: float
    predict_micros_per_sample: float


@dataclass(frozen=True)
class EvaluationReport:
    rows: tuple[ReportRow, ...]
    dataset: str
    seed: int

    def to_text(self, include_timing: bool = True) -> str:
        headers = ["model", "test_mae_db", "test_mse_db2"]
        if include_timing:
            headers += ["fit_seconds", "predict_us_per_sample"]
        table = [headers]
        for r in self.rows:
            row = [r.name, f"{r.test_mae_db:.4f}", f"{r.test_mse_db2:.4f}"]
            if include_timing:
                row += [f"{r.fit_seconds:.3f}", f"{r.predict_micros_per_sample:.2f}"]
            table.append(row)
        widths = [max(len(row[c]) for row in table) for c in range(len(headers))]
        lines = [
            "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
            for row in table
        ]
        return "\n".join(lines) + "\n"

    def to_csv(self, include_timing: bool = True) -> str:
        headers = ["model", "test_mae_db", "test_mse_db2"]
        if include_timing:
            headers += ["fit_seconds", "predict_micros_per_sample"]
        lines = [",".join(headers)]
        for r in self.rows:
            row = [r.name, repr(r.test_mae_db), repr(r.test_mse_db2)]
            if include_timing:
                row += [f"{r.fit_seconds:.6f}", f"{r.predict_micros_per_sample:.3f}"]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        obj = {
            "dataset": self.dataset,
            "seed": self.seed,
            "models": [
                {
                    "name": r.name,
                    "test_mae_db": r.test_mae_db,
                    "test_mse_db2": r.test_mse_db2,
                    "fit_seconds": r.fit_seconds,
                    "predict_micros_per_sample": r.predict_micros_per_sample,
                }
                for r in self.rows
            ],
        }
        return json.dumps(obj, indent=2) + "\n"


def latency_probe(model, X, repeats: int = 5) -> float:
    """Median over repeats of (batch wall time / batch size), in microseconds."""
    if len(X) == 0:
        raise FitError("latency probe needs at least one sample")
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        model.predict(X)
        times.append((time.perf_counter() - t0) / len(X))
    return statistics.median(times) * 1e6


def compare_models(
    train: ds.Dataset, test: ds.Dataset, configs=None, seed: int = 0, repeats: int = 5
) -> EvaluationReport:
    """Fit each requested family on train, score MAE/MSE on test, time both.

    configs maps family name to a dict of hyperparameters (missing names use
    family defaults; None requests all five families with defaults).  Models
    run sequentially so the timing columns stay honest.
    """
    if configs is None:
        configs = {name: {} for name in MODEL_ORDER}
    rows = []
    for name in MODEL_ORDER:
        if name not in configs:
            continue
        model = build_model(name, seed=seed, **configs[name])
        t0 = time.perf_counter()
        try:
            model.fit(train.X, train.y)
        except FitError as e:
            raise FitError(f"{name}: {e}") from e
        fit_seconds = time.perf_counter() - t0
        pred = model.predict(test.X)
        micros = latency_probe(model, test.X, repeats)
        rows.append(
            ReportRow(name, mae(test.y, pred), mse(test.y, pred), fit_seconds, micros)
        )
    return EvaluationReport(tuple(rows), train.provenance, seed)
