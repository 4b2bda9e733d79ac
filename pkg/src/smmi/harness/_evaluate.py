from __future__ import annotations

__all__ = ["ConstellationMetrics", "EvalReport", "evaluate", "scatter_records"]

import logging
import time
from dataclasses import dataclass
from typing import Any, Iterator

import numpy as np

from ..core import ConstellationKind
from ..exceptions import InvalidInputError
from ._dataset import LabeledDataset
from ._predictors import Predictor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstellationMetrics:
    """Error statistics of one output column.

    Attributes:
        constellation: Alphabet of the column
        mse: Mean squared error
        three_sigma: Three times the standard deviation of the signed errors
        max_abs_error: Largest absolute error
        bias: Mean signed error, prediction minus target
    """

    constellation: ConstellationKind
    mse: float
    three_sigma: float
    max_abs_error: float
    bias: float


@dataclass(frozen=True)
class EvalReport:
    """Accuracy and timing of one predictor on one dataset split.

    Attributes:
        method: Name of the predictor
        n_samples: Number of rows evaluated
        global_mse: Mean over rows and constellations of the squared error
        metrics: Per-constellation statistics in dataset order
        wall_time: Seconds spent predicting
        noise_floor: Mean squared standard error of the Monte Carlo targets,
            below which an MSE carries no information
    """

    method: str
    n_samples: int
    global_mse: float
    metrics: list[ConstellationMetrics]
    wall_time: float
    noise_floor: float

    def records(self) -> Iterator[dict[str, Any]]:
        """One table record per constellation, then one for the whole split."""
        for metric in self.metrics:
            yield {
                "method": self.method,
                "constellation": str(metric.constellation),
                "n_samples": self.n_samples,
                "mse": metric.mse,
                "three_sigma": metric.three_sigma,
                "max_abs_error": metric.max_abs_error,
                "bias": metric.bias,
                "wall_time": self.wall_time,
                "noise_floor": self.noise_floor,
            }
        yield {
            "method": self.method,
            "constellation": "all",
            "n_samples": self.n_samples,
            "mse": self.global_mse,
            "three_sigma": "",
            "max_abs_error": max(metric.max_abs_error for metric in self.metrics),
            "bias": "",
            "wall_time": self.wall_time,
            "noise_floor": self.noise_floor,
        }


def _columns(predictor: Predictor, dataset: LabeledDataset) -> list[int]:
    """Index of each dataset constellation among the predictor outputs."""
    missing = [kind for kind in dataset.constellations if kind not in predictor.constellations]
    if missing:
        names = ", ".join(str(kind) for kind in missing)
        raise InvalidInputError(f"{predictor.name} predictor does not cover {names}")
    return [predictor.constellations.index(kind) for kind in dataset.constellations]


def _predict(predictor: Predictor, dataset: LabeledDataset) -> tuple[np.ndarray, float]:
    start = time.perf_counter()
    predictions = predictor.predict(dataset.gammas, dataset.channels)
    elapsed = time.perf_counter() - start
    return predictions[:, _columns(predictor, dataset)], elapsed


def evaluate(predictor: Predictor, dataset: LabeledDataset) -> EvalReport:
    """Compare a predictor with the oracle targets of a dataset or split.

    Errors are sorted before every reduction, so the report does not depend
    on the row order of the dataset.

    Raises:
        InvalidInputError: If the dataset is empty or the predictor lacks one
            of its constellations.
    """
    if len(dataset) == 0:
        raise InvalidInputError("Cannot evaluate on an empty dataset")
    predictions, elapsed = _predict(predictor, dataset)
    errors = np.sort(predictions - dataset.targets, axis=0)

    metrics = [
        ConstellationMetrics(
            constellation=kind,
            mse=float(np.mean(np.sort(column**2))),
            three_sigma=3.0 * float(np.std(column)),
            max_abs_error=float(np.max(np.abs(column))),
            bias=float(np.mean(column)),
        )
        for kind, column in zip(dataset.constellations, errors.T)
    ]
    report = EvalReport(
        method=predictor.name,
        n_samples=len(dataset),
        global_mse=float(np.mean([metric.mse for metric in metrics])),
        metrics=metrics,
        wall_time=elapsed,
        noise_floor=float(np.mean(np.sort(dataset.std_errors**2, axis=None))),
    )
    logger.info(
        "%s on %d samples: global MSE %.3e (noise floor %.1e)",
        report.method,
        report.n_samples,
        report.global_mse,
        report.noise_floor,
    )
    return report


def scatter_records(predictor: Predictor, dataset: LabeledDataset) -> Iterator[dict[str, Any]]:
    """True against predicted MI for every row and constellation."""
    predictions, _ = _predict(predictor, dataset)
    for row, row_id in enumerate(dataset.row_ids):
        for column, kind in enumerate(dataset.constellations):
            yield {
                "row_id": int(row_id),
                "constellation": str(kind),
                "true": float(dataset.targets[row, column]),
                "predicted": float(predictions[row, column]),
            }
