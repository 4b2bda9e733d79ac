from __future__ import annotations

__all__ = [
    "Split",
    "TrainReport",
    "damped_step",
    "fit_network",
    "initial_params",
    "lm_step",
]

import logging
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np
from scipy.linalg import LinAlgError, LinAlgWarning, solve

from ..core import ConstellationKind
from ..exceptions import InvalidInputError, NumericalError
from ..features import FeatureOption
from ..network import NetworkParams, Scalers
from ..util import derive_seed, rng
from ._config import TrainConfig
from ._jacobian import mean_squared_error, normal_equations

logger = logging.getLogger(__name__)


class Split(NamedTuple):
    """Feature matrix ``(L, F)`` and target matrix ``(L, K)`` of one data split."""

    features: np.ndarray
    targets: np.ndarray


@dataclass(frozen=True)
class TrainReport:
    """History of the selected restart and a summary of all of them.

    Attributes:
        epochs_run: Accepted steps taken by the selected restart
        train_mse: Training MSE after each epoch, starting at epoch 0
        val_mse: Validation MSE after each epoch
        test_mse: Test MSE after each epoch; empty when no test split was given
        best_epoch: Epoch whose parameters were kept
        wall_time: Seconds spent on all restarts
        restart: Index of the selected restart
        stop_reason: Why the selected restart stopped
        final_test_mse: Test MSE of the kept parameters, if a test split was given
        restart_val_mse: Best validation MSE reached by each restart
    """

    epochs_run: int
    train_mse: list[float] = field(repr=False)
    val_mse: list[float] = field(repr=False)
    test_mse: list[float] = field(repr=False)
    best_epoch: int
    wall_time: float
    restart: int
    stop_reason: str
    final_test_mse: Optional[float] = None
    restart_val_mse: list[float] = field(default_factory=list, repr=False)

    def records(self) -> Iterator[dict[str, float]]:
        """One plot-ready record per epoch."""
        for epoch in range(len(self.train_mse)):
            record = {
                "epoch": epoch,
                "train_mse": self.train_mse[epoch],
                "val_mse": self.val_mse[epoch],
            }
            if self.test_mse:
                record["test_mse"] = self.test_mse[epoch]
            yield record


def damped_step(jtj: np.ndarray, jte: np.ndarray, lam: float) -> np.ndarray:
    """Solve ``(JᵀJ + λI) δ = -Jᵀe``.

    Raises:
        NumericalError: If the damped system is singular or too ill-conditioned
            to solve, which the trainer answers with more damping.
    """
    system = jtj + lam * np.eye(len(jtj))
    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        try:
            delta = solve(system, -jte, assume_a="pos")
        except (LinAlgError, LinAlgWarning, ValueError) as error:
            raise NumericalError(
                f"Damped system at lambda={lam:g} cannot be solved: {error}"
            ) from None
    if not np.all(np.isfinite(delta)):
        raise NumericalError(f"Damped system at lambda={lam:g} gave a non-finite step")
    return delta


def lm_step(params: NetworkParams, e: np.ndarray, J: np.ndarray, lam: float) -> NetworkParams:
    """One Levenberg–Marquardt candidate: the weights plus the damped Gauss–Newton step."""
    delta = damped_step(J.T @ J, J.T @ e, lam)
    return params.with_weights(params.weights() + delta)


def initial_params(
    scalers: Scalers,
    n_hidden: int,
    seed: int,
    *,
    option: FeatureOption,
    constellations: Sequence[ConstellationKind],
    nt: int,
    q: Optional[int] = None,
) -> NetworkParams:
    """Random starting point for training.

    Hidden weights follow the Nguyen–Widrow rule for inputs in ``[-1, +1]``:
    each row of ``W1`` has norm ``β = 0.7 N^{1/F}`` and the biases are uniform
    in ``[-β, β]``. Output weights and biases are uniform in ``[-0.1, 0.1]``.
    """
    generator = rng(seed)
    n_inputs = len(scalers.g0)
    n_outputs = len(scalers.g3)
    beta = 0.7 * n_hidden ** (1.0 / n_inputs)

    directions = generator.uniform(-1.0, 1.0, size=(n_hidden, n_inputs))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    W1 = beta * directions / np.maximum(norms, np.finfo(float).tiny)
    b1 = generator.uniform(-beta, beta, size=n_hidden)
    W2 = generator.uniform(-0.1, 0.1, size=(n_outputs, n_hidden))
    b2 = generator.uniform(-0.1, 0.1, size=n_outputs)

    return NetworkParams(
        scalers.g0,
        scalers.x0,
        W1,
        b1,
        W2,
        b2,
        scalers.g3,
        scalers.y0,
        option=option,
        constellations=tuple(constellations),
        nt=nt,
        q=q,
    )


@dataclass
class _Restart:
    params: NetworkParams
    best_epoch: int
    best_val_mse: float
    train_mse: list[float]
    val_mse: list[float]
    test_mse: list[float]
    stop_reason: str
    accepted: int


def _run_restart(
    params: NetworkParams,
    train: Split,
    validation: Split,
    test: Optional[Split],
    config: TrainConfig,
) -> _Restart:
    equations = normal_equations(params, *train)
    val_mse = mean_squared_error(params, *validation)
    history = _Restart(
        params=params,
        best_epoch=0,
        best_val_mse=val_mse,
        train_mse=[equations.mse],
        val_mse=[val_mse],
        test_mse=[mean_squared_error(params, *test)] if test is not None else [],
        stop_reason="maximum epochs",
        accepted=0,
    )

    lam = config.lambda_init
    failures = 0
    for epoch in range(1, config.max_epochs + 1):
        if equations.mse <= config.mse_goal:
            history.stop_reason = "performance goal"
            break
        if np.linalg.norm(equations.jte) / equations.n_errors <= config.min_gradient:
            history.stop_reason = "minimum gradient"
            break

        candidate: Optional[NetworkParams] = None
        while candidate is None:
            try:
                delta = damped_step(equations.jtj, equations.jte, lam)
                trial = params.with_weights(params.weights() + delta)
                if mean_squared_error(trial, *train) < equations.mse:
                    candidate = trial
            except NumericalError as error:
                logger.debug("%s", error)

            if candidate is None:
                lam *= config.lambda_up
                if lam > config.lambda_max:
                    break
                if lam > 1e6:
                    logger.debug("Damping raised to %g at epoch %d", lam, epoch)
            else:
                lam = max(lam * config.lambda_down, config.lambda_min)

        if candidate is None:
            history.stop_reason = "damping limit"
            break

        previous_mse = equations.mse
        params = candidate
        equations = normal_equations(params, *train)
        assert equations.mse <= previous_mse * (1.0 + 1e-12)
        history.accepted += 1

        val_mse = mean_squared_error(params, *validation)
        history.train_mse.append(equations.mse)
        history.val_mse.append(val_mse)
        if test is not None:
            history.test_mse.append(mean_squared_error(params, *test))

        if val_mse < history.best_val_mse:
            history.best_val_mse = val_mse
            history.best_epoch = epoch
            history.params = params
            failures = 0
        else:
            failures += 1
            if failures >= config.patience:
                history.stop_reason = "validation stop"
                break

    return history


def fit_network(
    train: Split,
    validation: Split,
    config: TrainConfig,
    *,
    scalers: Scalers,
    option: FeatureOption,
    constellations: Sequence[ConstellationKind],
    nt: int,
    q: Optional[int] = None,
    test: Optional[Split] = None,
) -> tuple[NetworkParams, TrainReport]:
    """Train a network on feature matrices with Levenberg–Marquardt.

    Each restart ``r`` initializes from ``derive_seed(config.seed, r)`` and
    keeps the parameters of its best validation epoch. The restart with the
    lowest validation MSE is returned; the test split, if given, is only
    recorded.

    Raises:
        InvalidInputError: If the splits have mismatched shapes.
        NumericalError: If no restart could take a single step.
    """
    for name, split in [("training", train), ("validation", validation)]:
        if len(split.features) == 0 or len(split.features) != len(split.targets):
            raise InvalidInputError(f"The {name} split is empty or has mismatched rows")

    start = time.perf_counter()
    selected: Optional[tuple[int, _Restart]] = None
    restart_val_mse = []
    for restart in range(config.restarts):
        params = initial_params(
            scalers,
            config.n_hidden,
            derive_seed(config.seed, restart),
            option=option,
            constellations=constellations,
            nt=nt,
            q=q,
        )
        history = _run_restart(params, train, validation, test, config)
        logger.info(
            "Restart %d: %d epochs, best validation MSE %.3e at epoch %d (%s)",
            restart,
            history.accepted,
            history.best_val_mse,
            history.best_epoch,
            history.stop_reason,
        )
        if history.accepted == 0 and history.stop_reason == "damping limit":
            logger.warning("Restart %d ended at the damping limit without a step", restart)
            restart_val_mse.append(math.nan)
            continue

        restart_val_mse.append(history.best_val_mse)
        if selected is None or history.best_val_mse < selected[1].best_val_mse:
            selected = (restart, history)

    if selected is None:
        raise NumericalError(
            f"All {config.restarts} training restarts ended at the damping limit"
        )

    restart, history = selected
    final_test = mean_squared_error(history.params, *test) if test is not None else None
    report = TrainReport(
        epochs_run=len(history.train_mse) - 1,
        train_mse=history.train_mse,
        val_mse=history.val_mse,
        test_mse=history.test_mse,
        best_epoch=history.best_epoch,
        wall_time=time.perf_counter() - start,
        restart=restart,
        stop_reason=history.stop_reason,
        final_test_mse=final_test,
        restart_val_mse=restart_val_mse,
    )
    return history.params, report
