from __future__ import annotations

__all__ = [
    "AblationCell",
    "MultiAntennaResult",
    "angle_sweep",
    "default_angle_grids",
    "ergodic_curve",
    "feature_ablation",
    "feature_histograms",
    "multi_antenna_experiment",
    "option_for_antennas",
    "received_cloud",
]

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any, Iterator, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from ..core import (
    ChannelRealization,
    ConstellationKind,
    angle_parametrized_channel,
    make_constellation,
    sample_rayleigh_channel,
)
from ..exceptions import InvalidInputError
from ..features import (
    DEFAULT_QUANTILES,
    FeatureOption,
    feature_matrix,
    feature_names,
    parse_option,
)
from ..oracle import capacity_gaussian, complex_normal, mi_finite, mi_finite_batch
from ..training import TrainConfig, TrainReport, train
from ..util import derive_seed, ordered_map, rng
from ._dataset import LabeledDataset
from ._evaluate import EvalReport, evaluate
from ._predictors import NetworkPredictor, Predictor

logger = logging.getLogger(__name__)

Record = dict[str, Any]


def ergodic_curve(
    snr_grid_db: Sequence[float],
    n_channels: int,
    n_noise_draws: int,
    predictors: Sequence[Predictor],
    seed: int,
    *,
    nt: int = 2,
    constellations: Sequence[Union[str, ConstellationKind]] = ("QPSK", "8PSK", "16QAM"),
    capacity: bool = False,
    quiet: Optional[bool] = None,
) -> list[Record]:
    """Mutual information averaged over Rayleigh fading at each SNR.

    The same ``n_channels`` matrices are used at every grid point; matrix
    ``c`` comes from ``derive_seed(seed, 0, c)``. The oracle is always
    evaluated, with cell seeds derived from ``derive_seed(seed, 1, i)`` at
    grid point ``i``; each predictor then averages its instantaneous values
    over the same matrices. With ``capacity``, the Gaussian-input capacity
    is added as method ``capacity``.

    Returns:
        Records ``{snr_db, method, constellation, mean_mi, std_error}``; the
        standard error is that of the mean over channels.
    """
    if len(snr_grid_db) == 0:
        raise InvalidInputError("SNR grid is empty")
    if n_channels < 1:
        raise InvalidInputError(f"Number of channels must be positive, got {n_channels}")
    kinds = [make_constellation(kind) for kind in constellations]
    matrices = np.array(
        [sample_rayleigh_channel(derive_seed(seed, 0, c), nt) for c in range(n_channels)]
    )

    records: list[Record] = []

    def emit(snr_db: float, method: str, constellation: str, values: np.ndarray) -> None:
        std_error = 0.0
        if len(values) > 1:
            std_error = float(np.std(values, ddof=1)) / math.sqrt(len(values))
        records.append(
            {
                "snr_db": float(snr_db),
                "method": method,
                "constellation": constellation,
                "mean_mi": float(np.mean(values)),
                "std_error": std_error,
            }
        )

    for i, snr_db in enumerate(tqdm(snr_grid_db, unit="snr", disable=quiet)):
        channels = [ChannelRealization.from_snr_db(H, snr_db) for H in matrices]
        gammas = np.full(n_channels, channels[0].gamma)

        estimates = mi_finite_batch(channels, kinds, n_noise_draws, derive_seed(seed, 1, i))
        oracle = np.array([[estimate.value for estimate in row] for row in estimates])
        for j, constellation in enumerate(kinds):
            emit(snr_db, "oracle", str(constellation), oracle[:, j])

        for predictor in predictors:
            predictions = predictor.predict(gammas, matrices)
            for j, kind in enumerate(predictor.constellations):
                emit(snr_db, predictor.name, str(kind), predictions[:, j])

        if capacity:
            values = np.array(
                [
                    capacity_gaussian(channel, n_noise_draws, derive_seed(seed, 2, i, c)).value
                    for c, channel in enumerate(channels)
                ]
            )
            emit(snr_db, "capacity", "gaussian", values)

        logger.debug("Ergodic point %g dB done", snr_db)
    return records


def default_angle_grids(n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian angles over ``[0, π/2]`` and pseudo-angles over ``(-π, π]``."""
    if n_points < 2:
        raise InvalidInputError(f"Angle grids need at least 2 points, got {n_points}")
    theta = np.linspace(0.0, math.pi / 2.0, n_points)
    phi = np.linspace(-math.pi, math.pi, n_points + 1)[1:]
    return theta, phi


def angle_sweep(
    gamma: float,
    grid_theta: Sequence[float],
    grid_phi: Sequence[float],
    constellation: Union[str, ConstellationKind],
    n_draws: int,
    seed: int,
    *,
    quiet: Optional[bool] = None,
) -> list[Record]:
    """MI over a grid of unit-column channels with given angles.

    Every grid point reuses the noise stream of ``seed``, so differences
    between points reflect the channel rather than the noise.

    Returns:
        Records ``{theta_h, phi, mi, std_error}`` in row-major grid order.
    """
    alphabet = make_constellation(constellation)
    points = [(float(theta), float(phi)) for theta in grid_theta for phi in grid_phi]
    if not points:
        raise InvalidInputError("Angle grids are empty")
    # Check the grids before spending time on the oracle
    channels = [
        ChannelRealization(angle_parametrized_channel(theta, phi), gamma) for theta, phi in points
    ]

    def cell(channel: ChannelRealization) -> tuple[float, float]:
        estimate = mi_finite(channel, alphabet, n_draws, seed)
        return estimate.value, estimate.std_error

    results = list(
        tqdm(ordered_map(cell, channels), total=len(channels), unit="point", disable=quiet)
    )
    return [
        {"theta_h": theta, "phi": phi, "mi": value, "std_error": std_error}
        for (theta, phi), (value, std_error) in zip(points, results)
    ]


@dataclass(frozen=True)
class AblationCell:
    """Outcome of training one feature option with one hidden-layer size."""

    option: FeatureOption
    n_hidden: int
    n_features: int
    val_mse: float
    test: EvalReport
    report: TrainReport

    def record(self) -> Record:
        return {
            "option": str(self.option),
            "n_hidden": self.n_hidden,
            "n_features": self.n_features,
            "val_mse": self.val_mse,
            "test_mse": self.test.global_mse,
            "noise_floor": self.test.noise_floor,
        }


def _train_and_test(
    dataset: LabeledDataset, option: FeatureOption, config: TrainConfig, q: Optional[int]
) -> AblationCell:
    params, report = train(dataset, option, config, q)
    test = evaluate(NetworkPredictor(params), dataset.subset("test"))
    return AblationCell(
        option=option,
        n_hidden=config.n_hidden,
        n_features=params.n_inputs,
        val_mse=report.val_mse[report.best_epoch],
        test=test,
        report=report,
    )


def feature_ablation(
    dataset: LabeledDataset,
    options: Sequence[Union[str, FeatureOption]],
    n_hidden_list: Sequence[int],
    restarts: int,
    *,
    config: Optional[TrainConfig] = None,
) -> list[AblationCell]:
    """Train a network per ``(option, N)`` cell and measure it on the test split.

    Every cell uses the same training seed, taken from ``config``.
    """
    if len(dataset.subset("test")) == 0:
        raise InvalidInputError("Feature ablation needs a nonempty test split")
    base = config if config is not None else TrainConfig()
    cells = []
    for option in map(parse_option, options):
        for n_hidden in n_hidden_list:
            cell_config = dataclasses.replace(base, n_hidden=n_hidden, restarts=restarts)
            cell = _train_and_test(dataset, option, cell_config, None)
            logger.info(
                "Option %s, N=%d: test MSE %.3e", option, n_hidden, cell.test.global_mse
            )
            cells.append(cell)
    return cells


def option_for_antennas(nt: int) -> FeatureOption:
    """Feature recipe used for ``nt`` transmit antennas."""
    options = {2: FeatureOption.V, 4: FeatureOption.MULTI4, 8: FeatureOption.QUANT8}
    if nt not in options:
        raise InvalidInputError(f"No feature recipe for {nt} antennas")
    return options[nt]


@dataclass(frozen=True)
class MultiAntennaResult:
    option: FeatureOption
    n_features: int
    test: EvalReport
    report: TrainReport


def multi_antenna_experiment(
    dataset: LabeledDataset,
    q: int = DEFAULT_QUANTILES,
    *,
    config: Optional[TrainConfig] = None,
) -> MultiAntennaResult:
    """Train and test on a larger array: pair angles for 4 antennas, angle quantiles for 8."""
    option = option_for_antennas(dataset.header.nt)
    if len(dataset.subset("test")) == 0:
        raise InvalidInputError("Multi-antenna experiment needs a nonempty test split")
    cell = _train_and_test(
        dataset,
        option,
        config if config is not None else TrainConfig(n_hidden=20),
        q if option is FeatureOption.QUANT8 else None,
    )
    return MultiAntennaResult(option, cell.n_features, cell.test, cell.report)


def _in_db(name: str) -> bool:
    return name.startswith(("energy_", "distance_"))


def feature_histograms(
    dataset: LabeledDataset,
    option: Union[str, FeatureOption],
    bins: int,
    q: Optional[int] = None,
) -> Iterator[Record]:
    """Histogram of every feature over a dataset.

    Energies and distances are binned in dB, angles in radians and
    everything else on its own scale.

    Yields:
        Records ``{feature, unit, bin_lo, bin_hi, count}``.
    """
    if bins < 1:
        raise InvalidInputError(f"Number of bins must be positive, got {bins}")
    option = parse_option(option)
    if option is FeatureOption.QUANT8 and q is None:
        q = DEFAULT_QUANTILES
    matrix = feature_matrix(option, dataset.gammas, dataset.channels, q)
    names = feature_names(option, dataset.header.nt, q)

    for name, values in zip(names, matrix.T):
        column = values
        if _in_db(name):
            column = 10.0 * np.log10(np.maximum(column, np.finfo(float).tiny))
            unit = "dB"
        elif name == "snr_db":
            unit = "dB"
        elif name.startswith(("theta", "phi")):
            unit = "rad"
        else:
            unit = ""
        counts, edges = np.histogram(column, bins=bins)
        for count, low, high in zip(counts, edges[:-1], edges[1:]):
            yield {
                "feature": name,
                "unit": unit,
                "bin_lo": float(low),
                "bin_hi": float(high),
                "count": int(count),
            }


def received_cloud(
    H: np.ndarray,
    gamma: float,
    constellation: Union[str, ConstellationKind],
    n: int,
    seed: int,
) -> Iterator[Record]:
    """Noisy received supersymbols ``√γ h_l s + w``, ``n`` per antenna and symbol.

    A real channel with BPSK uses real noise of variance 1/2, which keeps the
    whole cloud on the real axis.

    Yields:
        Records ``{antenna, symbol, re_1, im_1, ..., re_Nr, im_Nr}`` with
        1-based antenna and symbol indexes.
    """
    channel = ChannelRealization(np.asarray(H, dtype=complex), gamma)
    alphabet = make_constellation(constellation)
    if n < 1:
        raise InvalidInputError(f"Number of samples must be positive, got {n}")

    real_valued = alphabet.kind is ConstellationKind.BPSK and not np.any(channel.H.imag)
    shape = (channel.nt, alphabet.order, n, channel.nr)
    if real_valued:
        noise = rng(seed).normal(0.0, math.sqrt(0.5), size=shape).astype(complex)
    else:
        noise = complex_normal(seed, shape)

    root_gamma = math.sqrt(channel.gamma)
    for antenna in range(channel.nt):
        for k, symbol in enumerate(alphabet.symbols):
            samples = root_gamma * symbol * channel.H[:, antenna] + noise[antenna, k]
            for sample in samples:
                record: Record = {"antenna": antenna + 1, "symbol": k + 1}
                for r, value in enumerate(sample, start=1):
                    record[f"re_{r}"] = float(value.real)
                    record[f"im_{r}"] = float(value.imag)
                yield record
