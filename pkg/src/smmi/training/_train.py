from __future__ import annotations

__all__ = ["split_matrices", "train"]

import logging
from typing import TYPE_CHECKING, Optional, Union

from ..exceptions import InvalidInputError
from ..features import DEFAULT_QUANTILES, FeatureOption, feature_matrix, parse_option
from ..network import NetworkParams, fit_scalers
from ._config import TrainConfig
from ._levenberg_marquardt import Split, TrainReport, fit_network

if TYPE_CHECKING:
    from ..harness import LabeledDataset

logger = logging.getLogger(__name__)


def split_matrices(
    dataset: LabeledDataset, split: str, option: FeatureOption, q: Optional[int] = None
) -> Split:
    """Feature and target matrices of one split of a dataset."""
    rows = dataset.subset(split)
    return Split(feature_matrix(option, rows.gammas, rows.channels, q), rows.targets)


def train(
    dataset: LabeledDataset,
    feature_option: Union[FeatureOption, str],
    config: TrainConfig,
    q: Optional[int] = None,
) -> tuple[NetworkParams, TrainReport]:
    """Train a network that predicts the dataset targets from channel features.

    Scaling is fitted on the training split only. Restarts are compared on
    the validation split; the test split is recorded in the report and never
    used for a decision.

    Raises:
        InvalidInputError: If the training or validation split is empty, or
            a feature or target column is constant on the training split.
        NumericalError: If every restart ended without a step.
    """
    option = parse_option(feature_option)
    if option is FeatureOption.QUANT8 and q is None:
        q = DEFAULT_QUANTILES

    train_split = split_matrices(dataset, "train", option, q)
    validation = split_matrices(dataset, "val", option, q)
    if len(train_split.features) == 0 or len(validation.features) == 0:
        raise InvalidInputError("Training needs nonempty training and validation splits")
    test_rows = dataset.subset("test")
    test = split_matrices(dataset, "test", option, q) if len(test_rows) > 0 else None

    scalers = fit_scalers(train_split.features, train_split.targets)
    logger.info(
        "Training option %s with %d hidden neurons on %d samples",
        option,
        config.n_hidden,
        len(train_split.features),
    )
    return fit_network(
        train_split,
        validation,
        config,
        scalers=scalers,
        option=option,
        constellations=dataset.header.constellations,
        nt=dataset.header.nt,
        q=q if option is FeatureOption.QUANT8 else None,
        test=test,
    )
