from __future__ import annotations

__all__ = [
    "OperationCount",
    "complexity_report",
    "feature_operation_count",
    "jensen_operation_count",
    "nn_operation_count",
    "operation_count",
]

import logging
import time
from typing import Any, NamedTuple, Optional, Sequence, Union

import numpy as np

from ..core import ConstellationKind, make_constellation, sample_rayleigh_channel, sample_snr_db
from ..exceptions import InvalidInputError
from ..features import DEFAULT_QUANTILES, FeatureOption, check_option, n_features, parse_option
from ..util import derive_seed
from ._predictors import JensenPredictor, NetworkPredictor, Predictor

logger = logging.getLogger(__name__)


class OperationCount(NamedTuple):
    """Demanding operations of one evaluation for every constellation.

    Additions, comparisons and sorting are not counted. A division counts as
    a product and ``tanh`` as one exponential.
    """

    real_products: int
    exp: int
    log2: int
    other: int

    def plus(self, other: OperationCount) -> OperationCount:
        return OperationCount(*(a + b for a, b in zip(self, other)))

    def times(self, factor: int) -> OperationCount:
        return OperationCount(*(factor * value for value in self))


def feature_operation_count(
    option: Union[FeatureOption, str], nt: int, q: Optional[int] = None
) -> OperationCount:
    """Cost of computing the features of one square ``nt × nt`` channel."""
    option = parse_option(option)
    if option is FeatureOption.QUANT8 and q is None:
        q = DEFAULT_QUANTILES
    check_option(option, nt, q)
    nr = nt

    if option is FeatureOption.RAW:
        # SNR in dB
        return OperationCount(1, 0, 0, 1)

    # ‖h_l‖² and its scaling by γ
    energies = OperationCount(nt * (2 * nr + 1), 0, 0, 0)
    # One complex inner product h_iᴴh_j
    inner = OperationCount(4 * nr, 0, 0, 0)
    # |p|², E_i E_j and the ratio, then sqrt, acos and atan2
    angles = OperationCount(4, 0, 0, 3)
    # E_i E_j and two divisions, then sqrt
    projection = OperationCount(3, 0, 0, 1)
    # ‖h_1 s_a - h_2 s_b‖² scaled by γ, for one of the four distances
    distance = OperationCount(8 * nr, 0, 0, 0)

    total = energies
    if nt == 2:
        total = total.plus(inner)
        if option in (FeatureOption.III, FeatureOption.IV, FeatureOption.V):
            total = total.plus(distance.times(4))
        if option in (FeatureOption.I, FeatureOption.IV):
            total = total.plus(projection)
        if option in (FeatureOption.II, FeatureOption.V):
            total = total.plus(angles)
        return total

    pairs = nt * (nt - 1) // 2
    total = total.plus(inner.plus(angles).times(pairs))
    if option is FeatureOption.QUANT8:
        assert q is not None
        # One interpolation product per quantile of each angle
        total = total.plus(OperationCount(2 * q, 0, 0, 0))
    return total


def nn_operation_count(
    option: Union[FeatureOption, str],
    n_hidden: int,
    n_outputs: int,
    nt: int = 2,
    q: Optional[int] = None,
) -> OperationCount:
    """Cost of one network evaluation, features included.

    The network costs ``2F`` products to scale the inputs, ``N·F`` for the
    hidden layer, two per neuron for ``tanh(z) = 2/(1 + exp(-2z)) - 1``
    plus one exponential each, ``K·N`` for the output layer and ``2K`` to
    undo the output scaling.
    """
    option = parse_option(option)
    if option is FeatureOption.QUANT8 and q is None:
        q = DEFAULT_QUANTILES
    if n_hidden < 1 or n_outputs < 1:
        raise InvalidInputError("Network sizes must be positive")
    f = n_features(option, nt, q)
    products = 2 * f + n_hidden * f + 2 * n_hidden + n_outputs * n_hidden + 2 * n_outputs
    network = OperationCount(products, n_hidden, 0, 0)
    return feature_operation_count(option, nt, q).plus(network)


def jensen_operation_count(
    constellations: Sequence[Union[str, ConstellationKind]], nt: int, nr: int
) -> OperationCount:
    """Cost of the Jensen approximation for every listed constellation.

    Each of the ``(Nt·M)²`` differences costs ``8·Nr`` products for the two
    supersymbols, ``2·Nr`` to scale by ``√γ``, ``2·Nr`` for the squared norm
    and one for the factor ``-1/2``, plus one exponential. Each
    constellation adds one logarithm.
    """
    if nt < 1 or nr < 1:
        raise InvalidInputError("Antenna counts must be positive")
    differences = sum((nt * make_constellation(kind).order) ** 2 for kind in constellations)
    per_difference = 8 * nr + 2 * nr + 2 * nr + 1
    return OperationCount(per_difference * differences, differences, len(constellations), 0)


def operation_count(predictor: Predictor, nt: int = 2) -> Optional[OperationCount]:
    """Static cost of a predictor, or ``None`` when it has no closed-form count."""
    if isinstance(predictor, NetworkPredictor):
        params = predictor.params
        return nn_operation_count(
            params.option, params.n_hidden, params.n_outputs, params.nt, params.q
        )
    if isinstance(predictor, JensenPredictor):
        return jensen_operation_count(predictor.constellations, nt, nt)
    return None


def complexity_report(
    methods: Sequence[Predictor],
    n_evals: int,
    *,
    nt: int = 2,
    seed: int = 0,
    snr_range_db: tuple[float, float] = (-20.0, 20.0),
) -> list[dict[str, Any]]:
    """Operation counts and measured time of ``n_evals`` evaluations per method.

    Every method sees the same random channels, drawn from ``seed``, and
    evaluates them in one batch.

    Returns:
        Records ``{method, real_products, exp, log2, other, n_evals, wall_time}``;
        counts are empty for methods without a static count.
    """
    if n_evals < 1:
        raise InvalidInputError(f"Number of evaluations must be positive, got {n_evals}")
    channels = np.array(
        [sample_rayleigh_channel(derive_seed(seed, 0, index), nt) for index in range(n_evals)]
    )
    gammas_db = np.array(
        [sample_snr_db(derive_seed(seed, 1, index), *snr_range_db) for index in range(n_evals)]
    )
    gammas = 10.0 ** (gammas_db / 10.0)

    records = []
    for method in methods:
        start = time.perf_counter()
        method.predict(gammas, channels)
        elapsed = time.perf_counter() - start
        logger.info("%s: %d evaluations in %.3f s", method.name, n_evals, elapsed)

        count = operation_count(method, nt)
        record: dict[str, Any] = {"method": method.name}
        for name in OperationCount._fields:
            record[name] = getattr(count, name) if count is not None else ""
        record["n_evals"] = n_evals
        record["wall_time"] = elapsed
        records.append(record)
    return records
