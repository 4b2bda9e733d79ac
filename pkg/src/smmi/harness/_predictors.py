from __future__ import annotations

__all__ = [
    "ConstantPredictor",
    "JensenPredictor",
    "NetworkPredictor",
    "OraclePredictor",
    "Predictor",
]

from abc import abstractmethod
from typing import Sequence, Union

import numpy as np

from ..approx import jensen_mi_batch
from ..core import ChannelRealization, ConstellationKind, make_constellation
from ..features import feature_matrix
from ..network import NetworkParams, clamp_outputs, forward_batch
from ..oracle import mi_finite_batch


def _kinds(
    constellations: Sequence[Union[str, ConstellationKind]],
) -> tuple[ConstellationKind, ...]:
    return tuple(make_constellation(kind).kind for kind in constellations)


class Predictor:
    """Abstract base class of everything that maps channels to MI values.

    Inheritors must set ``constellations`` and implement ``predict``.

    Attributes:
        name: Method name used in report tables
        constellations: Order of the prediction columns
    """

    name: str = "predictor"
    constellations: tuple[ConstellationKind, ...]

    @abstractmethod
    def predict(self, gammas: np.ndarray, channels: np.ndarray) -> np.ndarray:
        """MI in bits per channel use for every channel.

        Args:
            gammas: Linear SNRs of shape ``(L,)``
            channels: Channel matrices of shape ``(L, Nr, Nt)``

        Returns:
            Array of shape ``(L, K)``.
        """

    def __repr__(self) -> str:
        names = ", ".join(str(kind) for kind in self.constellations)
        return f"{type(self).__name__}({names})"


class JensenPredictor(Predictor):
    name = "jensen"

    def __init__(self, constellations: Sequence[Union[str, ConstellationKind]]):
        self.constellations = _kinds(constellations)
        self._alphabets = [make_constellation(kind) for kind in self.constellations]

    def predict(self, gammas: np.ndarray, channels: np.ndarray) -> np.ndarray:
        return jensen_mi_batch(gammas, channels, self._alphabets)


class NetworkPredictor(Predictor):
    """Trained network; outputs are clamped to ``[0, log2(Nt·M)]``."""

    name = "nn"

    def __init__(self, params: NetworkParams):
        self.params = params
        self.constellations = params.constellations

    def predict(self, gammas: np.ndarray, channels: np.ndarray) -> np.ndarray:
        features = feature_matrix(self.params.option, gammas, channels, self.params.q)
        return clamp_outputs(self.params, forward_batch(self.params, features))


class OraclePredictor(Predictor):
    """Monte Carlo reference; cell ``(i, j)`` uses ``derive_seed(seed, i, j)``."""

    name = "oracle"

    def __init__(
        self,
        constellations: Sequence[Union[str, ConstellationKind]],
        n_draws: int,
        seed: int,
    ):
        self.constellations = _kinds(constellations)
        self.n_draws = n_draws
        self.seed = seed

    def predict(self, gammas: np.ndarray, channels: np.ndarray) -> np.ndarray:
        realizations = [
            ChannelRealization(H, float(gamma)) for gamma, H in zip(gammas, channels)
        ]
        if not realizations:
            return np.empty((0, len(self.constellations)))
        estimates = mi_finite_batch(
            realizations,
            [make_constellation(kind) for kind in self.constellations],
            self.n_draws,
            self.seed,
        )
        return np.array([[estimate.value for estimate in row] for row in estimates])


class ConstantPredictor(Predictor):
    name = "constant"

    def __init__(
        self, constellations: Sequence[Union[str, ConstellationKind]], value: float = 0.0
    ):
        self.constellations = _kinds(constellations)
        self.value = value

    def predict(self, gammas: np.ndarray, channels: np.ndarray) -> np.ndarray:
        return np.full((len(gammas), len(self.constellations)), self.value)
