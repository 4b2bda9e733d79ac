from __future__ import annotations

__all__ = ["NetworkOutput", "NetworkParams", "Scalers", "constellation_kinds", "fit_scalers"]

from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ..core import ConstellationKind, make_constellation
from ..exceptions import InvalidInputError
from ..features import FeatureOption, n_features


class Scalers(NamedTuple):
    """Frozen input and output scaling of a network.

    ``g0`` and ``x0`` map training inputs onto ``[-1, +1]``; ``g3`` and ``y0``
    invert the same map for the outputs.
    """

    g0: np.ndarray
    x0: np.ndarray
    g3: np.ndarray
    y0: np.ndarray


class NetworkOutput(NamedTuple):
    raw: np.ndarray
    clamped: np.ndarray


def _readonly(array: np.ndarray, ndim: int, name: str) -> np.ndarray:
    array = np.array(array, dtype=float)
    if array.ndim != ndim:
        raise InvalidInputError(f"{name} must have {ndim} dimensions, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidInputError(f"{name} has non-finite entries")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class NetworkParams:
    """Parameters of a one-hidden-layer network together with what it was trained for.

    Attributes:
        g0: Input scaling gains, shape ``(F,)``
        x0: Input scaling offsets, shape ``(F,)``
        W1: Hidden-layer weights, shape ``(N, F)``
        b1: Hidden-layer biases, shape ``(N,)``
        W2: Output-layer weights, shape ``(K, N)``
        b2: Output-layer biases, shape ``(K,)``
        g3: Output scaling gains, shape ``(K,)``
        y0: Output scaling offsets, shape ``(K,)``
        option: Feature recipe of the inputs
        constellations: Alphabet of each output
        nt: Antenna count of the channels
        q: Quantile count for ``quant8`` inputs
    """

    g0: np.ndarray = field(repr=False)
    x0: np.ndarray = field(repr=False)
    W1: np.ndarray = field(repr=False)
    b1: np.ndarray = field(repr=False)
    W2: np.ndarray = field(repr=False)
    b2: np.ndarray = field(repr=False)
    g3: np.ndarray = field(repr=False)
    y0: np.ndarray = field(repr=False)
    option: FeatureOption
    constellations: tuple[ConstellationKind, ...]
    nt: int
    q: Optional[int] = None

    def __post_init__(self) -> None:
        for name, ndim in [("g0", 1), ("x0", 1), ("W1", 2), ("b1", 1)]:
            object.__setattr__(self, name, _readonly(getattr(self, name), ndim, name))
        for name, ndim in [("W2", 2), ("b2", 1), ("g3", 1), ("y0", 1)]:
            object.__setattr__(self, name, _readonly(getattr(self, name), ndim, name))
        object.__setattr__(self, "constellations", tuple(self.constellations))

        n_hidden, n_inputs = self.W1.shape
        n_outputs = self.W2.shape[0]
        expected = {
            "g0": (n_inputs,),
            "x0": (n_inputs,),
            "b1": (n_hidden,),
            "W2": (n_outputs, n_hidden),
            "b2": (n_outputs,),
            "g3": (n_outputs,),
            "y0": (n_outputs,),
        }
        for name, shape in expected.items():
            actual = getattr(self, name).shape
            if actual != shape:
                raise InvalidInputError(f"{name} must have shape {shape}, got {actual}")

        if len(self.constellations) != n_outputs:
            raise InvalidInputError(
                f"Network has {n_outputs} outputs but {len(self.constellations)} constellations"
            )
        declared = n_features(self.option, self.nt, self.q)
        if declared != n_inputs:
            raise InvalidInputError(
                f"Feature option {self.option} gives {declared} inputs, network takes {n_inputs}"
            )
        if np.any(self.g0 <= 0.0) or np.any(self.g3 <= 0.0):
            raise InvalidInputError("Scaling gains must be strictly positive")

    @property
    def n_inputs(self) -> int:
        return int(self.W1.shape[1])

    @property
    def n_hidden(self) -> int:
        return int(self.W1.shape[0])

    @property
    def n_outputs(self) -> int:
        return int(self.W2.shape[0])

    @property
    def n_weights(self) -> int:
        return self.W1.size + self.b1.size + self.W2.size + self.b2.size

    @property
    def max_bits(self) -> np.ndarray:
        """Upper end ``log2(Nt·M_k)`` of each output."""
        return np.array(
            [make_constellation(kind).max_bits(self.nt) for kind in self.constellations]
        )

    @property
    def scalers(self) -> Scalers:
        return Scalers(self.g0, self.x0, self.g3, self.y0)

    def weights(self) -> np.ndarray:
        """Trainable parameters flattened as ``[W1, b1, W2, b2]``, matrices row-major."""
        return np.concatenate([self.W1.ravel(), self.b1, self.W2.ravel(), self.b2])

    def with_weights(self, weights: np.ndarray) -> NetworkParams:
        """Copy with the trainable parameters replaced by a vector from ``weights()``."""
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (self.n_weights,):
            raise InvalidInputError(
                f"Expected {self.n_weights} weights, got array of shape {weights.shape}"
            )
        n, f, k = self.n_hidden, self.n_inputs, self.n_outputs
        bounds = np.cumsum([n * f, n, k * n])
        W1, b1, W2, b2 = np.split(weights, bounds)
        return replace(self, W1=W1.reshape(n, f), b1=b1, W2=W2.reshape(k, n), b2=b2)


def fit_scalers(features: np.ndarray, targets: np.ndarray) -> Scalers:
    """Min-max scalers that map every training column onto ``[-1, +1]``.

    Raises:
        InvalidInputError: If the matrices are empty or a column is constant.
    """
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if features.ndim != 2 or targets.ndim != 2 or len(features) == 0:
        raise InvalidInputError("Scalers need nonempty 2-dimensional feature and target matrices")
    if len(features) != len(targets):
        raise InvalidInputError(
            f"Got {len(features)} feature rows but {len(targets)} target rows"
        )

    def ranges(matrix: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
        low = np.min(matrix, axis=0)
        high = np.max(matrix, axis=0)
        constant = np.flatnonzero(high <= low)
        if len(constant) > 0:
            column = int(constant[0])
            raise InvalidInputError(
                f"{what} column {column} is constant ({float(low[column])!r})"
            )
        return 2.0 / (high - low), low

    g0, x0 = ranges(features, "Feature")
    g3, y0 = ranges(targets, "Target")
    return Scalers(g0, x0, g3, y0)


def constellation_kinds(names: Sequence[str]) -> tuple[ConstellationKind, ...]:
    return tuple(make_constellation(name).kind for name in names)
