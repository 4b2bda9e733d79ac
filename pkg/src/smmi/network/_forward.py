from __future__ import annotations

__all__ = ["clamp_outputs", "forward", "forward_batch", "hidden_layer", "scale_inputs"]

import numpy as np

from ..exceptions import InvalidInputError
from ..features import FeatureVector
from ._params import NetworkOutput, NetworkParams


def scale_inputs(params: NetworkParams, features: np.ndarray) -> np.ndarray:
    """``a0 = g0 ∘ (x - x0) - 1`` for each row of ``features``."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != params.n_inputs:
        raise InvalidInputError(
            f"Network takes {params.n_inputs} features, got array of shape {features.shape}"
        )
    return params.g0 * (features - params.x0) - 1.0


def hidden_layer(params: NetworkParams, scaled: np.ndarray) -> np.ndarray:
    """``a1 = tanh(W1 a0 + b1)`` for each row of scaled inputs."""
    return np.tanh(scaled @ params.W1.T + params.b1)


def forward_batch(params: NetworkParams, features: np.ndarray) -> np.ndarray:
    """Raw network outputs for a feature matrix of shape ``(L, F)``, shape ``(L, K)``."""
    hidden = hidden_layer(params, scale_inputs(params, features))
    linear = hidden @ params.W2.T + params.b2
    return (linear + 1.0) / params.g3 + params.y0


def clamp_outputs(params: NetworkParams, outputs: np.ndarray) -> np.ndarray:
    """Restrict each output to ``[0, log2(Nt·M_k)]``."""
    return np.clip(outputs, 0.0, params.max_bits)


def forward(params: NetworkParams, x: FeatureVector) -> NetworkOutput:
    """Evaluate the network on one feature vector.

    Raises:
        InvalidInputError: If the feature vector was built by another recipe
            or for another antenna count, or has the wrong length.
    """
    if x.option is not params.option or x.nt != params.nt or x.q != params.q:
        raise InvalidInputError(
            f"Network expects option {params.option} features for {params.nt} antennas, "
            f"got option {x.option} for {x.nt}"
        )
    raw = forward_batch(params, x.values[None, :])[0]
    return NetworkOutput(raw, clamp_outputs(params, raw))
