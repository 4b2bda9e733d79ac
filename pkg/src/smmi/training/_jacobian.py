from __future__ import annotations

__all__ = ["NormalEquations", "jacobian", "mean_squared_error", "normal_equations"]

from typing import NamedTuple

import numpy as np

from ..exceptions import InvalidInputError
from ..network import NetworkParams, forward_batch, hidden_layer, scale_inputs

# Samples per Jacobian block when accumulating the normal equations
_BLOCK_SAMPLES = 1024


def _check_batch(params: NetworkParams, features: np.ndarray, targets: np.ndarray) -> None:
    if len(features) == 0:
        raise InvalidInputError("Batch is empty")
    if targets.shape != (len(features), params.n_outputs):
        raise InvalidInputError(
            f"Expected targets of shape {(len(features), params.n_outputs)}, got {targets.shape}"
        )


def jacobian(
    params: NetworkParams, features: np.ndarray, targets: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Errors and their Jacobian with respect to the trainable weights.

    Args:
        params: Network whose scaling stages stay frozen
        features: Inputs of shape ``(L, F)``
        targets: Targets of shape ``(L, K)``

    Returns:
        ``(e, J)`` where ``e[ℓ·K + k] = y_k(ℓ) - t_k(ℓ)`` and ``J`` has one row
        per error and one column per entry of ``params.weights()``.
    """
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    _check_batch(params, features, targets)

    scaled = scale_inputs(params, features)
    hidden = hidden_layer(params, scaled)
    outputs = (hidden @ params.W2.T + params.b2 + 1.0) / params.g3 + params.y0
    errors = (outputs - targets).ravel()

    n = len(features)
    k = params.n_outputs
    inverse_gain = 1.0 / params.g3
    # slope[ℓ, k, n] is ∂y_k/∂z_n at sample ℓ
    slope = params.W2[None, :, :] * (1.0 - hidden**2)[:, None, :] * inverse_gain[None, :, None]

    d_W1 = slope[:, :, :, None] * scaled[:, None, None, :]
    d_b1 = slope
    identity = np.eye(k) * inverse_gain[:, None]
    d_W2 = identity[None, :, :, None] * hidden[:, None, None, :]
    d_b2 = np.broadcast_to(identity, (n, k, k))

    blocks = [d_W1, d_b1, d_W2, d_b2]
    J = np.concatenate([block.reshape(n * k, -1) for block in blocks], axis=1)
    return errors, J


class NormalEquations(NamedTuple):
    jtj: np.ndarray
    jte: np.ndarray
    sse: float
    n_errors: int

    @property
    def mse(self) -> float:
        return self.sse / self.n_errors


def normal_equations(
    params: NetworkParams, features: np.ndarray, targets: np.ndarray
) -> NormalEquations:
    """Accumulate ``JᵀJ``, ``Jᵀe`` and the squared error over sample blocks.

    Blocks are visited in sample order, so the sums are reproducible.
    """
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    _check_batch(params, features, targets)

    size = params.n_weights
    jtj = np.zeros((size, size))
    jte = np.zeros(size)
    sse = 0.0
    for start in range(0, len(features), _BLOCK_SAMPLES):
        stop = start + _BLOCK_SAMPLES
        errors, J = jacobian(params, features[start:stop], targets[start:stop])
        jtj += J.T @ J
        jte += J.T @ errors
        sse += float(errors @ errors)
    return NormalEquations(jtj, jte, sse, targets.size)


def mean_squared_error(params: NetworkParams, features: np.ndarray, targets: np.ndarray) -> float:
    """Mean over samples and outputs of the squared raw-output error."""
    errors = forward_batch(params, features) - np.asarray(targets, dtype=float)
    return float(np.mean(errors**2))
