from __future__ import annotations

__all__ = ["DifferenceSet", "difference_set", "jensen_mi", "jensen_mi_all", "jensen_mi_batch"]

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from ..core import ChannelRealization, Constellation, gram, supersymbols
from ..exceptions import InvalidInputError

logger = logging.getLogger(__name__)

_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True, eq=False)
class DifferenceSet:
    """All scaled supersymbol differences ``√γ(h_l s_k - h_l' s_k')``.

    Attributes:
        deltas: Complex array of shape ``((Nt·M)², Nr)``, with the pair
            ``(a, b)`` of supersymbol indexes at row ``a·Nt·M + b``
    """

    deltas: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.deltas)


def difference_set(channel: ChannelRealization, constellation: Constellation) -> DifferenceSet:
    points = math.sqrt(channel.gamma) * supersymbols(channel.H, constellation)
    deltas = points[:, None, :] - points[None, :, :]
    return DifferenceSet(deltas.reshape(-1, channel.nr))


def _squared_differences(grams: np.ndarray, symbols: np.ndarray) -> np.ndarray:
    """``‖h_l s_k - h_l' s_k'‖²`` from the column Gram matrices.

    Args:
        grams: Gram matrices of shape ``(L, Nt, Nt)``
        symbols: The ``M`` constellation symbols

    Returns:
        Array of shape ``(L, Nt·M, Nt·M)`` indexed by supersymbol pairs.
    """
    n, nt, _ = grams.shape
    order = len(symbols)
    power = np.abs(symbols) ** 2
    energies = np.real(np.diagonal(grams, axis1=1, axis2=2))
    own = (energies[:, :, None] * power[None, None, :]).reshape(n, nt * order)
    outer = np.outer(symbols.conj(), symbols)
    cross = np.real(grams[:, :, None, :, None] * outer[None, None, :, None, :])
    squared = own[:, :, None] + own[:, None, :] - 2.0 * cross.reshape(n, nt * order, nt * order)
    squared = np.maximum(squared, 0.0)
    # Self pairs are exactly zero; the expansion leaves rounding residue there
    diagonal = np.arange(nt * order)
    squared[:, diagonal, diagonal] = 0.0
    return squared


def _jensen_from_grams(
    gammas: np.ndarray, grams: np.ndarray, constellation: Constellation
) -> np.ndarray:
    nt = grams.shape[-1]
    n_points = nt * constellation.order
    per_row = n_points * n_points
    chunk = max(1, _CHUNK_ELEMENTS // per_row)

    values = np.empty(len(gammas))
    for start in range(0, len(gammas), chunk):
        stop = start + chunk
        squared = _squared_differences(grams[start:stop], constellation.symbols)
        exponents = -0.5 * gammas[start:stop, None] * squared.reshape(len(squared), per_row)
        values[start:stop] = (math.log(per_row) - logsumexp(exponents, axis=-1)) / math.log(2)

    values = np.where(gammas == 0.0, 0.0, values)
    # The zero self pairs bound the sum from below; only rounding can exceed the cap
    values = np.minimum(values, math.log2(n_points))
    negative = values < 0.0
    if np.any(negative):
        logger.debug(
            "Clamped %d negative Jensen values for %s, smallest %r",
            int(np.count_nonzero(negative)),
            constellation,
            float(np.min(values)),
        )
        values = np.maximum(values, 0.0)
    return values


def jensen_mi_batch(
    gammas: np.ndarray, channels: np.ndarray, constellations: Sequence[Constellation]
) -> np.ndarray:
    """Jensen approximation for many channels and constellations at once.

    Args:
        gammas: Linear SNRs of shape ``(L,)``
        channels: Channel matrices of shape ``(L, Nr, Nt)``
        constellations: The ``K`` alphabets to evaluate

    Returns:
        Array of shape ``(L, K)`` in bits per channel use.
    """
    gammas = np.asarray(gammas, dtype=float)
    channels = np.asarray(channels, dtype=complex)
    if channels.ndim != 3 or channels.shape[0] != gammas.shape[0]:
        raise InvalidInputError(
            f"Expected {gammas.shape[0]} channel matrices, got array of shape {channels.shape}"
        )
    if not (np.all(np.isfinite(gammas)) and np.all(gammas >= 0.0)):
        raise InvalidInputError("SNRs must be finite and nonnegative")

    grams = gram(channels)
    columns = [_jensen_from_grams(gammas, grams, alphabet) for alphabet in constellations]
    return np.stack(columns, axis=-1) if columns else np.empty((len(gammas), 0))


def jensen_mi_all(
    channel: ChannelRealization, constellations: Sequence[Constellation]
) -> list[float]:
    """Jensen approximation of one channel for several constellations.

    The column Gram matrix ``HᴴH`` is computed once and shared by every
    constellation.
    """
    gammas = np.array([channel.gamma])
    values = jensen_mi_batch(gammas, channel.H[None, :, :], constellations)
    return [float(value) for value in values[0]]


def jensen_mi(channel: ChannelRealization, constellation: Constellation) -> float:
    """Jensen approximation of the mutual information in bits per channel use.

    The value is ``-log2(Σ_Δ exp(-½‖Δ‖²) / (Nt·M)²)`` over the scaled
    supersymbol differences ``Δ``. It is exactly zero at ``γ = 0``, tends to
    ``log2(Nt·M)`` as ``γ`` grows and is never negative.
    """
    return jensen_mi_all(channel, [constellation])[0]
