from __future__ import annotations

__all__ = [
    "AnglePair",
    "DistanceSet",
    "column_energies",
    "distance_set",
    "gram",
    "hermitian_angles",
    "pair_angles",
    "supersymbols",
]

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..exceptions import InvalidInputError
from ._constellation import Constellation


def supersymbols(H: np.ndarray, constellation: Constellation) -> np.ndarray:
    """All received-space points ``h_l s_k`` of a channel and a constellation.

    Returns:
        Complex array of shape ``(Nt·M, Nr)``; row ``l·M + k`` is ``h_l s_k``,
        i.e. antenna index outer and symbol index inner.
    """
    H = np.asarray(H, dtype=complex)
    nr, nt = H.shape
    points = H.T[:, None, :] * constellation.symbols[None, :, None]
    return points.reshape(nt * constellation.order, nr)


@dataclass(frozen=True, eq=False)
class DistanceSet:
    """Squared distances among the supersymbols of a two-antenna link.

    Attributes:
        D: ``2M × 2M`` matrix of all pairwise squared distances
        D_S: ``M × M`` matrix ``|s_k - s_k'|²`` of the constellation itself
        D_L: ``M × M`` matrix ``‖h_1 s_k - h_2 s_k'‖²`` across antennas
    """

    D: np.ndarray = field(repr=False)
    D_S: np.ndarray = field(repr=False)
    D_L: np.ndarray = field(repr=False)


def distance_set(H: np.ndarray, constellation: Constellation) -> DistanceSet:
    """Assemble the blockwise supersymbol distance matrix of a 2-antenna channel.

    The diagonal blocks are ``‖h_l‖² D_S`` and the off-diagonal blocks are
    ``D_L`` and its transpose, with ``D_L`` expanded into its four rank-one
    terms so that its rank never exceeds four.
    """
    H = np.asarray(H, dtype=complex)
    if H.shape[1] != 2:
        raise InvalidInputError(f"Distance sets are defined for 2 antennas, got {H.shape[1]}")

    s = constellation.symbols
    h1, h2 = H[:, 0], H[:, 1]
    e1 = float(np.vdot(h1, h1).real)
    e2 = float(np.vdot(h2, h2).real)
    p = complex(np.vdot(h1, h2))
    power = np.abs(s) ** 2

    D_S = np.abs(s[:, None] - s[None, :]) ** 2
    cross = p * np.outer(s.conj(), s)
    D_L = e1 * power[:, None] + e2 * power[None, :] - 2.0 * cross.real

    D = np.block([[e1 * D_S, D_L], [D_L.T, e2 * D_S]])
    return DistanceSet(D, D_S, D_L)


class AnglePair(NamedTuple):
    """Hermitian angle in ``[0, π/2]`` and pseudo-angle in ``(-π, π]``."""

    theta_h: float
    phi: float


def column_energies(H: np.ndarray) -> np.ndarray:
    """Squared norms of the columns of one matrix or of a stack of matrices."""
    H = np.asarray(H)
    return np.sum(H.real**2 + H.imag**2, axis=-2)


def gram(H: np.ndarray) -> np.ndarray:
    """Inner products ``h_iᴴ h_j`` of the columns of one matrix or a stack of them."""
    H = np.asarray(H)
    return np.swapaxes(H.conj(), -1, -2) @ H


def pair_angles(
    p: np.ndarray, e1: np.ndarray, e2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized angles from inner products and column energies.

    Args:
        p: Inner products ``h_1ᴴ h_2``
        e1: Squared norms of the first columns
        e2: Squared norms of the second columns

    Returns:
        ``(theta_h, phi)`` arrays broadcast from the inputs. A vanishing inner
        product gives ``theta_h = π/2`` and ``phi = 0``.
    """
    magnitude = np.abs(p)
    cosine = np.clip(magnitude / np.sqrt(e1 * e2), 0.0, 1.0)
    theta_h = np.arccos(cosine)
    # np.angle maps 0 to 0, and a phase of exactly -π is folded onto π
    phi = np.angle(p)
    phi = np.where(phi == -math.pi, math.pi, phi)
    return theta_h, phi


def hermitian_angles(h1: np.ndarray, h2: np.ndarray) -> AnglePair:
    """Hermitian angle and pseudo-angle between two complex vectors.

    They satisfy ``h1ᴴ h2 = ‖h1‖ ‖h2‖ cos(θ_H) e^{iφ}``.

    Raises:
        InvalidInputError: If either vector has zero norm.
    """
    h1 = np.asarray(h1, dtype=complex)
    h2 = np.asarray(h2, dtype=complex)
    e1 = column_energies(h1[:, None])[0]
    e2 = column_energies(h2[:, None])[0]
    if e1 == 0.0 or e2 == 0.0:
        raise InvalidInputError("Angles are undefined for a zero-norm vector")

    theta_h, phi = pair_angles(np.vdot(h1, h2), e1, e2)
    return AnglePair(float(theta_h), float(phi))
