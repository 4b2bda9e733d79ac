from __future__ import annotations

__all__ = [
    "FeatureVector",
    "extract",
    "extract_multi4",
    "extract_quantile",
    "feature_matrix",
    "qpsk_cross_distances",
]

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..core import column_energies, gram, pair_angles
from ..exceptions import InvalidInputError
from ._options import DEFAULT_QUANTILES, FeatureOption, check_option, n_features, parse_option


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """The network input computed from one ``(γ, H)`` pair.

    Attributes:
        option: Recipe that produced the values
        values: Real vector of length ``n_features(option, nt, q)``
        nt: Antenna count of the channel
        q: Number of quantile probabilities, only for ``quant8``
    """

    option: FeatureOption
    values: np.ndarray = field(repr=False)
    nt: int
    q: Optional[int] = None

    def __len__(self) -> int:
        return len(self.values)


def _as_batch(gammas: np.ndarray, channels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gammas = np.asarray(gammas, dtype=float)
    channels = np.asarray(channels, dtype=complex)
    if gammas.ndim != 1 or channels.ndim != 3 or channels.shape[0] != gammas.shape[0]:
        raise InvalidInputError(
            f"Expected SNRs of shape (L,) and channels of shape (L, Nr, Nt), "
            f"got {gammas.shape} and {channels.shape}"
        )
    if not (np.all(np.isfinite(gammas)) and np.all(gammas >= 0.0)):
        raise InvalidInputError("SNRs must be finite and nonnegative")
    if not np.all(np.isfinite(channels)):
        raise InvalidInputError("Channel matrices have non-finite entries")
    return gammas, channels


def _canonical(channels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reorder columns by ascending energy and return ``(energies, grams)``.

    Two columns of equal energy in a two-antenna channel are ordered so that
    the imaginary part of their inner product is nonnegative, which makes
    the result independent of the original column order.

    Raises:
        InvalidInputError: If any column has zero energy.
    """
    energies = column_energies(channels)
    if np.any(energies == 0.0):
        raise InvalidInputError("Channel has a zero column; its angles are undefined")

    order = np.argsort(energies, axis=-1, kind="stable")
    energies = np.take_along_axis(energies, order, axis=-1)
    grams = gram(np.take_along_axis(channels, order[:, None, :], axis=-1))

    if channels.shape[-1] == 2:
        flip = (energies[:, 0] == energies[:, 1]) & (grams[:, 0, 1].imag < 0.0)
        grams = np.where(flip[:, None, None], grams.conj(), grams)
    return energies, grams


def _cross_distances(gammas: np.ndarray, energies: np.ndarray, p: np.ndarray) -> np.ndarray:
    # Re{u p} for u in {1, i, -1, -i}
    rotated = np.stack([p.real, -p.imag, -p.real, p.imag], axis=-1)
    total = (energies[:, 0] + energies[:, 1])[:, None]
    return np.sort(gammas[:, None] * (total - 2.0 * rotated), axis=-1)


def _pair_angles(energies: np.ndarray, grams: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Angles of every column pair ``i < j`` in lexicographic order, shape ``(L, pairs)``."""
    rows, columns = np.triu_indices(grams.shape[-1], k=1)
    return pair_angles(grams[:, rows, columns], energies[:, rows], energies[:, columns])


def _interleave(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    return np.stack([first, second], axis=-1).reshape(len(first), -1)


def feature_matrix(
    option: Union[FeatureOption, str],
    gammas: np.ndarray,
    channels: np.ndarray,
    q: Optional[int] = None,
) -> np.ndarray:
    """Features of many ``(γ, H)`` pairs, one row per pair.

    Args:
        option: Feature recipe
        gammas: Linear SNRs of shape ``(L,)``
        channels: Channel matrices of shape ``(L, Nr, Nt)``
        q: Number of quantile probabilities for ``quant8``; defaults to 5

    Returns:
        Array of shape ``(L, F)``.

    Raises:
        InvalidInputError: If the option does not fit the antenna count or a
            channel has a zero column.
    """
    option = parse_option(option)
    gammas, channels = _as_batch(gammas, channels)
    nt = channels.shape[-1]
    if option is FeatureOption.QUANT8 and q is None:
        q = DEFAULT_QUANTILES
    check_option(option, nt, q)

    if option is FeatureOption.RAW:
        if np.any(gammas == 0.0):
            raise InvalidInputError("Raw features need a positive SNR")
        entries = np.stack([channels.real, channels.imag], axis=-1).reshape(len(gammas), -1)
        return np.hstack([10.0 * np.log10(gammas)[:, None], entries])

    energies, grams = _canonical(channels)
    blocks = [gammas[:, None] * energies]

    if nt == 2:
        p = grams[:, 0, 1]
        if option in (FeatureOption.III, FeatureOption.IV, FeatureOption.V):
            blocks.append(_cross_distances(gammas, energies, p))
        if option in (FeatureOption.I, FeatureOption.IV):
            projection = p / np.sqrt(energies[:, 0] * energies[:, 1])
            blocks.append(np.stack([projection.real, projection.imag], axis=-1))
        if option in (FeatureOption.II, FeatureOption.V):
            theta_h, phi = pair_angles(p, energies[:, 0], energies[:, 1])
            blocks.append(np.stack([theta_h, phi], axis=-1))
    elif option is FeatureOption.MULTI4:
        blocks.append(_interleave(*_pair_angles(energies, grams)))
    else:
        assert q is not None
        theta_h, phi = _pair_angles(energies, grams)
        probabilities = np.linspace(0.0, 1.0, q)
        blocks.append(np.quantile(theta_h, probabilities, axis=-1, method="linear").T)
        blocks.append(np.quantile(phi, probabilities, axis=-1, method="linear").T)

    matrix = np.hstack(blocks)
    assert matrix.shape[1] == n_features(option, nt, q)
    return matrix


def extract(
    option: Union[FeatureOption, str], gamma: float, H: np.ndarray, q: Optional[int] = None
) -> FeatureVector:
    """Features of one ``(γ, H)`` pair.

    Every recipe except ``raw`` starts with the column energies ``γ‖h_l‖²``
    sorted ascending. For two antennas it continues with

    * ``i``: real and imaginary part of ``h_1ᴴh_2 / (‖h_1‖‖h_2‖)``
    * ``ii``: Hermitian angle and pseudo-angle
    * ``iii``: the four sorted QPSK cross distances
    * ``iv``: distances, then the normalized projection
    * ``v``: distances, then the angles
    """
    option = parse_option(option)
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2:
        raise InvalidInputError(f"Channel matrix must be 2-dimensional, got shape {H.shape}")
    if option is FeatureOption.QUANT8 and q is None:
        q = DEFAULT_QUANTILES
    values = feature_matrix(option, np.array([gamma]), H[None, :, :], q)[0]
    return FeatureVector(option, values, H.shape[1], q if option is FeatureOption.QUANT8 else None)


def extract_multi4(gamma: float, H: np.ndarray) -> FeatureVector:
    """Four sorted column energies, then ``(θ_H, φ)`` of the six column pairs."""
    return extract(FeatureOption.MULTI4, gamma, H)


def extract_quantile(gamma: float, H: np.ndarray, q: int = DEFAULT_QUANTILES) -> FeatureVector:
    """Eight sorted column energies, then ``q`` quantiles of each angle distribution.

    Quantile probabilities are equally spaced from 0 to 1 and interpolate
    linearly between order statistics, so ``q = 5`` gives minimum, quartiles
    and maximum of the 28 Hermitian angles and of the 28 pseudo-angles.
    """
    return extract(FeatureOption.QUANT8, gamma, H, q)


def qpsk_cross_distances(gamma: float, H: np.ndarray) -> np.ndarray:
    """Sorted ``γ(‖h_1‖² + ‖h_2‖² - 2 Re{u h_1ᴴh_2})`` over ``u`` in ``{±1, ±i}``.

    These are the distinct squared distances between QPSK supersymbols sent
    from different antennas.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[1] != 2:
        raise InvalidInputError(f"Cross distances need a 2-antenna channel, got shape {H.shape}")
    gammas, channels = _as_batch(np.array([gamma]), H[None, :, :])
    energies, grams = _canonical(channels)
    return _cross_distances(gammas, energies, grams[:, 0, 1])[0]
