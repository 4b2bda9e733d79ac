from __future__ import annotations

__all__ = [
    "SUPPORTED_ANTENNAS",
    "ChannelRealization",
    "angle_parametrized_channel",
    "sample_rayleigh_channel",
    "sample_snr_db",
]

import math
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import InvalidInputError
from ..util import Seed, rng

SUPPORTED_ANTENNAS = (2, 4, 8)


def _check_antennas(nt: int) -> None:
    if nt not in SUPPORTED_ANTENNAS:
        raise InvalidInputError(
            f"Number of antennas must be one of {SUPPORTED_ANTENNAS}, got {nt}"
        )


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One channel-use snapshot: the channel matrix and the linear SNR.

    Attributes:
        H: Complex ``Nr × Nt`` channel matrix
        gamma: Linear average SNR
    """

    H: np.ndarray = field(repr=False)
    gamma: float

    def __post_init__(self) -> None:
        H = np.asarray(self.H, dtype=complex)
        if H.ndim != 2:
            raise InvalidInputError(f"Channel matrix must be 2-dimensional, got shape {H.shape}")
        nr, nt = H.shape
        if nr != nt:
            raise InvalidInputError(f"Channel matrix must be square, got {nr}×{nt}")
        _check_antennas(nt)
        if not np.all(np.isfinite(H)):
            raise InvalidInputError("Channel matrix has non-finite entries")
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise InvalidInputError(f"SNR must be finite and nonnegative, got {self.gamma}")
        H.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "gamma", float(self.gamma))

    @classmethod
    def from_snr_db(cls, H: np.ndarray, gamma_db: float) -> ChannelRealization:
        return cls(H, 10.0 ** (gamma_db / 10.0))

    @property
    def gamma_db(self) -> float:
        return 10.0 * math.log10(self.gamma) if self.gamma > 0 else -math.inf

    @property
    def nt(self) -> int:
        return int(self.H.shape[1])

    @property
    def nr(self) -> int:
        return int(self.H.shape[0])


def sample_rayleigh_channel(rng_seed: Seed, nt: int) -> np.ndarray:
    """Draw an ``Nt × Nt`` Rayleigh channel matrix.

    Entries are independent ``CN(0, 1)``: real and imaginary parts are
    independent zero-mean Gaussians of variance 1/2. Only the matrix is
    returned; the SNR is attached by building a ``ChannelRealization``.
    """
    _check_antennas(nt)
    parts = rng(rng_seed).normal(0.0, math.sqrt(0.5), size=(nt, nt, 2))
    return parts[..., 0] + 1j * parts[..., 1]


def sample_snr_db(rng_seed: Seed, lo_db: float, hi_db: float) -> float:
    """Draw an SNR in dB uniformly from ``[lo_db, hi_db]``."""
    if not lo_db < hi_db:
        raise InvalidInputError(f"SNR interval must satisfy lo < hi, got [{lo_db}, {hi_db}]")
    return float(rng(rng_seed).uniform(lo_db, hi_db))


def angle_parametrized_channel(theta_h: float, phi: float) -> np.ndarray:
    """Build the unit-column 2×2 channel with prescribed angles between its columns.

    The matrix is ``[[1, cos θ e^{iφ}], [0, sin θ]]``, so the Hermitian angle
    between the columns is ``theta_h`` and the pseudo-angle is ``phi``.
    """
    if not 0.0 <= theta_h <= math.pi / 2:
        raise InvalidInputError(f"Hermitian angle must lie in [0, π/2], got {theta_h}")
    if not -math.pi < phi <= math.pi:
        raise InvalidInputError(f"Pseudo-angle must lie in (-π, π], got {phi}")

    return np.array(
        [
            [1.0 + 0.0j, math.cos(theta_h) * complex(math.cos(phi), math.sin(phi))],
            [0.0 + 0.0j, complex(math.sin(theta_h), 0.0)],
        ]
    )
