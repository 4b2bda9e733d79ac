from __future__ import annotations

__all__ = ["Constellation", "ConstellationKind", "make_constellation"]

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from ..exceptions import InvalidInputError


class ConstellationKind(Enum):
    BPSK = "BPSK"
    QPSK = "QPSK"
    PSK8 = "8PSK"
    QAM16 = "16QAM"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class Constellation:
    """A finite symbol alphabet with unit average power.

    Attributes:
        kind: Which of the supported alphabets this is
        symbols: Complex array of the ``M`` distinct symbols
    """

    kind: ConstellationKind
    symbols: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.symbols)

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.order))

    def max_bits(self, nt: int) -> float:
        """Largest achievable MI, log2(Nt·M), of an Nt-antenna link."""
        return math.log2(nt * self.order)

    def __str__(self) -> str:
        return str(self.kind)


def _psk(order: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(order) / order)


def _square_qam(order: int) -> np.ndarray:
    side = math.isqrt(order)
    levels = 2.0 * np.arange(side) - (side - 1)
    grid = levels[None, :] + 1j * levels[:, None]
    points = grid.reshape(-1)
    return points / np.sqrt(np.mean(np.abs(points) ** 2))


def make_constellation(kind: Union[ConstellationKind, str]) -> Constellation:
    """Build one of the supported constellations.

    PSK symbols are equally spaced on the unit circle starting at angle 0.
    16QAM is the grid ``{±1, ±3} × {±1, ±3}`` scaled by ``1/√10``.

    Args:
        kind: A ``ConstellationKind`` or its name (``"BPSK"``, ``"QPSK"``,
            ``"8PSK"``, ``"16QAM"``, case insensitive)

    Raises:
        InvalidInputError: If ``kind`` names no supported constellation.
    """
    if isinstance(kind, str):
        try:
            kind = ConstellationKind(kind.upper())
        except ValueError:
            supported = ", ".join(member.value for member in ConstellationKind)
            raise InvalidInputError(
                f"Unknown constellation {kind!r}; expected one of {supported}"
            ) from None

    if kind is ConstellationKind.BPSK:
        symbols = np.array([1.0 + 0.0j, -1.0 + 0.0j])
    elif kind is ConstellationKind.QPSK:
        # Exact values instead of exp(iπk/2) so that QPSK is {1, i, -1, -i} to the bit
        symbols = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])
    elif kind is ConstellationKind.PSK8:
        symbols = _psk(8)
    else:
        symbols = _square_qam(16)

    symbols.setflags(write=False)
    return Constellation(kind, symbols)
