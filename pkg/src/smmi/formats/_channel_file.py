from __future__ import annotations

__all__ = ["channel_from_reals", "read_channel_file"]

from pathlib import Path
from typing import Sequence, Union

import numpy as np

from ..exceptions import DatasetError, InvalidInputError
from ._result import Failure, Result, Success
from ._text import parse_reals


def channel_from_reals(reals: Sequence[float], nt: int) -> np.ndarray:
    """Square channel matrix from ``2·nt²`` reals, re and im interleaved row-major.

    Raises:
        InvalidInputError: If the count does not match ``nt``.
    """
    expected = 2 * nt * nt
    if len(reals) != expected:
        raise InvalidInputError(
            f"A {nt}×{nt} channel needs {expected} reals (re, im row-major), got {len(reals)}"
        )
    pairs = np.asarray(reals, dtype=float).reshape(nt, nt, 2)
    return pairs[..., 0] + 1j * pairs[..., 1]


def read_channel_file(path: Union[str, Path], nt: int) -> Result[np.ndarray]:
    """Read a channel matrix written as reals separated by commas or whitespace."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        return Failure(DatasetError(f"Cannot read channel file: {error.strerror}", path))

    parsed = parse_reals(text)
    if isinstance(parsed, Failure):
        return Failure(DatasetError(f"Malformed channel file\n{parsed.failure()}", path))
    try:
        return Success(channel_from_reals(parsed.unwrap(), nt))
    except InvalidInputError as error:
        return Failure(DatasetError(error.message, path))
