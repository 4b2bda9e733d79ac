from __future__ import annotations

__all__ = ["derive_seed", "ordered_map", "rng"]

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar, Union

import numpy as np

from . import options

A = TypeVar("A")
B = TypeVar("B")

Seed = Union[int, np.random.SeedSequence]


def derive_seed(base_seed: int, *keys: int) -> int:
    """Derive an independent 64-bit seed from a base seed and a key path.

    This is the splittable counter scheme used for every reproducible stream
    in smmi. The key path is fed to ``numpy.random.SeedSequence`` as its
    spawn key, so ``derive_seed(s, i, j)`` is a pure function of ``(s, i, j)``
    and streams for different key paths are statistically independent.

    Args:
        base_seed: Nonnegative master seed
        *keys: Nonnegative integers identifying the stream, e.g. a row id
            followed by a constellation index

    Returns:
        A Python ``int`` in ``[0, 2**64)``.

    Example:
        $ derive_seed(7, 3, 0) == derive_seed(7, 3, 0)  # True
        $ derive_seed(7, 3, 0) == derive_seed(7, 3, 1)  # False
    """
    sequence = np.random.SeedSequence(base_seed, spawn_key=tuple(keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def rng(seed: Seed) -> np.random.Generator:
    """Create the generator used by every sampling operation."""
    return np.random.default_rng(seed)


def ordered_map(function: Callable[[A], B], items: Iterable[A]) -> Iterator[B]:
    """Apply a function to each item, yielding results in input order.

    When ``options.max_workers`` is greater than one, items are evaluated on a
    thread pool of that size; numpy releases the GIL inside the heavy kernels.
    Results are yielded in the order of ``items`` regardless of completion
    order, so callers that derive seeds from item indexes get results that
    do not depend on the worker count.
    """
    workers = options.max_workers
    if workers is None or workers <= 1:
        yield from map(function, items)
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            yield from executor.map(function, items)
