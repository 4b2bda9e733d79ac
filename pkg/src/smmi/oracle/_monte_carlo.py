from __future__ import annotations

__all__ = ["capacity_gaussian", "complex_normal", "mi_finite", "mi_finite_batch"]

import logging
import math
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from ..core import ChannelRealization, Constellation, supersymbols
from ..exceptions import InvalidInputError
from ..util import Seed, derive_seed, ordered_map, rng
from ._estimate import MiEstimate

logger = logging.getLogger(__name__)

# Upper bound on the number of exponents held in memory at once
_CHUNK_ELEMENTS = 4_000_000


def complex_normal(rng_seed: Seed, shape: tuple[int, ...]) -> np.ndarray:
    """Circularly symmetric complex Gaussian samples of unit variance."""
    parts = rng(rng_seed).normal(0.0, math.sqrt(0.5), size=(*shape, 2))
    return parts[..., 0] + 1j * parts[..., 1]


def _check_draws(n_draws: int) -> None:
    if n_draws < 1:
        raise InvalidInputError(f"Number of noise draws must be at least 1, got {n_draws}")


def _summarize(integrand: np.ndarray, offset: float, max_bits: float) -> MiEstimate:
    """Turn per-draw integrand samples in nats into an estimate in bits."""
    n = len(integrand)
    value = (offset - float(np.mean(integrand))) / math.log(2)
    if n > 1:
        std_error = float(np.std(integrand, ddof=1)) / math.sqrt(n) / math.log(2)
    else:
        std_error = math.inf
    return MiEstimate(value, n, std_error, max_bits)


def mi_finite(
    channel: ChannelRealization, constellation: Constellation, n_draws: int, seed: Seed
) -> MiEstimate:
    """Monte Carlo mutual information of a spatially modulated finite alphabet.

    For every supersymbol ``x_a`` and noise draw ``w``, the integrand is
    ``log Σ_b exp(-γ‖x_a - x_b‖² - 2√γ Re{(x_a - x_b)ᴴ w})``, which is
    ``-‖√γ(x_a - x_b) + w‖² + ‖w‖²`` expanded so that ``γ = 0`` needs no
    division. The same noise draws are reused for every ``x_a``.

    Args:
        channel: Channel matrix and linear SNR
        constellation: Symbol alphabet sent from the active antenna
        n_draws: Number of noise realizations
        seed: Seed of the noise stream

    Returns:
        The raw estimate with its standard error; ``clamped`` restricts it to
        ``[0, log2(Nt·M)]``.

    Raises:
        InvalidInputError: If ``n_draws`` is less than one.
    """
    _check_draws(n_draws)
    n_points = channel.nt * constellation.order
    max_bits = constellation.max_bits(channel.nt)

    if channel.gamma == 0.0:
        # Every exponent vanishes, so the inner sum is exactly Nt·M
        return MiEstimate(0.0, n_draws, 0.0 if n_draws > 1 else math.inf, max_bits)

    points = supersymbols(channel.H, constellation)
    noise = complex_normal(seed, (n_draws, channel.nr))
    root_gamma = math.sqrt(channel.gamma)

    chunk = max(1, _CHUNK_ELEMENTS // (n_draws * n_points))
    integrand = np.zeros(n_draws)
    for start in range(0, n_points, chunk):
        differences = points[start : start + chunk, None, :] - points[None, :, :]
        squared = np.sum(differences.real**2 + differences.imag**2, axis=-1)
        cross = np.einsum("nr,abr->anb", noise, differences.conj()).real
        exponents = -channel.gamma * squared[:, None, :] - 2.0 * root_gamma * cross
        integrand += np.sum(logsumexp(exponents, axis=-1), axis=0)

    return _summarize(integrand / n_points, math.log(n_points), max_bits)


def capacity_gaussian(channel: ChannelRealization, n_draws: int, seed: Seed) -> MiEstimate:
    """Monte Carlo capacity of a spatially modulated Gaussian codebook.

    The received signal is an equal-weight mixture of zero-mean Gaussians with
    covariances ``Φ_l = γ h_l h_lᴴ + I``. The output entropy is estimated by
    drawing ``n_draws`` samples from every component and averaging the
    negative log mixture density; the noise entropy ``Nr log2(πe)`` is
    subtracted in closed form.

    Raises:
        InvalidInputError: If ``n_draws`` is less than one.
    """
    _check_draws(n_draws)
    nt, nr, gamma = channel.nt, channel.nr, channel.gamma

    if gamma == 0.0:
        return MiEstimate(0.0, n_draws, 0.0 if n_draws > 1 else math.inf)

    generator = np.random.SeedSequence(seed) if isinstance(seed, int) else seed
    symbol_seed, noise_seed = generator.spawn(2)
    H = channel.H
    symbols = complex_normal(symbol_seed, (nt, n_draws))
    noise = complex_normal(noise_seed, (nt, n_draws, nr))
    # samples[l, n] is drawn from the component of antenna l
    samples = math.sqrt(gamma) * symbols[..., None] * H.T[:, None, :] + noise

    energies = np.sum(H.real**2 + H.imag**2, axis=0)
    determinants = 1.0 + gamma * energies
    # projections[l, n, m] is h_mᴴ y for the sample y at samples[l, n]
    projections = np.einsum("rm,lnr->lnm", H.conj(), samples)
    norms = np.sum(samples.real**2 + samples.imag**2, axis=-1)
    quadratic = (
        norms[..., None] - gamma * np.abs(projections) ** 2 / determinants[None, None, :]
    )
    log_density = logsumexp(-np.log(determinants) - quadratic, axis=-1) - math.log(nt)

    # Output entropy minus Nr nats of noise entropy, averaged over components
    integrand = np.mean(log_density, axis=0)
    return _summarize(integrand, -nr, math.inf)


def mi_finite_batch(
    channels: Sequence[ChannelRealization],
    constellations: Sequence[Constellation],
    n_draws: int,
    base_seed: int,
) -> list[list[MiEstimate]]:
    """Oracle estimates for every (channel, constellation) pair.

    Cell ``(i, j)`` uses the seed ``derive_seed(base_seed, i, j)``, so the
    result equals sequential ``mi_finite`` calls with those seeds and does
    not depend on ``options.max_workers``.
    """
    if len(channels) == 0 or len(constellations) == 0:
        raise InvalidInputError("Batch evaluation needs at least one channel and constellation")
    _check_draws(n_draws)

    def cell(index: tuple[int, int]) -> MiEstimate:
        i, j = index
        return mi_finite(channels[i], constellations[j], n_draws, derive_seed(base_seed, i, j))

    indexes = [(i, j) for i in range(len(channels)) for j in range(len(constellations))]
    estimates = list(ordered_map(cell, indexes))
    logger.debug("Evaluated %d oracle cells", len(estimates))

    width = len(constellations)
    return [estimates[i * width : (i + 1) * width] for i in range(len(channels))]
