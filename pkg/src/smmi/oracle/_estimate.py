from __future__ import annotations

__all__ = ["MiEstimate"]

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class MiEstimate:
    """Monte Carlo estimate of a mutual information in bits per channel use.

    Attributes:
        value: Raw sample mean; may stray outside the feasible range by the
            Monte Carlo error
        n_noise_draws: Number of noise realizations averaged
        std_error: Standard error of the sample mean
        max_bits: Largest feasible value, ``log2(Nt·M)`` for a finite
            alphabet and infinity for a Gaussian codebook
    """

    value: float
    n_noise_draws: int
    std_error: float
    max_bits: float = math.inf

    @property
    def clamped(self) -> float:
        return min(max(self.value, 0.0), self.max_bits)

    def within(self, expected: float, n_sigma: float = 3.0) -> bool:
        """Whether ``expected`` lies within ``n_sigma`` standard errors of the estimate."""
        return abs(self.value - expected) <= n_sigma * self.std_error
