from __future__ import annotations

__all__ = ["DESK", "FULL", "RunScale"]

from dataclasses import dataclass


@dataclass(frozen=True)
class RunScale:
    """Sizes of the reproducible jobs.

    Attributes:
        n_samples: Channel realizations of the 2×2 dataset
        n_noise_draws: Noise realizations per dataset target
        multi_samples: Channel realizations of the 4×4 and 8×8 datasets
        snr_range_db: Interval the dataset SNRs are drawn from
        split_fractions: Training, validation and test shares
        constellations: Output alphabets of every dataset
        ergodic_grid_db: SNR points of the ergodic curves
        ergodic_channels: Channel realizations per ergodic point
        ergodic_draws: Noise realizations per ergodic oracle value
        sweep_gamma: Linear SNR of the angle sweep
        sweep_points: Grid points per angle of the sweep
        sweep_draws: Noise realizations per sweep point
        hidden_sizes: Hidden-layer sizes of the ablation
        multi_hidden: Hidden-layer size of the 4×4 and 8×8 networks
        restarts: Training restarts per network
        quantiles: Quantile count of 8×8 features
        complexity_evals: Triple-MI evaluations timed per method
    """

    n_samples: int
    n_noise_draws: int
    multi_samples: dict[int, int]
    snr_range_db: tuple[float, float] = (-20.0, 20.0)
    split_fractions: tuple[float, float, float] = (0.70, 0.15, 0.15)
    constellations: tuple[str, ...] = ("QPSK", "8PSK", "16QAM")
    ergodic_grid_db: tuple[float, ...] = (
        -20.0, -16.0, -12.0, -8.0, -4.0, 0.0, 4.0, 8.0, 12.0, 16.0, 20.0,
    )
    ergodic_channels: int = 100
    ergodic_draws: int = 1000
    sweep_gamma: float = 2.0
    sweep_points: int = 13
    sweep_draws: int = 5000
    hidden_sizes: tuple[int, ...] = (10, 20)
    multi_hidden: int = 20
    restarts: int = 10
    quantiles: int = 5
    complexity_evals: int = 7500


# Runs the whole pipeline in a couple of hours on a laptop
DESK = RunScale(n_samples=20_000, n_noise_draws=2_000, multi_samples={4: 5_000, 8: 5_000})

FULL = RunScale(
    n_samples=50_000,
    n_noise_draws=5_000,
    multi_samples={4: 50_000, 8: 25_000},
    sweep_points=31,
)
