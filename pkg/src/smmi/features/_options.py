from __future__ import annotations

__all__ = [
    "DEFAULT_QUANTILES",
    "FeatureOption",
    "check_option",
    "feature_names",
    "n_features",
    "parse_option",
]

from enum import Enum
from typing import Optional, Union

from ..exceptions import InvalidInputError

DEFAULT_QUANTILES = 5


class FeatureOption(Enum):
    """Named recipes turning ``(γ, H)`` into a network input vector.

    The values are the stable names used in model files and on the command
    line.
    """

    I = "i"  # noqa: E741
    II = "ii"
    III = "iii"
    IV = "iv"
    V = "v"
    MULTI4 = "multi4"
    QUANT8 = "quant8"
    RAW = "raw"

    def __str__(self) -> str:
        return self.value

    @property
    def nt(self) -> Optional[int]:
        """Antenna count the option is defined for, or None if it accepts any."""
        if self is FeatureOption.MULTI4:
            return 4
        elif self is FeatureOption.QUANT8:
            return 8
        elif self is FeatureOption.RAW:
            return None
        else:
            return 2


def parse_option(option: Union[FeatureOption, str]) -> FeatureOption:
    if isinstance(option, FeatureOption):
        return option
    try:
        return FeatureOption(option.lower())
    except ValueError:
        supported = ", ".join(member.value for member in FeatureOption)
        raise InvalidInputError(
            f"Unknown feature option {option!r}; expected one of {supported}"
        ) from None


def check_option(option: FeatureOption, nt: int, q: Optional[int]) -> None:
    if option.nt is not None and option.nt != nt:
        raise InvalidInputError(
            f"Feature option {option} is defined for {option.nt} antennas, got {nt}"
        )
    if option is FeatureOption.QUANT8 and (q is None or q < 2):
        raise InvalidInputError(f"Quantile features need at least 2 probabilities, got {q}")


def _pairs(nt: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(nt) for j in range(i + 1, nt)]


def feature_names(option: FeatureOption, nt: int, q: Optional[int] = None) -> list[str]:
    """Column names of the feature matrix, in order.

    Names start with their kind (``energy``, ``distance``, ``theta``, ``phi``,
    ``re``, ``im``, ``snr``), which decides how histograms bin them.
    """
    check_option(option, nt, q)
    if option is FeatureOption.RAW:
        entries = [
            f"{part}_h{r + 1}{c + 1}"
            for r in range(nt)
            for c in range(nt)
            for part in ("re", "im")
        ]
        return ["snr_db", *entries]

    energies = [f"energy_{column + 1}" for column in range(nt)]
    distances = [f"distance_{i + 1}" for i in range(4)]
    projection = ["re_projection", "im_projection"]
    angles = ["theta_12", "phi_12"]

    if option is FeatureOption.I:
        return energies + projection
    elif option is FeatureOption.II:
        return energies + angles
    elif option is FeatureOption.III:
        return energies + distances
    elif option is FeatureOption.IV:
        return energies + distances + projection
    elif option is FeatureOption.V:
        return energies + distances + angles
    elif option is FeatureOption.MULTI4:
        names = []
        for i, j in _pairs(nt):
            names += [f"theta_{i + 1}{j + 1}", f"phi_{i + 1}{j + 1}"]
        return energies + names
    else:
        assert q is not None
        thetas = [f"theta_q{index}" for index in range(q)]
        phis = [f"phi_q{index}" for index in range(q)]
        return energies + thetas + phis


def n_features(option: FeatureOption, nt: int, q: Optional[int] = None) -> int:
    return len(feature_names(option, nt, q))
