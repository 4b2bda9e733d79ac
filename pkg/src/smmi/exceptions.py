from __future__ import annotations

__all__ = [
    "ConfigError",
    "DatasetError",
    "InvalidInputError",
    "ModelFormatError",
    "NumericalError",
    "SmmiError",
]

from dataclasses import dataclass
from pathlib import Path
from typing import Optional


class SmmiError(Exception):
    """Base class of every error raised or returned by smmi."""


@dataclass(frozen=True)
class InvalidInputError(SmmiError):
    """Input rejected by a pure operation.

    Raised for arguments outside an operation's domain, such as an unknown
    constellation, a zero-norm channel column or mismatched dimensions.
    """

    message: str

    def __str__(self) -> str:
        return self.message


def _located(message: str, path: Optional[Path]) -> str:
    if path is None:
        return message
    else:
        return f"{path}: {message}"


@dataclass(frozen=True)
class DatasetError(SmmiError):
    """Malformed or inconsistent dataset file."""

    message: str
    path: Optional[Path] = None

    def __str__(self) -> str:
        return _located(self.message, self.path)


@dataclass(frozen=True)
class ModelFormatError(SmmiError):
    """Malformed model file or a model that does not fit its use."""

    message: str
    path: Optional[Path] = None

    def __str__(self) -> str:
        return _located(self.message, self.path)


@dataclass(frozen=True)
class ConfigError(SmmiError):
    """Malformed training configuration."""

    message: str
    path: Optional[Path] = None

    def __str__(self) -> str:
        return _located(self.message, self.path)


@dataclass(frozen=True)
class NumericalError(SmmiError):
    """Numerical failure.

    Raised when a damped system cannot be solved or when every training
    restart ends without an acceptable step.
    """

    message: str

    def __str__(self) -> str:
        return self.message
