from __future__ import annotations

__all__ = ["TrainConfig", "dump_train_config", "parse_train_config", "read_train_config"]

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Union

from ..exceptions import ConfigError
from ..formats import Failure, Result, SettingParsers, Success


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of Levenberg–Marquardt training.

    Attributes:
        n_hidden: Hidden neurons
        max_epochs: Upper bound on accepted steps per restart
        lambda_init: Initial damping
        lambda_up: Damping factor after a rejected step
        lambda_down: Damping factor after an accepted step
        lambda_min: Floor of the damping
        lambda_max: Damping beyond which a restart gives up
        patience: Consecutive epochs without a new best validation MSE
            that end a restart; a flat validation MSE counts the same as a
            rising one
        restarts: Independent initializations; the best on validation wins
        seed: Base seed of the initializations
        mse_goal: Training MSE at which a restart stops early
        min_gradient: Norm of the mean gradient at which a restart stops
    """

    n_hidden: int = 10
    max_epochs: int = 1000
    lambda_init: float = 1e-3
    lambda_up: float = 10.0
    lambda_down: float = 0.1
    lambda_min: float = 1e-12
    lambda_max: float = 1e12
    patience: int = 6
    restarts: int = 10
    seed: int = 0
    mse_goal: float = 0.0
    min_gradient: float = 1e-10

    def __post_init__(self) -> None:
        for name in ["n_hidden", "max_epochs", "patience", "restarts"]:
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")
        if not self.lambda_up > 1.0 > self.lambda_down > 0.0:
            raise ConfigError(
                f"Damping factors must satisfy lambda_up > 1 > lambda_down > 0, "
                f"got {self.lambda_up} and {self.lambda_down}"
            )
        if not 0.0 < self.lambda_min <= self.lambda_init <= self.lambda_max:
            raise ConfigError(
                f"Damping must satisfy 0 < lambda_min <= lambda_init <= lambda_max, got "
                f"{self.lambda_min}, {self.lambda_init}, {self.lambda_max}"
            )
        if self.mse_goal < 0.0 or self.min_gradient < 0.0:
            raise ConfigError("mse_goal and min_gradient must be nonnegative")


_INTEGER_KEYS = {"n_hidden", "max_epochs", "patience", "restarts", "seed"}


def parse_train_config(text: str) -> Result[TrainConfig]:
    """Parse ``key = value`` lines with ``#`` comments into a config.

    Keys not present keep their defaults. Unknown keys, repeated keys,
    malformed lines and out-of-range values are ``ConfigError``s.
    """
    known = {field.name for field in fields(TrainConfig)}
    settings: dict[str, Any] = {}

    for number, line in enumerate(text.splitlines(), start=1):
        parsed = SettingParsers.line.parse(line.strip())
        if isinstance(parsed, Failure):
            return Failure(ConfigError(f"Line {number}: {parsed.failure()}"))
        setting = parsed.unwrap()
        if not setting:
            continue
        key, value = setting[0]
        if key not in known:
            return Failure(ConfigError(f"Line {number}: unknown key {key!r}"))
        if key in settings:
            return Failure(ConfigError(f"Line {number}: key {key!r} given twice"))
        if key in _INTEGER_KEYS and not isinstance(value, int):
            return Failure(ConfigError(f"Line {number}: {key} must be an integer, got {value!r}"))
        settings[key] = float(value) if key not in _INTEGER_KEYS else value

    try:
        return Success(TrainConfig(**settings))
    except ConfigError as error:
        return Failure(error)


def read_train_config(path: Union[str, Path]) -> Result[TrainConfig]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        return Failure(ConfigError(f"Cannot read config: {error.strerror}", path))

    result = parse_train_config(text)
    if isinstance(result, Failure):
        error = result.failure()
        assert isinstance(error, ConfigError)
        return Failure(ConfigError(error.message, path))
    return result


def dump_train_config(config: TrainConfig) -> str:
    return "".join(f"{field.name} = {getattr(config, field.name)!r}\n" for field in fields(config))
