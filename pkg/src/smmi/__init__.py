# Use `as` to mark names as re-exports from submodules for mypy.
from .approx import jensen_mi as jensen_mi, jensen_mi_all as jensen_mi_all
from .core import (
    ChannelRealization as ChannelRealization,
    Constellation as Constellation,
    ConstellationKind as ConstellationKind,
    make_constellation as make_constellation,
    sample_rayleigh_channel as sample_rayleigh_channel,
    sample_snr_db as sample_snr_db,
)
from .exceptions import (
    ConfigError as ConfigError,
    DatasetError as DatasetError,
    InvalidInputError as InvalidInputError,
    ModelFormatError as ModelFormatError,
    NumericalError as NumericalError,
    SmmiError as SmmiError,
)
from .features import FeatureOption as FeatureOption, extract as extract
from .network import (
    NetworkParams as NetworkParams,
    forward as forward,
    load_model as load_model,
    save_model as save_model,
)
from .oracle import MiEstimate as MiEstimate, mi_finite as mi_finite
from .training import TrainConfig as TrainConfig, train as train

__version__ = "1.0.0"
