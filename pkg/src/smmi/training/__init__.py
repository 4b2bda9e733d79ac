# Use `as` to mark names as re-exports from submodules for mypy.
from ._config import (
    TrainConfig as TrainConfig,
    dump_train_config as dump_train_config,
    parse_train_config as parse_train_config,
    read_train_config as read_train_config,
)
from ._jacobian import (
    NormalEquations as NormalEquations,
    jacobian as jacobian,
    mean_squared_error as mean_squared_error,
    normal_equations as normal_equations,
)
from ._levenberg_marquardt import (
    Split as Split,
    TrainReport as TrainReport,
    damped_step as damped_step,
    fit_network as fit_network,
    initial_params as initial_params,
    lm_step as lm_step,
)
from ._train import split_matrices as split_matrices, train as train
