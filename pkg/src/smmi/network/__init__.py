# Use `as` to mark names as re-exports from submodules for mypy.
from ._forward import (
    clamp_outputs as clamp_outputs,
    forward as forward,
    forward_batch as forward_batch,
    hidden_layer as hidden_layer,
    scale_inputs as scale_inputs,
)
from ._model_file import (
    MODEL_FORMAT as MODEL_FORMAT,
    MODEL_VERSION as MODEL_VERSION,
    dump_model as dump_model,
    load_model as load_model,
    read_model as read_model,
    save_model as save_model,
)
from ._params import (
    NetworkOutput as NetworkOutput,
    NetworkParams as NetworkParams,
    Scalers as Scalers,
    constellation_kinds as constellation_kinds,
    fit_scalers as fit_scalers,
)
