# Use `as` to mark names as re-exports from submodules for mypy.
from ._estimate import MiEstimate as MiEstimate
from ._monte_carlo import (
    capacity_gaussian as capacity_gaussian,
    complex_normal as complex_normal,
    mi_finite as mi_finite,
    mi_finite_batch as mi_finite_batch,
)
