# Use `as` to mark names as re-exports from submodules for mypy.
from ._jensen import (
    DifferenceSet as DifferenceSet,
    difference_set as difference_set,
    jensen_mi as jensen_mi,
    jensen_mi_all as jensen_mi_all,
    jensen_mi_batch as jensen_mi_batch,
)
