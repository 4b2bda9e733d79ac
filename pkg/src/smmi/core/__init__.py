# Use `as` to mark names as re-exports from submodules for mypy.
from ._channel import (
    SUPPORTED_ANTENNAS as SUPPORTED_ANTENNAS,
    ChannelRealization as ChannelRealization,
    angle_parametrized_channel as angle_parametrized_channel,
    sample_rayleigh_channel as sample_rayleigh_channel,
    sample_snr_db as sample_snr_db,
)
from ._constellation import (
    Constellation as Constellation,
    ConstellationKind as ConstellationKind,
    make_constellation as make_constellation,
)
from ._geometry import (
    AnglePair as AnglePair,
    DistanceSet as DistanceSet,
    column_energies as column_energies,
    distance_set as distance_set,
    gram as gram,
    hermitian_angles as hermitian_angles,
    pair_angles as pair_angles,
    supersymbols as supersymbols,
)
