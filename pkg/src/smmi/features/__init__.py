# Use `as` to mark names as re-exports from submodules for mypy.
from ._extract import (
    FeatureVector as FeatureVector,
    extract as extract,
    extract_multi4 as extract_multi4,
    extract_quantile as extract_quantile,
    feature_matrix as feature_matrix,
    qpsk_cross_distances as qpsk_cross_distances,
)
from ._options import (
    DEFAULT_QUANTILES as DEFAULT_QUANTILES,
    FeatureOption as FeatureOption,
    check_option as check_option,
    feature_names as feature_names,
    n_features as n_features,
    parse_option as parse_option,
)
