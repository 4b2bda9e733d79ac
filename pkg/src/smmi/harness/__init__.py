# Use `as` to mark names as re-exports from submodules for mypy.
from ._complexity import (
    OperationCount as OperationCount,
    complexity_report as complexity_report,
    feature_operation_count as feature_operation_count,
    jensen_operation_count as jensen_operation_count,
    nn_operation_count as nn_operation_count,
    operation_count as operation_count,
)
from ._dataset import (
    DATASET_FORMAT as DATASET_FORMAT,
    DATASET_VERSION as DATASET_VERSION,
    DatasetHeader as DatasetHeader,
    LabeledDataset as LabeledDataset,
    format_dataset as format_dataset,
    gen_dataset as gen_dataset,
    generate_row as generate_row,
    read_dataset as read_dataset,
    split_sizes as split_sizes,
    write_dataset as write_dataset,
)
from ._evaluate import (
    ConstellationMetrics as ConstellationMetrics,
    EvalReport as EvalReport,
    evaluate as evaluate,
    scatter_records as scatter_records,
)
from ._experiments import (
    AblationCell as AblationCell,
    MultiAntennaResult as MultiAntennaResult,
    angle_sweep as angle_sweep,
    default_angle_grids as default_angle_grids,
    ergodic_curve as ergodic_curve,
    feature_ablation as feature_ablation,
    feature_histograms as feature_histograms,
    multi_antenna_experiment as multi_antenna_experiment,
    option_for_antennas as option_for_antennas,
    received_cloud as received_cloud,
)
from ._predictors import (
    ConstantPredictor as ConstantPredictor,
    JensenPredictor as JensenPredictor,
    NetworkPredictor as NetworkPredictor,
    OraclePredictor as OraclePredictor,
    Predictor as Predictor,
)
from ._presets import DESK as DESK, FULL as FULL, RunScale as RunScale
from ._tables import format_table as format_table, write_table as write_table
