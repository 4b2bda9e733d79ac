"""Command-line front end.

Every subcommand writes its table to ``--out`` when given and to standard
output otherwise, and prints a one-line summary on standard error.
"""

from __future__ import annotations

__all__ = ["build_parser", "main", "run"]

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from . import __version__, options
from .core import make_constellation
from .exceptions import (
    ConfigError,
    DatasetError,
    InvalidInputError,
    ModelFormatError,
    NumericalError,
    SmmiError,
)
from .features import DEFAULT_QUANTILES, FeatureOption, parse_option
from .formats import Failure, Result, channel_from_reals, read_channel_file
from .harness import (
    DESK,
    FULL,
    ConstantPredictor,
    JensenPredictor,
    LabeledDataset,
    NetworkPredictor,
    OraclePredictor,
    Predictor,
    RunScale,
    angle_sweep,
    complexity_report,
    default_angle_grids,
    ergodic_curve,
    evaluate,
    feature_ablation,
    feature_histograms,
    format_table,
    gen_dataset,
    multi_antenna_experiment,
    option_for_antennas,
    read_dataset,
    received_cloud,
    scatter_records,
    write_table,
)
from .network import NetworkParams, load_model, save_model
from .training import TrainConfig, read_train_config, train

logger = logging.getLogger(__name__)

T = TypeVar("T")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

ABLATION_OPTIONS = ("i", "ii", "iii", "iv", "v", "raw")


def _unwrap(result: Result[T]) -> T:
    if isinstance(result, Failure):
        raise result.failure()
    return result.unwrap()


def _csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(item) for item in _csv_list(text)]
    except ValueError:
        message = f"expected comma-separated numbers, got {text!r}"
        raise argparse.ArgumentTypeError(message) from None


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(item) for item in _csv_list(text)]
    except ValueError:
        message = f"expected comma-separated integers, got {text!r}"
        raise argparse.ArgumentTypeError(message) from None


def _pair(values: Sequence[float], flag: str) -> tuple[float, float]:
    if len(values) != 2:
        raise InvalidInputError(f"{flag} takes two numbers, got {len(values)}")
    return values[0], values[1]


def _triple(values: Sequence[float], flag: str) -> tuple[float, float, float]:
    if len(values) != 3:
        raise InvalidInputError(f"{flag} takes three numbers, got {len(values)}")
    return values[0], values[1], values[2]


def _summary(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(records: Iterable[dict[str, Any]], out: Optional[Path]) -> int:
    if out is None:
        text = format_table(records)
        sys.stdout.write(text)
        return max(text.count("\n") - 1, 0)
    return write_table(records, out)


def _progress_disabled(args: argparse.Namespace) -> Optional[bool]:
    return True if args.quiet else None


def _scale(args: argparse.Namespace) -> RunScale:
    return FULL if args.full_scale else DESK


def _seed(args: argparse.Namespace, default: int = 0) -> int:
    return default if args.seed is None else args.seed


def _load_dataset(path: Path) -> LabeledDataset:
    return _unwrap(read_dataset(path))


def _load_model(path: Path) -> NetworkParams:
    return _unwrap(load_model(path))


def _channel(args: argparse.Namespace, nt: int) -> np.ndarray:
    if args.h is not None and args.h_file is not None:
        raise InvalidInputError("Give the channel either with --h or with --h-file")
    if args.h is not None:
        return channel_from_reals(args.h, nt)
    if args.h_file is not None:
        return _unwrap(read_channel_file(args.h_file, nt))
    raise InvalidInputError("A channel is required: give --h or --h-file")


def _train_config(args: argparse.Namespace, n_hidden: int, restarts: int) -> TrainConfig:
    config = _unwrap(read_train_config(args.config)) if args.config is not None else None
    base = config if config is not None else TrainConfig(n_hidden=n_hidden, restarts=restarts)
    changes: dict[str, Any] = {}
    if args.hidden is not None:
        changes["n_hidden"] = args.hidden
    if args.restarts is not None:
        changes["restarts"] = args.restarts
    if args.seed is not None:
        changes["seed"] = args.seed
    try:
        return dataclasses.replace(base, **changes)
    except ConfigError as error:
        raise InvalidInputError(error.message) from None


def _predictor(args: argparse.Namespace, constellations: Sequence[Any]) -> Predictor:
    if args.method == "nn":
        if args.model is None:
            raise InvalidInputError("--method nn requires --model")
        return NetworkPredictor(_load_model(args.model))
    if args.method == "jensen":
        return JensenPredictor(constellations)
    if args.method == "oracle":
        draws = args.draws or _scale(args).n_noise_draws
        return OraclePredictor(constellations, draws, _seed(args))
    return ConstantPredictor(constellations)


def cmd_gen_dataset(args: argparse.Namespace) -> None:
    scale = _scale(args)
    n_samples = args.n or (scale.n_samples if args.nt == 2 else scale.multi_samples[args.nt])
    dataset = gen_dataset(
        nt=args.nt,
        n_samples=n_samples,
        n_noise_draws=args.draws or scale.n_noise_draws,
        snr_range_db=_pair(args.snr_range or scale.snr_range_db, "--snr-range"),
        constellations=args.constellations or list(scale.constellations),
        split_fractions=_triple(args.split or scale.split_fractions, "--split"),
        seed=_seed(args),
        out_path=args.out,
        progress=False if args.quiet else None,
    )
    counts = {split: len(dataset.subset(split)) for split in ("train", "val", "test")}
    _summary(
        f"Wrote {len(dataset)} rows to {args.out} "
        f"(train {counts['train']}, val {counts['val']}, test {counts['test']})"
    )


def cmd_train(args: argparse.Namespace) -> None:
    scale = _scale(args)
    dataset = _load_dataset(args.dataset)
    nt = dataset.header.nt
    option = parse_option(args.option) if args.option else option_for_antennas(nt)
    q = args.q if option is FeatureOption.QUANT8 else None
    default_hidden = scale.hidden_sizes[0] if nt == 2 else scale.multi_hidden
    config = _train_config(args, default_hidden, scale.restarts)

    params, report = train(dataset, option, config, q)
    save_model(params, args.out)
    if args.report is not None:
        write_table(report.records(), args.report)
    test = "" if report.final_test_mse is None else f", test MSE {report.final_test_mse:.3e}"
    _summary(
        f"Saved option {option} network with {params.n_hidden} hidden neurons to {args.out}: "
        f"restart {report.restart}, epoch {report.best_epoch}, "
        f"validation MSE {report.val_mse[report.best_epoch]:.3e}{test}"
    )


def cmd_eval(args: argparse.Namespace) -> None:
    dataset = _load_dataset(args.dataset)
    if args.split != "all":
        dataset = dataset.subset(args.split)
    predictor = _predictor(args, dataset.constellations)
    report = evaluate(predictor, dataset)
    _emit(report.records(), args.out)
    if args.scatter is not None:
        write_table(scatter_records(predictor, dataset), args.scatter)
    _summary(
        f"{report.method} on {report.n_samples} {args.split} rows: "
        f"global MSE {report.global_mse:.3e}, noise floor {report.noise_floor:.1e}"
    )


def cmd_predict(args: argparse.Namespace) -> None:
    constellations = args.constellations or list(_scale(args).constellations)
    predictor = _predictor(args, constellations)
    nt = predictor.params.nt if isinstance(predictor, NetworkPredictor) else args.nt
    H = _channel(args, nt)
    gamma = 10.0 ** (args.gamma_db / 10.0)
    values = predictor.predict(np.array([gamma]), H[None, :, :])[0]
    records = [
        {"constellation": str(kind), "mi": float(value)}
        for kind, value in zip(predictor.constellations, values)
    ]
    _emit(records, args.out)
    _summary(f"{predictor.name} at {args.gamma_db:g} dB")


def cmd_ergodic(args: argparse.Namespace) -> None:
    scale = _scale(args)
    constellations = args.constellations or list(scale.constellations)
    predictors: list[Predictor] = [JensenPredictor(constellations)]
    if args.model is not None:
        predictors.append(NetworkPredictor(_load_model(args.model)))
    records = ergodic_curve(
        args.grid or list(scale.ergodic_grid_db),
        args.channels or scale.ergodic_channels,
        args.draws or scale.ergodic_draws,
        predictors,
        _seed(args),
        nt=args.nt,
        constellations=constellations,
        capacity=args.capacity,
        quiet=_progress_disabled(args),
    )
    count = _emit(records, args.out)
    _summary(f"Wrote {count} ergodic records")


def cmd_angle_sweep(args: argparse.Namespace) -> None:
    scale = _scale(args)
    theta, phi = default_angle_grids(args.points or scale.sweep_points)
    records = angle_sweep(
        args.gamma if args.gamma is not None else scale.sweep_gamma,
        theta,
        phi,
        args.constellation,
        args.draws or scale.sweep_draws,
        _seed(args),
        quiet=_progress_disabled(args),
    )
    count = _emit(records, args.out)
    _summary(f"Wrote {count} angle-sweep points")


def cmd_ablation(args: argparse.Namespace) -> None:
    scale = _scale(args)
    dataset = _load_dataset(args.dataset)
    config = _train_config(args, scale.hidden_sizes[0], scale.restarts)
    cells = feature_ablation(
        dataset,
        args.options or list(ABLATION_OPTIONS),
        args.hidden_list or list(scale.hidden_sizes),
        config.restarts,
        config=config,
    )
    _emit((cell.record() for cell in cells), args.out)
    best = min(cells, key=lambda cell: cell.test.global_mse)
    _summary(
        f"Trained {len(cells)} networks; best is option {best.option} with "
        f"N={best.n_hidden}, test MSE {best.test.global_mse:.3e}"
    )


def cmd_bench(args: argparse.Namespace) -> None:
    scale = _scale(args)
    methods: list[Predictor] = [JensenPredictor(list(scale.constellations))]
    nt = 2
    if args.model is not None:
        params = _load_model(args.model)
        methods = [JensenPredictor(params.constellations), NetworkPredictor(params)]
        nt = params.nt
    records = complexity_report(
        methods, args.evals or scale.complexity_evals, nt=nt, seed=_seed(args)
    )
    _emit(records, args.out)
    times = ", ".join(f"{record['method']} {record['wall_time']:.3f} s" for record in records)
    _summary(f"Timed {records[0]['n_evals']} evaluations: {times}")


def cmd_multi(args: argparse.Namespace) -> None:
    scale = _scale(args)
    dataset = _load_dataset(args.dataset)
    config = _train_config(args, scale.multi_hidden, scale.restarts)
    result = multi_antenna_experiment(dataset, args.q, config=config)
    _emit(result.test.records(), args.out)
    _summary(
        f"Option {result.option} with {result.n_features} features on "
        f"{dataset.header.nt}×{dataset.header.nt}: test MSE {result.test.global_mse:.3e}"
    )


def cmd_features(args: argparse.Namespace) -> None:
    dataset = _load_dataset(args.dataset)
    option = args.option or str(option_for_antennas(dataset.header.nt))
    count = _emit(feature_histograms(dataset, option, args.bins, args.q), args.out)
    _summary(f"Wrote {count} histogram bins of option {option}")


def cmd_cloud(args: argparse.Namespace) -> None:
    H = _channel(args, args.nt)
    gamma = 10.0 ** (args.gamma_db / 10.0)
    records = received_cloud(H, gamma, args.constellation, args.n, _seed(args))
    count = _emit(records, args.out)
    _summary(f"Wrote {count} received samples of {make_constellation(args.constellation)}")


def _add_channel_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--h",
        type=float,
        nargs="+",
        metavar="REAL",
        help="channel as 2·Nt·Nr reals, real and imaginary parts interleaved row-major",
    )
    parser.add_argument("--h-file", type=Path, help="file holding the channel reals")
    parser.add_argument("--gamma-db", type=float, required=True, help="SNR in dB")


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="training configuration file")
    parser.add_argument("--hidden", type=int, help="hidden neurons (default: run scale)")
    parser.add_argument("--restarts", type=int, help="training restarts (default: run scale)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging"
    )
    common.add_argument("--quiet", action="store_true", help="hide progress bars")
    common.add_argument(
        "--threads", type=int, help="worker threads for batch jobs; results do not depend on it"
    )
    common.add_argument(
        "--full-scale", action="store_true", help="default every size to the full protocol"
    )
    common.add_argument("--seed", type=int, help="base seed of every random stream (default 0)")
    common.add_argument("--out", type=Path, help="output file (default: standard output)")

    parser = argparse.ArgumentParser(
        prog="smmi", description="Mutual information of spatial modulation channels"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    def command(
        name: str, function: Callable[[argparse.Namespace], None], summary: str
    ) -> argparse.ArgumentParser:
        subparser = commands.add_parser(
            name, parents=[common], help=summary, description=summary
        )
        subparser.set_defaults(function=function)
        return subparser

    sub = command("gen-dataset", cmd_gen_dataset, "generate a labeled dataset file")
    sub.add_argument("--nt", type=int, choices=[2, 4, 8], default=2, help="antennas per side")
    sub.add_argument("--n", type=int, help="channel realizations (default: run scale)")
    sub.add_argument("--draws", type=int, help="noise realizations per target")
    sub.add_argument("--snr-range", type=_csv_floats, metavar="LO,HI", help="SNR interval in dB")
    sub.add_argument("--constellations", type=_csv_list, help="comma-separated alphabets")
    sub.add_argument("--split", type=_csv_floats, metavar="TRAIN,VAL,TEST", help="split shares")

    sub = command("train", cmd_train, "train a network on a dataset")
    sub.add_argument("--dataset", type=Path, required=True)
    sub.add_argument("--option", help="feature recipe (default: v, multi4 or quant8 by Nt)")
    sub.add_argument("--q", type=int, default=DEFAULT_QUANTILES, help="quantiles for quant8")
    sub.add_argument("--report", type=Path, help="write the per-epoch MSE history here")
    _add_train_flags(sub)

    sub = command("eval", cmd_eval, "evaluate a method on a dataset split")
    sub.add_argument("--dataset", type=Path, required=True)
    sub.add_argument("--method", choices=["jensen", "nn", "oracle", "constant"], default="nn")
    sub.add_argument("--model", type=Path, help="model file for --method nn")
    sub.add_argument("--split", choices=["train", "val", "test", "all"], default="test")
    sub.add_argument("--draws", type=int, help="noise realizations for --method oracle")
    sub.add_argument("--scatter", type=Path, help="write true against predicted values here")

    sub = command("predict", cmd_predict, "MI of one channel")
    sub.add_argument("--method", choices=["jensen", "nn", "oracle"], default="nn")
    sub.add_argument("--model", type=Path, help="model file for --method nn")
    sub.add_argument("--nt", type=int, choices=[2, 4, 8], default=2, help="antennas without model")
    sub.add_argument("--constellations", type=_csv_list, help="alphabets without model")
    sub.add_argument("--draws", type=int, help="noise realizations for --method oracle")
    _add_channel_flags(sub)

    sub = command("ergodic", cmd_ergodic, "MI averaged over Rayleigh fading against SNR")
    sub.add_argument("--model", type=Path, help="also average this network")
    sub.add_argument("--nt", type=int, choices=[2, 4, 8], default=2)
    sub.add_argument("--grid", type=_csv_floats, help="SNR points in dB")
    sub.add_argument("--channels", type=int, help="channel realizations per point")
    sub.add_argument("--draws", type=int, help="noise realizations per oracle value")
    sub.add_argument("--constellations", type=_csv_list)
    sub.add_argument("--capacity", action="store_true", help="add the Gaussian-input capacity")

    sub = command("angle-sweep", cmd_angle_sweep, "MI over the Hermitian and pseudo-angle")
    sub.add_argument("--gamma", type=float, help="linear SNR (default 2)")
    sub.add_argument("--points", type=int, help="grid points per angle")
    sub.add_argument("--draws", type=int, help="noise realizations per point")
    sub.add_argument("--constellation", default="QPSK")

    sub = command("ablation", cmd_ablation, "test MSE of every feature recipe")
    sub.add_argument("--dataset", type=Path, required=True)
    sub.add_argument("--options", type=_csv_list, help="comma-separated feature recipes")
    sub.add_argument("--hidden-list", type=_csv_ints, help="comma-separated hidden sizes")
    _add_train_flags(sub)

    sub = command("bench", cmd_bench, "operation counts and timing of Jensen and a network")
    sub.add_argument("--model", type=Path, help="network to compare with Jensen")
    sub.add_argument("--evals", type=int, help="evaluations timed per method")

    sub = command("multi", cmd_multi, "train and test on a 4×4 or 8×8 dataset")
    sub.add_argument("--dataset", type=Path, required=True)
    sub.add_argument("--q", type=int, default=DEFAULT_QUANTILES, help="quantiles for 8 antennas")
    _add_train_flags(sub)

    sub = command("features", cmd_features, "histograms of the features of a dataset")
    sub.add_argument("--dataset", type=Path, required=True)
    sub.add_argument("--option", help="feature recipe (default by Nt)")
    sub.add_argument("--bins", type=int, default=50)
    sub.add_argument("--q", type=int, help="quantiles for quant8")

    sub = command("cloud", cmd_cloud, "noisy received supersymbols of one channel")
    sub.add_argument("--nt", type=int, choices=[2, 4, 8], default=2)
    sub.add_argument("--constellation", default="QPSK")
    sub.add_argument("--n", type=int, default=100, help="samples per antenna and symbol")
    _add_channel_flags(sub)

    return parser


def _configure_logging(verbosity: int) -> None:
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbosity, 2)]
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit status.

    Status 2 is a usage error or invalid input, 3 a problem with an input or
    output file and 4 a numerical failure.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return stop.code if isinstance(stop.code, int) else EXIT_USAGE

    usage = None
    if args.out is None and args.command in ("gen-dataset", "train"):
        usage = f"{args.command} requires --out"
    elif args.threads is not None and args.threads < 1:
        usage = "--threads must be positive"
    if usage is not None:
        print(f"smmi {args.command}: error: {usage}", file=sys.stderr)
        return EXIT_USAGE

    _configure_logging(args.verbose)
    previous_workers = options.max_workers
    options.max_workers = args.threads
    try:
        args.function(args)
    except InvalidInputError as error:
        print(f"smmi {args.command}: error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, ModelFormatError, ConfigError) as error:
        print(f"smmi {args.command}: error: {error}", file=sys.stderr)
        return EXIT_DATA
    except OSError as error:
        print(f"smmi {args.command}: error: {error}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as error:
        print(f"smmi {args.command}: numerical failure: {error}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SmmiError as error:
        print(f"smmi {args.command}: error: {error}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        options.max_workers = previous_workers
    return EXIT_OK


def main() -> int:
    return run(sys.argv[1:])
