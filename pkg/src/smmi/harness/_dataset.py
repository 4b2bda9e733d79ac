from __future__ import annotations

__all__ = [
    "DATASET_FORMAT",
    "DATASET_VERSION",
    "DatasetHeader",
    "LabeledDataset",
    "format_dataset",
    "gen_dataset",
    "generate_row",
    "read_dataset",
    "split_sizes",
    "write_dataset",
]

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, NamedTuple, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from ..core import (
    SUPPORTED_ANTENNAS,
    ChannelRealization,
    ConstellationKind,
    make_constellation,
    sample_rayleigh_channel,
    sample_snr_db,
)
from ..exceptions import DatasetError, InvalidInputError
from ..formats import DatasetRowParsers, Failure, Result, Success
from ..oracle import mi_finite
from ..util import derive_seed, ordered_map, rng

logger = logging.getLogger(__name__)

DATASET_FORMAT = "smmi-dataset"
DATASET_VERSION = 1
GENERATOR = "smmi-mc/1"
SPLITS = ("train", "val", "test")

# Targets may leave the feasible range by this much Monte Carlo error
TARGET_TOLERANCE = 0.05

# Rows handed to the worker pool between progress updates and flushes
_ROWS_PER_BATCH = 64


@dataclass(frozen=True)
class DatasetHeader:
    """Generation parameters stored in the first line of a dataset file."""

    nt: int
    constellations: tuple[ConstellationKind, ...]
    n_noise_draws: int
    snr_range_db: tuple[float, float]
    split_fractions: tuple[float, float, float]
    seed: int
    n_samples: int
    generator: str = GENERATOR

    @property
    def nr(self) -> int:
        return self.nt

    @property
    def n_reals(self) -> int:
        """Numbers per row after the split tag."""
        return 1 + 2 * self.nr * self.nt + 2 * len(self.constellations)

    def to_json(self) -> str:
        document = {
            "format": DATASET_FORMAT,
            "version": DATASET_VERSION,
            "nt": self.nt,
            "nr": self.nr,
            "constellations": [str(kind) for kind in self.constellations],
            "n_noise_draws": self.n_noise_draws,
            "snr_range_db": list(self.snr_range_db),
            "split_fractions": list(self.split_fractions),
            "seed": self.seed,
            "n_samples": self.n_samples,
            "generator": self.generator,
        }
        return json.dumps(document)


def split_sizes(n_samples: int, fractions: Sequence[float]) -> tuple[int, int, int]:
    """Row counts of the training, validation and test splits.

    Training and validation sizes are rounded; the test split takes the rest.
    """
    if len(fractions) != 3 or any(fraction < 0.0 for fraction in fractions):
        raise InvalidInputError(f"Split fractions must be three nonnegative numbers: {fractions}")
    if not math.isclose(sum(fractions), 1.0, abs_tol=1e-9):
        raise InvalidInputError(f"Split fractions must sum to 1, got {sum(fractions)!r}")
    n_train = round(fractions[0] * n_samples)
    n_val = min(round(fractions[1] * n_samples), n_samples - n_train)
    return n_train, n_val, n_samples - n_train - n_val


def _split_tags(n_samples: int, fractions: Sequence[float], seed: int) -> list[str]:
    n_train, n_val, _ = split_sizes(n_samples, fractions)
    order = rng(derive_seed(seed)).permutation(n_samples)
    tags = ["test"] * n_samples
    for position, row_id in enumerate(order):
        if position < n_train:
            tags[row_id] = "train"
        elif position < n_train + n_val:
            tags[row_id] = "val"
    return tags


class Row(NamedTuple):
    row_id: int
    seed: int
    split: str
    gamma_db: float
    H: np.ndarray
    targets: np.ndarray
    std_errors: np.ndarray


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Channels with oracle MI targets and split tags, in row-id order.

    Attributes:
        header: Generation parameters
        row_ids: Row identifiers, shape ``(L,)``
        seeds: Per-row seeds, shape ``(L,)``
        splits: Split tag of each row, shape ``(L,)``
        gamma_db: SNRs in dB, shape ``(L,)``
        channels: Channel matrices, shape ``(L, Nr, Nt)``
        targets: Raw oracle estimates per constellation, shape ``(L, K)``
        std_errors: Their standard errors, shape ``(L, K)``
    """

    header: DatasetHeader
    row_ids: np.ndarray = field(repr=False)
    seeds: np.ndarray = field(repr=False)
    splits: np.ndarray = field(repr=False)
    gamma_db: np.ndarray = field(repr=False)
    channels: np.ndarray = field(repr=False)
    targets: np.ndarray = field(repr=False)
    std_errors: np.ndarray = field(repr=False)

    @classmethod
    def from_rows(cls, header: DatasetHeader, rows: Sequence[Row]) -> LabeledDataset:
        n_outputs = len(header.constellations)
        return cls(
            header,
            np.array([row.row_id for row in rows], dtype=np.int64),
            np.array([row.seed for row in rows], dtype=np.uint64),
            np.array([row.split for row in rows], dtype=str),
            np.array([row.gamma_db for row in rows], dtype=float),
            np.array([row.H for row in rows], dtype=complex).reshape(-1, header.nr, header.nt),
            np.array([row.targets for row in rows], dtype=float).reshape(-1, n_outputs),
            np.array([row.std_errors for row in rows], dtype=float).reshape(-1, n_outputs),
        )

    def __len__(self) -> int:
        return len(self.row_ids)

    @property
    def gammas(self) -> np.ndarray:
        return 10.0 ** (self.gamma_db / 10.0)

    @property
    def constellations(self) -> list[ConstellationKind]:
        return list(self.header.constellations)

    def subset(self, split: str) -> LabeledDataset:
        if split not in SPLITS:
            raise InvalidInputError(f"Unknown split {split!r}; expected one of {SPLITS}")
        return self.select(self.splits == split)

    def select(self, mask: np.ndarray) -> LabeledDataset:
        return LabeledDataset(
            self.header,
            self.row_ids[mask],
            self.seeds[mask],
            self.splits[mask],
            self.gamma_db[mask],
            self.channels[mask],
            self.targets[mask],
            self.std_errors[mask],
        )

    def rows(self) -> Iterator[Row]:
        for index in range(len(self)):
            yield Row(
                int(self.row_ids[index]),
                int(self.seeds[index]),
                str(self.splits[index]),
                float(self.gamma_db[index]),
                self.channels[index],
                self.targets[index],
                self.std_errors[index],
            )


def _format_row(row: Row) -> str:
    reals = np.stack([row.H.real, row.H.imag], axis=-1).ravel()
    numbers = [row.gamma_db, *reals.tolist(), *row.targets.tolist(), *row.std_errors.tolist()]
    return ",".join([str(row.row_id), str(row.seed), row.split, *map(repr, map(float, numbers))])


def format_dataset(dataset: LabeledDataset) -> str:
    lines = [f"# {dataset.header.to_json()}"]
    lines += [_format_row(row) for row in dataset.rows()]
    return "\n".join(lines) + "\n"


def write_dataset(dataset: LabeledDataset, path: Union[str, Path]) -> None:
    """Write a dataset file; floats use their shortest round-trip representation."""
    Path(path).write_text(format_dataset(dataset), encoding="utf-8")


def _header_from_document(document: Any) -> DatasetHeader:
    if not isinstance(document, dict):
        raise DatasetError("Header must be a JSON object")
    if document.get("format") != DATASET_FORMAT:
        raise DatasetError(f"Not a dataset file; expected format {DATASET_FORMAT!r}")
    if document.get("version") != DATASET_VERSION:
        raise DatasetError(
            f"Unsupported dataset version {document.get('version')!r}; "
            f"expected {DATASET_VERSION}"
        )
    try:
        nt = int(document["nt"])
        if int(document["nr"]) != nt:
            raise DatasetError(f"Only square channels are supported, got nr={document['nr']}")
        low, high = (float(value) for value in document["snr_range_db"])
        fractions = tuple(float(value) for value in document["split_fractions"])
        if len(fractions) != 3:
            raise DatasetError("split_fractions must have three entries")
        header = DatasetHeader(
            nt=nt,
            constellations=tuple(
                make_constellation(name).kind for name in document["constellations"]
            ),
            n_noise_draws=int(document["n_noise_draws"]),
            snr_range_db=(low, high),
            split_fractions=(fractions[0], fractions[1], fractions[2]),
            seed=int(document["seed"]),
            n_samples=int(document["n_samples"]),
            generator=str(document["generator"]),
        )
        split_sizes(header.n_samples, header.split_fractions)
    except KeyError as error:
        raise DatasetError(f"Header is missing field {error.args[0]!r}") from None
    except (TypeError, ValueError, AttributeError) as error:
        raise DatasetError(f"Malformed header field: {error}") from None
    except InvalidInputError as error:
        raise DatasetError(error.message) from None
    return header


def _row_from_fields(header: DatasetHeader, fields: list[Any], number: int) -> Row:
    row_id, seed, split, reals = fields
    if len(reals) != header.n_reals:
        raise DatasetError(f"Line {number}: expected {header.n_reals} numbers, got {len(reals)}")
    if seed != derive_seed(header.seed, row_id):
        raise DatasetError(f"Line {number}: seed does not derive from the header seed")

    nr, nt = header.nr, header.nt
    k = len(header.constellations)
    values = np.array(reals)
    entries = values[1 : 1 + 2 * nr * nt].reshape(nr, nt, 2)
    targets = values[1 + 2 * nr * nt : 1 + 2 * nr * nt + k]
    std_errors = values[1 + 2 * nr * nt + k :]

    limits = np.array([make_constellation(kind).max_bits(nt) for kind in header.constellations])
    feasible = (targets >= -TARGET_TOLERANCE) & (targets <= limits + TARGET_TOLERANCE)
    if not np.all(feasible):
        raise DatasetError(f"Line {number}: targets outside the feasible range")

    H = entries[..., 0] + 1j * entries[..., 1]
    return Row(row_id, seed, split, float(values[0]), H, targets, std_errors)


class _Parsed(NamedTuple):
    header: DatasetHeader
    rows: list[Row]
    complete_length: int


def _parse_dataset(text: str, *, partial: bool) -> _Parsed:
    """Parse dataset text.

    With ``partial``, a final line without its newline is dropped and fewer
    than ``n_samples`` rows are accepted; ``complete_length`` is the number of
    characters up to the last complete line.
    """
    lines = text.split("\n")
    trailing = lines.pop()
    if trailing and not partial:
        lines.append(trailing)
    complete_length = len(text) - len(trailing)
    if not lines:
        raise DatasetError("File is empty")

    parsed_header = DatasetRowParsers.header.parse(lines[0])
    if isinstance(parsed_header, Failure):
        raise DatasetError(f"Line 1: malformed header\n{parsed_header.failure()}")
    header = _header_from_document(parsed_header.unwrap())

    rows = []
    for number, line in enumerate(lines[1:], start=2):
        parsed = DatasetRowParsers.row.parse(line)
        if isinstance(parsed, Failure):
            raise DatasetError(f"Line {number}: malformed row\n{parsed.failure()}")
        row = _row_from_fields(header, parsed.unwrap(), number)
        if row.row_id != len(rows):
            raise DatasetError(f"Line {number}: expected row id {len(rows)}, got {row.row_id}")
        rows.append(row)

    if len(rows) > header.n_samples or (not partial and len(rows) != header.n_samples):
        raise DatasetError(f"Header declares {header.n_samples} rows, file has {len(rows)}")

    tags = _split_tags(header.n_samples, header.split_fractions, header.seed)
    for row in rows:
        if row.split != tags[row.row_id]:
            raise DatasetError(
                f"Row {row.row_id} is tagged {row.split!r} but the split fractions put it "
                f"in {tags[row.row_id]!r}"
            )
    return _Parsed(header, rows, complete_length)


def read_dataset(path: Union[str, Path]) -> Result[LabeledDataset]:
    """Read a complete dataset file.

    Returns:
        ``Success`` with the dataset or ``Failure`` with a ``DatasetError``
        naming the file.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        return Failure(DatasetError(f"Cannot read dataset: {error.strerror}", path))
    try:
        parsed = _parse_dataset(text, partial=False)
    except DatasetError as error:
        return Failure(DatasetError(error.message, path))
    return Success(LabeledDataset.from_rows(parsed.header, parsed.rows))


def generate_row(header: DatasetHeader, row_id: int, split: str) -> Row:
    """Draw one channel and SNR and label it with oracle estimates.

    The row seed is ``derive_seed(header.seed, row_id)``; the channel, the
    SNR and the noise of constellation ``j`` use the sub-streams ``(0)``,
    ``(1)`` and ``(2, j)`` of it.
    """
    seed = derive_seed(header.seed, row_id)
    H = sample_rayleigh_channel(derive_seed(seed, 0), header.nt)
    gamma_db = sample_snr_db(derive_seed(seed, 1), *header.snr_range_db)
    channel = ChannelRealization.from_snr_db(H, gamma_db)

    estimates = [
        mi_finite(channel, make_constellation(kind), header.n_noise_draws, derive_seed(seed, 2, j))
        for j, kind in enumerate(header.constellations)
    ]
    return Row(
        row_id,
        seed,
        split,
        gamma_db,
        H,
        np.array([estimate.value for estimate in estimates]),
        np.array([estimate.std_error for estimate in estimates]),
    )


def gen_dataset(
    nt: int,
    n_samples: int,
    n_noise_draws: int,
    snr_range_db: tuple[float, float],
    constellations: Sequence[Union[str, ConstellationKind]],
    split_fractions: tuple[float, float, float],
    seed: int,
    out_path: Union[str, Path],
    *,
    progress: Optional[bool] = None,
) -> LabeledDataset:
    """Generate a labeled dataset file, resuming a partial file with the same header.

    Rows are appended in row-id order whatever the worker count, so a given
    seed always produces the same bytes.

    Raises:
        InvalidInputError: For invalid sizes, fractions or constellations.
        DatasetError: If ``out_path`` holds a dataset with another header.
        OSError: If the file cannot be written.
    """
    if n_samples < 1 or n_noise_draws < 1 or seed < 0:
        raise InvalidInputError("Sample count and noise draws must be positive, seed nonnegative")
    if not snr_range_db[0] < snr_range_db[1]:
        raise InvalidInputError(f"SNR interval must satisfy lo < hi, got {snr_range_db}")
    split_sizes(n_samples, split_fractions)
    header = DatasetHeader(
        nt=nt,
        constellations=tuple(make_constellation(kind).kind for kind in constellations),
        n_noise_draws=n_noise_draws,
        snr_range_db=(float(snr_range_db[0]), float(snr_range_db[1])),
        split_fractions=(
            float(split_fractions[0]),
            float(split_fractions[1]),
            float(split_fractions[2]),
        ),
        seed=seed,
        n_samples=n_samples,
    )
    if nt not in SUPPORTED_ANTENNAS:
        raise InvalidInputError(f"Antenna count must be one of {SUPPORTED_ANTENNAS}, got {nt}")

    path = Path(out_path)
    rows: list[Row] = []
    if path.exists():
        text = path.read_text(encoding="utf-8")
        try:
            parsed = _parse_dataset(text, partial=True)
        except DatasetError as error:
            raise DatasetError(error.message, path) from None
        if parsed.header != header:
            raise DatasetError("Existing file was generated with other parameters", path)
        rows = parsed.rows
        if parsed.complete_length < len(text):
            logger.warning("Dropping an incomplete last line of %s", path)
            path.write_text(text[: parsed.complete_length], encoding="utf-8")
        if rows:
            logger.info("Resuming %s at row %d of %d", path, len(rows), n_samples)
    else:
        path.write_text(f"# {header.to_json()}\n", encoding="utf-8")

    tags = _split_tags(n_samples, header.split_fractions, seed)
    pending = list(range(len(rows), n_samples))

    def labeled(row_id: int) -> Row:
        return generate_row(header, row_id, tags[row_id])

    disable = None if progress is None else not progress
    with path.open("a", encoding="utf-8") as stream, tqdm(
        total=n_samples, initial=len(rows), unit="row", disable=disable
    ) as bar:
        for start in range(0, len(pending), _ROWS_PER_BATCH):
            batch = pending[start : start + _ROWS_PER_BATCH]
            for row in ordered_map(labeled, batch):
                stream.write(_format_row(row) + "\n")
                rows.append(row)
            stream.flush()
            bar.update(len(batch))

    return LabeledDataset.from_rows(header, rows)
