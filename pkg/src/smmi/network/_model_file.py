from __future__ import annotations

__all__ = ["MODEL_FORMAT", "MODEL_VERSION", "dump_model", "load_model", "read_model", "save_model"]

import json
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from ..exceptions import InvalidInputError, ModelFormatError
from ..features import parse_option
from ..formats import Failure, Result, Success, parse_json
from ._params import NetworkParams, constellation_kinds

MODEL_FORMAT = "smmi-model"
MODEL_VERSION = 1

_ARRAYS = ["g0", "x0", "W1", "b1", "W2", "b2", "g3", "y0"]


def dump_model(params: NetworkParams) -> str:
    """Serialize parameters to the JSON model document.

    Floats are written with their shortest round-trip representation, so
    loading gives back bitwise-equal arrays.
    """
    document: dict[str, Any] = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "option": str(params.option),
        "q": params.q,
        "nt": params.nt,
        "constellations": [str(kind) for kind in params.constellations],
        "n_inputs": params.n_inputs,
        "n_hidden": params.n_hidden,
        "n_outputs": params.n_outputs,
    }
    for name in _ARRAYS:
        document[name] = getattr(params, name).tolist()
    return json.dumps(document, indent=1) + "\n"


def save_model(params: NetworkParams, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_model(params), encoding="utf-8")


def _field(document: dict[str, Any], name: str, kind: type) -> Any:
    if name not in document:
        raise ModelFormatError(f"Missing field {name!r}")
    value = document[name]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise ModelFormatError(f"Field {name!r} must be of type {kind.__name__}")
    return value


def _array(document: dict[str, Any], name: str, shape: tuple[int, ...]) -> np.ndarray:
    value = _field(document, name, list)
    try:
        array = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ModelFormatError(f"Field {name!r} must be a numeric array") from None
    if array.shape != shape:
        raise ModelFormatError(f"Field {name!r} must have shape {shape}, got {array.shape}")
    return array


def _from_document(document: Any) -> NetworkParams:
    if not isinstance(document, dict):
        raise ModelFormatError("Model document must be a JSON object")
    if document.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"Not a model file; expected format {MODEL_FORMAT!r}")
    version = _field(document, "version", int)
    if version != MODEL_VERSION:
        raise ModelFormatError(f"Unsupported model version {version}; expected {MODEL_VERSION}")

    n_inputs = _field(document, "n_inputs", int)
    n_hidden = _field(document, "n_hidden", int)
    n_outputs = _field(document, "n_outputs", int)
    q: Optional[int] = document.get("q")
    if q is not None and (not isinstance(q, int) or isinstance(q, bool)):
        raise ModelFormatError("Field 'q' must be an integer or null")

    shapes = {
        "g0": (n_inputs,),
        "x0": (n_inputs,),
        "W1": (n_hidden, n_inputs),
        "b1": (n_hidden,),
        "W2": (n_outputs, n_hidden),
        "b2": (n_outputs,),
        "g3": (n_outputs,),
        "y0": (n_outputs,),
    }
    arrays = {name: _array(document, name, shape) for name, shape in shapes.items()}
    names = _field(document, "constellations", list)
    if not all(isinstance(name, str) for name in names):
        raise ModelFormatError("Field 'constellations' must be a list of names")
    try:
        return NetworkParams(
            **arrays,
            option=parse_option(_field(document, "option", str)),
            constellations=constellation_kinds(names),
            nt=_field(document, "nt", int),
            q=q,
        )
    except InvalidInputError as error:
        raise ModelFormatError(error.message) from None


def read_model(text: str) -> Result[NetworkParams]:
    """Parse a model document without touching the file system."""
    parsed = parse_json(text)
    if isinstance(parsed, Failure):
        return Failure(ModelFormatError(f"Malformed model document\n{parsed.failure()}"))
    try:
        return Success(_from_document(parsed.unwrap()))
    except ModelFormatError as error:
        return Failure(error)


def load_model(path: Union[str, Path]) -> Result[NetworkParams]:
    """Read a model file.

    Returns:
        ``Success`` with the parameters, or ``Failure`` with a
        ``ModelFormatError`` that names the file, including when the file
        cannot be read.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        return Failure(ModelFormatError(f"Cannot read model: {error.strerror}", path))

    result = read_model(text)
    if isinstance(result, Failure):
        error = result.failure()
        assert isinstance(error, ModelFormatError)
        return Failure(ModelFormatError(error.message, path))
    return result
