# Use `as` to mark names as re-exports from submodules for mypy.
from ._channel_file import (
    channel_from_reals as channel_from_reals,
    read_channel_file as read_channel_file,
)
from ._json import JsonParsers as JsonParsers, parse_json as parse_json
from ._result import Failure as Failure, Result as Result, Success as Success
from ._text import (
    DatasetRowParsers as DatasetRowParsers,
    RealsParsers as RealsParsers,
    SettingParsers as SettingParsers,
    parse_reals as parse_reals,
)
