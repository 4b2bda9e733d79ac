from __future__ import annotations

__all__ = [
    "DatasetRowParsers",
    "RealsParsers",
    "SettingParsers",
    "parse_reals",
]

from parsita import ParserContext, Result, lit, opt, reg, rep, rep1sep

from ._json import JsonParsers

# Python's float repr, including the non-finite spellings
FLOAT_PATTERN = r"[-+]?(inf|nan|([0-9]+\.?[0-9]*|\.[0-9]+)([eE][-+]?[0-9]+)?)"


class DatasetRowParsers(ParserContext):
    header = lit("#") >> JsonParsers.obj

    count = reg(r"[0-9]+") > int
    number = reg(FLOAT_PATTERN) > float
    split = lit("train", "val", "test")

    row = count << "," & count << "," & split << "," & rep1sep(number, ",")


class SettingParsers(ParserContext, whitespace=r"[ \t]*"):
    comment = reg(r"#.*")
    key = reg(r"[A-Za-z_][A-Za-z0-9_]*")

    integer = reg(r"[-+]?[0-9]+") > int
    real = reg(FLOAT_PATTERN) > float
    number = integer | real

    setting = key << "=" & number
    line = opt(setting) << opt(comment)


class RealsParsers(ParserContext, whitespace=r"(\s|#[^\n]*)*"):
    number = reg(FLOAT_PATTERN) > float
    reals = rep(number << opt(","))


def parse_reals(text: str) -> Result[list[float]]:
    """Parse real numbers separated by commas or whitespace, with ``#`` comments."""
    return RealsParsers.reals.parse(text)
