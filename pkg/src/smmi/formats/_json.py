from __future__ import annotations

__all__ = ["JsonParsers", "parse_json"]

from typing import Any

from parsita import ParserContext, Result, lit, reg, repsep
from parsita.util import constant

_ESCAPES = {'"': '"', "\\": "\\", "/": "/", "b": "\b", "f": "\f", "n": "\n", "r": "\r", "t": "\t"}


def _unescape(token: str) -> str:
    body = token[1:-1]
    if "\\" not in body:
        return body

    characters = []
    index = 0
    while index < len(body):
        character = body[index]
        if character != "\\":
            characters.append(character)
            index += 1
        elif body[index + 1] == "u":
            characters.append(chr(int(body[index + 2 : index + 6], 16)))
            index += 6
        else:
            characters.append(_ESCAPES[body[index + 1]])
            index += 2
    return "".join(characters)


class JsonParsers(ParserContext, whitespace=r"[ \t\n\r]*"):
    string = reg(r'"([^"\\\x00-\x1f]|\\["\\/bfnrt]|\\u[0-9a-fA-F]{4})*"') > _unescape

    integer = reg(r"-?(0|[1-9][0-9]*)") > int
    real = reg(r"-?(0|[1-9][0-9]*)(\.[0-9]+([eE][-+]?[0-9]+)?|[eE][-+]?[0-9]+)") > float
    number = real | integer

    true = lit("true") > constant(True)
    false = lit("false") > constant(False)
    null = lit("null") > constant(None)

    array = "[" >> repsep(value, ",") << "]"

    entry = string << ":" & value
    obj = "{" >> repsep(entry, ",") << "}" > dict

    value = obj | array | string | number | true | false | null


def parse_json(text: str) -> Result[Any]:
    """Parse a JSON document.

    Integers without a fraction or exponent become ``int``; every other
    number becomes the ``float`` with that shortest representation, so
    documents written by ``json.dumps`` read back bit for bit.
    """
    return JsonParsers.value.parse(text)
