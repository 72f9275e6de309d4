"""Tuple documents: JSON with integer or "p/q" string entries.

    {"size": 3, "matrices": [
      [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
      [[0, 0, 0], [0, 0, 0], [0, "1/2", 0]]
    ]}

The canonical serialization puts one matrix per line, integers bare and
non-integers as lowest-terms "p/q" strings.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .exact import SIZES, Matrix, NilTuple, as_scalar


def format_scalar(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_entry(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"{where}: entries must be integers or 'p/q' strings, got {x!r}")
    try:
        return as_scalar(x)
    except InputError:
        raise InputError(f"{where}: not a rational entry: {x!r}") from None


def tuple_to_document(t: NilTuple) -> dict:
    return {
        "size": t.size,
        "matrices": [[[format_scalar(x) for x in r] for r in m.rows] for m in t.mats],
    }


def tuple_from_document(doc) -> NilTuple:
    if not isinstance(doc, dict):
        raise InputError("tuple document must be a JSON object with 'size' and 'matrices'")
    extra = set(doc) - {"size", "matrices"}
    if extra:
        raise InputError(f"unknown keys in tuple document: {sorted(extra)}")
    size = doc.get("size")
    if isinstance(size, bool) or size not in SIZES:
        raise InputError(f"'size' must be 2 or 3, got {size!r}")
    mats = doc.get("matrices")
    if not isinstance(mats, list) or not mats:
        raise InputError("'matrices' must be a nonempty list of grids")
    out = []
    for k, grid in enumerate(mats, start=1):
        if (
            not isinstance(grid, list)
            or len(grid) != size
            or any(not isinstance(r, list) or len(r) != size for r in grid)
        ):
            raise InputError(f"matrix {k}: expected a {size}x{size} grid")
        out.append(
            Matrix([[_parse_entry(x, f"matrix {k} entry ({i + 1},{j + 1})") for j, x in enumerate(r)]
                    for i, r in enumerate(grid)])
        )
    return NilTuple(tuple(out))


def dumps_tuple(t: NilTuple) -> str:
    doc = tuple_to_document(t)
    lines = [json.dumps(m) for m in doc["matrices"]]
    return '{"size": %d, "matrices": [\n  %s\n]}\n' % (doc["size"], ",\n  ".join(lines))


def loads_tuple(text: str) -> NilTuple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from None
    return tuple_from_document(doc)


def load_tuple(path) -> NilTuple:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return loads_tuple(text)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def write_tuple(path, t: NilTuple):
    Path(path).write_text(dumps_tuple(t))
