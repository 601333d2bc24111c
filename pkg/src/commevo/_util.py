from __future__ import annotations

import os
import re
from contextlib import contextmanager
from typing import Hashable, Iterable, Iterator, TextIO, Union

TextSource = Union[str, os.PathLike, TextIO, Iterable[str]]

_DIGITS = re.compile(r"(\d+)")


def natural_key(value: Hashable) -> tuple:
    """Sort key that orders ``G2`` before ``G10`` and never compares str to int."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (0, value, "")
    parts = _DIGITS.split(str(value))
    return (1, 0, tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts))


@contextmanager
def open_lines(source: TextSource) -> Iterator[Iterable[str]]:
    """Yield an iterable of text lines from a path or an already open source."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            yield fh
    else:
        yield source


def iter_records(lines: Iterable[str]) -> Iterator[tuple[int, list[str]]]:
    """Split non-blank, non-comment lines into whitespace fields with 1-based line numbers."""
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def write_text(target: Union[str, os.PathLike, TextIO, None], text: str) -> str:
    if target is None:
        return text
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        target.write(text)
    return text


def format_float(x: float) -> str:
    # shortest repr that round-trips; ints print without trailing .0
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


__all__ = ["TextSource", "natural_key", "open_lines", "iter_records", "write_text", "format_float"]
