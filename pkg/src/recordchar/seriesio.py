"""Plain-text series files: one observation per line, blank line between series.

Files ending in ``.gz`` are read and written compressed.
"""

from __future__ import annotations

import gzip
import os
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

__all__ = ["SeriesFormatError", "read_series", "write_series", "parse_series", "format_series"]


class SeriesFormatError(DomainError):
    def __init__(self, message: str, lineno: int | None = None, path: str | None = None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}: "
        super().__init__(where + message)
        self.lineno = lineno
        self.path = path


def _open(path: str | os.PathLike, mode: str):
    if str(path).endswith(".gz"):
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def parse_series(lines: Iterable[str], path: str | None = None) -> list[np.ndarray]:
    series: list[np.ndarray] = []
    current: list[float] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            if current:
                series.append(np.array(current))
                current = []
            continue
        try:
            value = float(text)
        except ValueError:
            raise SeriesFormatError(f"not a decimal number: {text!r}", lineno, path) from None
        if not np.isfinite(value):
            raise SeriesFormatError(f"non-finite observation {text!r}", lineno, path)
        current.append(value)
    if current:
        series.append(np.array(current))
    return series


def read_series(path: str | os.PathLike) -> list[np.ndarray]:
    """Read every series in ``path``; raises SeriesFormatError with the line number."""
    with _open(path, "r") as fh:
        return parse_series(fh, str(path))


def format_series(series: Sequence[Sequence[float]]) -> str:
    blocks = ["\n".join(repr(float(x)) for x in s) for s in series]
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def write_series(path: str | os.PathLike, series: Sequence[Sequence[float]]) -> None:
    with _open(path, "w") as fh:
        fh.write(format_series(series))
