"""Text-grid and JSON serialization for k-layer partial squares.

Two formats:

* **text grid**: n lines of n whitespace-separated tokens; a token is
  ``-`` for an empty cell or k base-36 digits giving the cell's entry
  tuple with 1-based symbols (1..9 then A=10, B=11, ...).  Human-facing
  and limited to n <= 35.  An all-empty grid does not determine k, so
  parsing accepts an optional explicit ``k``.
* **structured JSON**: a versioned, self-describing document with
  explicit ``n`` and ``k`` and 0-based cells.  Lossless for every square
  including the empty one; preferred for machine interchange.

Both parsers re-validate the square on load and raise :class:`ParseError`
on malformed input.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import Cell, EntryTuple, KPartialSquare, SquareError

DIGITS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"
MAX_TEXT_ORDER = 35  # one base-36 digit per 1-based symbol

JSON_FORMAT = "kpls"
JSON_VERSION = 1


class ParseError(ValueError):
    """Malformed or inconsistent serialized square."""


def _symbol_to_digit(v: int) -> str:
    return DIGITS[v + 1]


def _digit_to_symbol(ch: str, n: int) -> int:
    v = DIGITS.find(ch.upper())
    if v < 1 or v > n:
        raise ParseError(f"digit {ch!r} is not a symbol in 1..{n}")
    return v - 1


def to_text_grid(square: KPartialSquare) -> str:
    """Render as an n x n grid of tokens, one row per line."""
    if square.n > MAX_TEXT_ORDER:
        raise ParseError(
            f"text grid supports n <= {MAX_TEXT_ORDER}, got n={square.n}; use JSON"
        )
    lines = []
    for r in range(square.n):
        tokens = []
        for c in range(square.n):
            entries = square.entries_at((r, c))
            if entries is None:
                tokens.append("-")
            else:
                tokens.append("".join(_symbol_to_digit(e) for e in entries))
        lines.append(" ".join(tokens))
    return "\n".join(lines) + "\n"


def from_text_grid(text: str, k: int | None = None) -> KPartialSquare:
    """Parse a text grid.

    ``k`` may be omitted when at least one cell is filled (the token
    length determines it); an entirely empty grid needs it explicitly.
    """
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise ParseError("empty input")
    n = len(rows)
    if n > MAX_TEXT_ORDER:
        raise ParseError(f"text grid supports n <= {MAX_TEXT_ORDER}, got {n} rows")
    for r, tokens in enumerate(rows):
        if len(tokens) != n:
            raise ParseError(f"row {r + 1} has {len(tokens)} tokens, expected {n}")
    seen_k: int | None = None
    cells: dict[Cell, EntryTuple] = {}
    for r, tokens in enumerate(rows):
        for c, token in enumerate(tokens):
            if token == "-":
                continue
            if seen_k is None:
                seen_k = len(token)
            elif len(token) != seen_k:
                raise ParseError(
                    f"token {token!r} at row {r + 1} col {c + 1} has {len(token)} digits, "
                    f"expected {seen_k}"
                )
            cells[(r, c)] = tuple(_digit_to_symbol(ch, n) for ch in token)
    if seen_k is None:
        if k is None:
            raise ParseError("grid has no filled cells; pass k explicitly")
        seen_k = k
    elif k is not None and k != seen_k:
        raise ParseError(f"grid tokens have {seen_k} digits but k={k} was requested")
    try:
        return KPartialSquare.from_cells(n, seen_k, cells)
    except SquareError as exc:
        raise ParseError(f"grid is not a valid square: {exc}") from exc


def to_json(square: KPartialSquare) -> str:
    doc: dict[str, Any] = {
        "format": JSON_FORMAT,
        "version": JSON_VERSION,
        "n": square.n,
        "k": square.k,
        "cells": [
            {"row": r, "col": c, "entries": list(square.entries_at((r, c)))}
            for (r, c) in sorted(square.cells)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def from_json(text: str) -> KPartialSquare:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != JSON_FORMAT:
        raise ParseError(f"not a {JSON_FORMAT} document")
    if doc.get("version") != JSON_VERSION:
        raise ParseError(f"unsupported version {doc.get('version')!r}")
    try:
        n = int(doc["n"])
        k = int(doc["k"])
        raw_cells = doc["cells"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from exc
    if not isinstance(raw_cells, list):
        raise ParseError("'cells' must be a list")
    cells: dict[Cell, EntryTuple] = {}
    for item in raw_cells:
        try:
            cell = (int(item["row"]), int(item["col"]))
            entries = tuple(int(e) for e in item["entries"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed cell record {item!r}: {exc}") from exc
        if cell in cells:
            raise ParseError(f"duplicate cell {cell}")
        cells[cell] = entries
    try:
        return KPartialSquare.from_cells(n, k, cells)
    except SquareError as exc:
        raise ParseError(f"document is not a valid square: {exc}") from exc


def loads(text: str, k: int | None = None) -> KPartialSquare:
    """Parse either format, sniffing JSON by a leading brace."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return from_json(text)
    return from_text_grid(text, k=k)


def save_square(square: KPartialSquare, path: str | Path, fmt: str = "auto") -> None:
    """Write to ``path``; ``fmt`` is ``json``, ``text`` or ``auto`` (by suffix)."""
    path = Path(path)
    if fmt == "auto":
        fmt = "json" if path.suffix.lower() == ".json" else "text"
    if fmt == "json":
        path.write_text(to_json(square))
    elif fmt == "text":
        path.write_text(to_text_grid(square))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load_square(path: str | Path, k: int | None = None) -> KPartialSquare:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text, k=k)


def serialize(square: KPartialSquare, fmt: str = "json") -> str:
    """Render a square in the named format; inverse of parse."""
    if fmt == "json":
        return to_json(square)
    if fmt == "text":
        return to_text_grid(square)
    raise ValueError(f"unknown format {fmt!r}")


def parse(data: "str | bytes", k: int | None = None) -> KPartialSquare:
    text = data.decode() if isinstance(data, bytes) else data
    return loads(text, k=k)
