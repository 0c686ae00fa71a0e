"""Reading transition matrices from CSV or JSON files.

Entries are decimal literals (``0.25``, ``1e-3``), integers, or rational
literals (``a/b``). Any rational literal selects exact mode unless float mode
is forced; otherwise float mode is the default.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ParseError

_RATIONAL = re.compile(r"^[+-]?\d+/\d+$")
_INTEGER = re.compile(r"^[+-]?\d+$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _classify(token: str, line, column) -> str:
    if _RATIONAL.match(token):
        if int(token.split("/")[1]) == 0:
            raise ParseError(f"zero denominator in {token!r}", line, column)
        return "rational"
    if _INTEGER.match(token):
        return "integer"
    if _DECIMAL.match(token):
        return "decimal"
    raise ParseError(f"not a number: {token!r}", line, column)


def _parse_csv(text: str):
    rows, where = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = [t.strip() for t in line.split(",")]
        rows.append(tokens)
        where.append(lineno)
    if not rows:
        raise ParseError("file contains no matrix rows")
    n = len(rows)
    for r, (tokens, lineno) in enumerate(zip(rows, where)):
        if len(tokens) != n:
            raise ParseError(f"row {r} has {len(tokens)} entries, expected {n}", lineno)
    return rows, [[(lineno, c + 1) for c in range(n)] for lineno in where]


def _parse_json(text: str):
    try:
        doc = json.loads(text, parse_float=str, parse_int=str)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict) or "rows" not in doc:
        raise ParseError('JSON matrix must be an object with a "rows" array')
    rows = doc["rows"]
    if not isinstance(rows, list) or not rows:
        raise ParseError('"rows" must be a non-empty array')
    n = len(rows)
    declared = doc.get("n")
    if declared is not None and (not isinstance(declared, str) or int(declared) != n):
        raise ParseError(f'"n" is {declared} but {n} rows are given')
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {r} must be an array of {n} entries", r + 1)
        tokens = []
        for c, x in enumerate(row):
            if not isinstance(x, str):
                raise ParseError(f"entry must be a number or string, got {x!r}", r + 1, c + 1)
            tokens.append(x.strip())
        out.append(tokens)
    # JSON positions are reported as (row, entry), both 1-based
    return out, [[(r + 1, c + 1) for c in range(n)] for r in range(n)]


def parse_matrix(text: str, fmt: str, mode: str | None = None) -> np.ndarray:
    """Parse matrix text. ``fmt`` is ``"csv"`` or ``"json"``; ``mode`` forces
    ``"exact"`` or ``"float"``."""
    rows, where = _parse_json(text) if fmt == "json" else _parse_csv(text)
    kinds = {
        _classify(tok, *pos) for row, poss in zip(rows, where) for tok, pos in zip(row, poss)
    }
    if mode is None:
        mode = "exact" if "rational" in kinds else "float"
    exact_values = [[Fraction(tok) for tok in row] for row in rows]
    if mode == "exact":
        out = np.empty((len(rows), len(rows)), dtype=object)
        for i, row in enumerate(exact_values):
            for j, x in enumerate(row):
                out[i, j] = x
        return out
    if mode == "float":
        return np.array([[float(x) for x in row] for row in exact_values], dtype=np.float64)
    raise ValueError(f"unknown mode {mode!r}")


def read_matrix(path, mode: str | None = None) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    fmt = "json" if path.suffix.lower() == ".json" or text.lstrip().startswith("{") else "csv"
    return parse_matrix(text, fmt, mode)
