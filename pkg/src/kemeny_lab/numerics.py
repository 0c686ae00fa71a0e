"""Scalar modes and the dense linear algebra used throughout the package.

Matrices are plain numpy arrays in one of two modes:

* exact mode: ``dtype=object`` with every entry a :class:`fractions.Fraction`
  (arbitrary precision, always in lowest terms);
* float mode: ``dtype=float64``.

A computation never mixes the two. Every routine here is a pure function of
its inputs and returns fresh arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, NoConvergence, SingularMatrix, UnsupportedInMode

#: relative pivot threshold for float mode (scaled by the largest |a_ij|)
FLOAT_SINGULAR_RTOL = 1e-12


def is_exact(a) -> bool:
    return np.asarray(a).dtype == object


def to_exact(a) -> np.ndarray:
    """Convert to an exact (Fraction) array. Floats convert to their exact binary value."""
    arr = np.asarray(a)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = _fraction(x)
    return out


def _fraction(x) -> Fraction:
    # numpy scalars would leak fixed-width numerators into the Fraction
    if isinstance(x, Fraction):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))


def to_float(a) -> np.ndarray:
    return np.asarray(a, dtype=object).astype(np.float64)


def as_mode(a, exact: bool) -> np.ndarray:
    return to_exact(a) if exact else to_float(a)


def identity(n: int, exact: bool) -> np.ndarray:
    return as_mode(np.eye(n, dtype=np.int64), exact)


def zeros(shape, exact: bool) -> np.ndarray:
    return as_mode(np.zeros(shape, dtype=np.int64), exact)


def ones(shape, exact: bool) -> np.ndarray:
    return as_mode(np.ones(shape, dtype=np.int64), exact)


def max_abs(a):
    """Largest absolute entry; ``0`` in the mode of ``a`` for empty input."""
    arr = np.asarray(a)
    if arr.size == 0:
        return Fraction(0) if is_exact(arr) else 0.0
    return max(abs(x) for x in arr.flat) if is_exact(arr) else float(np.max(np.abs(arr)))


def _check_square(a: np.ndarray, name: str = "matrix") -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be square and non-empty, got shape {a.shape}")
    return a.shape[0]


def _common_mode(*arrays) -> bool:
    modes = {is_exact(x) for x in arrays}
    if len(modes) != 1:
        raise UnsupportedInMode("exact and float operands cannot be mixed")
    return modes.pop()


@dataclass(frozen=True)
class Pivot:
    row: int
    col: int
    value: object


@dataclass(frozen=True)
class TableauTrace:
    """Record of a Gauss-Jordan reduction of ``[A | B]`` to ``[I | A^-1 B]``.

    ``pivots[k]`` says that at step ``k`` the row currently at index ``row`` was
    swapped into position ``col`` and its entry ``value`` was used as the pivot.
    """

    initial: np.ndarray
    final: np.ndarray
    pivots: tuple[Pivot, ...]
    left_cols: int

    def replay(self) -> np.ndarray:
        tab = self.initial.copy()
        for p in self.pivots:
            _apply_pivot(tab, p.row, p.col)
        return tab

    @property
    def left(self) -> np.ndarray:
        return self.final[:, : self.left_cols]

    @property
    def right(self) -> np.ndarray:
        return self.final[:, self.left_cols:]


def _apply_pivot(tab: np.ndarray, row: int, col: int) -> None:
    if row != col:
        tab[[col, row]] = tab[[row, col]]
    tab[col] = tab[col] / tab[col, col]
    for r in range(tab.shape[0]):
        if r != col:
            factor = tab[r, col]
            if factor != 0:
                tab[r] = tab[r] - factor * tab[col]


def _row_reduce(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, tuple[Pivot, ...]]:
    n = _check_square(a)
    if b.shape[0] != n:
        raise DimensionMismatch(f"right block has {b.shape[0]} rows, expected {n}")
    exact = _common_mode(a, b)
    initial = np.concatenate([a, b], axis=1)
    tab = initial.copy()
    pivots = []
    threshold = FLOAT_SINGULAR_RTOL * max_abs(a) if not exact else None
    for col in range(n):
        if exact:
            row = next((r for r in range(col, n) if tab[r, col] != 0), None)
            if row is None:
                raise SingularMatrix(f"no nonzero pivot in column {col}")
        else:
            row = col + int(np.argmax(np.abs(tab[col:, col])))
            if not abs(tab[row, col]) > threshold:
                raise SingularMatrix(
                    f"pivot {tab[row, col]:.3e} in column {col} below threshold {threshold:.3e}"
                )
        pivots.append(Pivot(row, col, tab[row, col]))
        _apply_pivot(tab, row, col)
    return initial, tab, tuple(pivots)


def gauss_jordan_invert(a, capture: bool = False):
    """Invert a square matrix by row-reducing ``[A | I]``.

    Returns ``(inverse, trace)`` where ``trace`` is a :class:`TableauTrace`
    when ``capture`` is true and ``None`` otherwise.

    Exact mode takes the first nonzero entry at or below the diagonal as
    pivot; float mode uses partial pivoting and raises
    :class:`SingularMatrix` when the best pivot falls below
    ``1e-12 * max|a_ij|``.
    """
    a = np.asarray(a)
    n = _check_square(a)
    initial, final, pivots = _row_reduce(a, identity(n, is_exact(a)))
    inverse = final[:, n:].copy()
    trace = TableauTrace(initial, final, pivots, n) if capture else None
    return inverse, trace


def invert(a) -> np.ndarray:
    return gauss_jordan_invert(a)[0]


def change_of_basis(c, b) -> np.ndarray:
    """Matrix taking coordinates relative to the columns of ``b`` to
    coordinates relative to the columns of ``c`` (that is ``c^-1 b``)."""
    c, b = np.asarray(c), np.asarray(b)
    n = _check_square(c, "C")
    if b.shape != (n, n):
        raise DimensionMismatch(f"B has shape {b.shape}, expected {(n, n)}")
    _, final, _ = _row_reduce(c, b)
    return final[:, n:].copy()


def solve_linear(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    n = _check_square(a)
    if b.shape != (n,):
        raise DimensionMismatch(f"rhs has shape {b.shape}, expected {(n,)}")
    _, final, _ = _row_reduce(a, b.reshape(n, 1))
    return final[:, n].copy()


def _eig_sort_key(z: complex):
    # rounding keeps the documented order stable when moduli tie up to rounding noise
    return (-round(abs(z), 10), -round(z.real, 10), -round(z.imag, 10))


def eigenvalues(a) -> list[complex]:
    """All eigenvalues of a float matrix, descending by modulus, then by real
    part, then by imaginary part."""
    a = np.asarray(a)
    _check_square(a)
    if is_exact(a):
        raise UnsupportedInMode("eigenvalues are only available in float mode")
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return sorted((complex(v) for v in vals), key=_eig_sort_key)
