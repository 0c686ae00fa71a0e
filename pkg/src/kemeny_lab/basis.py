"""Reading ``Mbar pi = k`` as a change of basis.

``pi`` holds the coordinates of ``k`` relative to the columns of ``Mbar``;
inverting ``Mbar`` by row reduction of ``[Mbar | I]`` carries any vector in
natural coordinates over to ``Mbar``-column coordinates. Applied to the
uniform vector ``e/n`` it lands on ``pi / (n (K - 1))``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .errors import DimensionMismatch, SingularMatrix


@dataclass(frozen=True)
class BasisCertificate:
    mbar_inverse: np.ndarray
    tableau: nx.TableauTrace
    reconstruction: np.ndarray
    reconstruction_residual: object
    pullback_vector: np.ndarray
    normalization_factor: object
    pullback_residual: object


def reconstruct_kemeny_vector(mbar, pi) -> np.ndarray:
    """``sum_j pi_j * (column j of Mbar)``, accumulated column by column."""
    mbar, pi = np.asarray(mbar), np.asarray(pi)
    n = mbar.shape[0]
    if mbar.shape != (n, n) or pi.shape != (n,):
        raise DimensionMismatch(f"Mbar {mbar.shape} and pi {pi.shape} are incompatible")
    total = nx.zeros(n, nx.is_exact(mbar))
    for j in range(n):
        column = mbar[:, j]
        total = total + np.array([pi[j] * x for x in column], dtype=total.dtype)
    return total


def invert_with_trace(mbar) -> tuple[np.ndarray, nx.TableauTrace]:
    try:
        return nx.gauss_jordan_invert(mbar, capture=True)
    except SingularMatrix as exc:
        raise SingularMatrix(f"deleted-diagonal MFPT matrix is not invertible: {exc}") from exc


def equiprobable_pullback(mbar_inverse, pi, K):
    """Pull ``e/n`` back through ``Mbar^-1`` and rescale by ``n (K - 1)``.

    Returns ``(pullback, factor, residual)`` with
    ``residual = max |factor * pullback - pi|``.
    """
    mbar_inverse, pi = np.asarray(mbar_inverse), np.asarray(pi)
    n = pi.shape[0]
    if mbar_inverse.shape != (n, n):
        raise DimensionMismatch(f"inverse has shape {mbar_inverse.shape}, pi has length {n}")
    if not K > 1:
        raise ValueError(f"Kemeny constant must exceed 1, got {K}")
    uniform = nx.ones(n, nx.is_exact(pi)) / n
    pullback = mbar_inverse @ uniform
    factor = n * (K - 1)
    residual = nx.max_abs(factor * pullback - pi)
    return pullback, factor, residual


def certificate(mbar, pi, K) -> BasisCertificate:
    inverse, trace = invert_with_trace(mbar)
    recon = reconstruct_kemeny_vector(mbar, pi)
    pullback, factor, pull_res = equiprobable_pullback(inverse, pi, K)
    return BasisCertificate(
        mbar_inverse=inverse,
        tableau=trace,
        reconstruction=recon,
        reconstruction_residual=nx.max_abs(recon - np.asarray(mbar) @ np.asarray(pi)),
        pullback_vector=pullback,
        normalization_factor=factor,
        pullback_residual=pull_res,
    )


def format_tableau(trace: nx.TableauTrace, fmt=str) -> str:
    """Render the starting and reduced tableaux side by side, in the
    ``[M_1 ... M_n | s_1 ... s_n]`` layout."""
    n = trace.left_cols

    def cells(tab):
        return [[fmt(x) for x in row] for row in tab]

    before, after = cells(trace.initial), cells(trace.final)
    width = max(len(c) for tab in (before, after) for row in tab for c in row)

    def line(row):
        left = " ".join(c.rjust(width) for c in row[:n])
        right = " ".join(c.rjust(width) for c in row[n:])
        return f"[ {left} | {right} ]"

    header_left = " ".join(f"M{j + 1}".rjust(width) for j in range(n))
    header_right = " ".join(f"s{j + 1}".rjust(width) for j in range(n))
    header = f"  {header_left}   {header_right}  "
    lines = [header]
    for i in range(len(before)):
        arrow = " -> " if i == len(before) // 2 else "    "
        lines.append(line(before[i]) + arrow + line(after[i]))
    return "\n".join(ln.rstrip() for ln in lines)
