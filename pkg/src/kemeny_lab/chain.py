"""Transition matrices, primitivity, stationary distributions and the limit projector."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import numerics as nx
from .errors import DimensionMismatch, NotRegular, NotStochastic, SingularMatrix, SingularSystem

log = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-12
STATIONARY_RESIDUAL_TOL = 1e-10
# float-mode agreement required between the direct solve and power iteration
POWER_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class TransitionMatrix:
    """A validated row-stochastic matrix. Build it with :func:`validate`."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def exact(self) -> bool:
        return nx.is_exact(self.matrix)


@dataclass(frozen=True)
class PrimitivityReport:
    is_regular: bool
    witness_exponent: int | None
    checked_bound: int


def validate(raw) -> TransitionMatrix:
    """Check that ``raw`` is square, nonnegative and row-stochastic.

    Rows must sum to one exactly in exact mode and within ``1e-12`` in float
    mode. Non-regular chains are accepted here.
    """
    p = np.array(raw, dtype=object if nx.is_exact(raw) else np.float64)
    if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 1:
        raise DimensionMismatch(f"transition matrix must be square, got shape {p.shape}")
    exact = nx.is_exact(p)
    if exact:
        p = nx.to_exact(p)
    for i, row in enumerate(p):
        if not exact and not np.all(np.isfinite(row)):
            raise NotStochastic(i, "non-finite entry")
        if any(x < 0 for x in row):
            raise NotStochastic(i, "negative entry")
        s = sum(row, Fraction(0)) if exact else float(np.sum(row))
        if (s != 1) if exact else abs(s - 1.0) > ROW_SUM_TOL:
            raise NotStochastic(i, f"row sums to {s}")
    p.flags.writeable = False
    return TransitionMatrix(p)


def primitivity(p: TransitionMatrix) -> PrimitivityReport:
    """Search m = 1 .. (n-1)^2 + 1 for a strictly positive power of P.

    Only the zero pattern is propagated, so neither rational growth nor
    float underflow can affect the answer.
    """
    n = p.n
    bound = (n - 1) ** 2 + 1
    pattern = np.array([[x != 0 for x in row] for row in p.matrix], dtype=bool)
    current = pattern.copy()
    for m in range(1, bound + 1):
        if current.all():
            return PrimitivityReport(True, m, bound)
        current = (current.astype(np.int64) @ pattern.astype(np.int64)) > 0
    return PrimitivityReport(False, None, bound)


def require_regular(p: TransitionMatrix, exc=NotRegular) -> PrimitivityReport:
    report = primitivity(p)
    if not report.is_regular:
        raise exc(
            f"chain is not regular: no power P^m with m <= {report.checked_bound} is strictly positive"
        )
    return report


def stationary_residual(p: TransitionMatrix, pi) -> object:
    """max |(pi^T P - pi^T)_j|"""
    return nx.max_abs(pi @ p.matrix - pi)


def power_iteration(p: TransitionMatrix, iterations: int = 200, start=None) -> np.ndarray:
    """Iterate ``x <- x P`` from the uniform distribution (float mode)."""
    mat = nx.to_float(p.matrix)
    x = np.full(p.n, 1.0 / p.n) if start is None else np.asarray(start, dtype=float)
    for _ in range(iterations):
        x = x @ mat
    return x / x.sum()


def stationary(p: TransitionMatrix) -> np.ndarray:
    """Stationary distribution of a regular chain.

    Solves ``(P^T - I) pi = 0`` with its last row replaced by ``sum(pi) = 1``.
    In float mode the answer is also compared with power iteration.
    """
    require_regular(p)
    n, exact = p.n, p.exact
    system = p.matrix.T - nx.identity(n, exact)
    system[n - 1, :] = nx.ones(n, exact)
    rhs = nx.zeros(n, exact)
    rhs[n - 1] = nx.ones(1, exact)[0]
    try:
        pi = nx.solve_linear(system, rhs)
    except SingularMatrix as exc:
        raise SingularSystem(f"stationary system is singular: {exc}") from exc

    residual = stationary_residual(p, pi)
    if (residual != 0) if exact else residual >= STATIONARY_RESIDUAL_TOL:
        raise SingularSystem(f"stationary residual {residual} too large")
    if not exact:
        iterated = power_iteration(p, iterations=max(200, 50 * n))
        gap = float(np.max(np.abs(iterated - pi)))
        if gap > POWER_CHECK_TOL:
            if stationary_residual(p, iterated) < STATIONARY_RESIDUAL_TOL:
                raise SingularSystem(f"direct solve and power iteration differ by {gap:.3e}")
            log.warning("power iteration has not converged (gap %.3e); slow mixing chain", gap)
    pi.flags.writeable = False
    return pi


def power(p: TransitionMatrix, m: int) -> TransitionMatrix:
    """P^m by repeated squaring."""
    if int(m) != m or m < 1:
        raise ValueError(f"exponent must be a positive integer, got {m}")
    result = None
    base = p.matrix
    m = int(m)
    while m:
        if m & 1:
            result = base if result is None else result @ base
        m >>= 1
        if m:
            base = base @ base
    return validate(result)


def limit_projector(pi) -> np.ndarray:
    """The rank-one limit L = e pi^T of P^m (every row equal to pi)."""
    pi = np.asarray(pi)
    proj = np.tile(pi, (pi.shape[0], 1))
    proj.flags.writeable = False
    return proj
