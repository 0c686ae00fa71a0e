"""Kemeny time along the iterates P, P^2, P^3, ...

Two routes to ``K_m`` (the Kemeny constant of ``P^m``) are kept apart:
:func:`kemeny_series` raises the eigenvalues of ``P`` to the ``m``-th power,
while :func:`mfpt_series` runs the whole MFPT pipeline on the matrix ``P^m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from .chain import (
    STATIONARY_RESIDUAL_TOL,
    TransitionMatrix,
    limit_projector,
    require_regular,
    stationary,
    stationary_residual,
    validate,
)
from .errors import DimensionMismatch, NotPrimitive, SingularSystem, UnsupportedInMode
from .kemeny import kemeny_eigen
from .mfpt import deleted_diagonal, fundamental, mfpt_from_fundamental

DEFAULT_STEPS = 30


@dataclass(frozen=True)
class StepRecord:
    m: int
    K_eigen: float | None
    K_pipeline: object
    projector_gap: object
    invariance_residual: object
    mfpt: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class EvolutionSeries:
    steps: tuple[StepRecord, ...]
    K_limit: int
    M_limit: np.ndarray
    Mbar_limit: np.ndarray


def kemeny_series(p: TransitionMatrix, m_max: int) -> list[float]:
    """``K_m = 1 + sum_{i>=2} 1/(1 - lambda_i^m)`` for m = 1..m_max, from the
    spectrum of ``P`` alone."""
    if p.exact:
        raise UnsupportedInMode("the eigenvalue route needs a float-mode chain")
    _check_steps(m_max)
    require_regular(p, NotPrimitive)
    eigs = nx.eigenvalues(p.matrix)
    return [kemeny_eigen([z**m for z in eigs]) for m in range(1, m_max + 1)]


def _check_steps(m_max):
    if int(m_max) != m_max or m_max < 1:
        raise ValueError(f"number of steps must be a positive integer, got {m_max}")


def _check_pi(p: TransitionMatrix, pi, m):
    res = stationary_residual(p, pi)
    if (res != 0) if p.exact else res >= STATIONARY_RESIDUAL_TOL:
        raise SingularSystem(f"pi is not stationary for P^{m} (residual {res})")


def mfpt_series(p: TransitionMatrix, m_max: int, pi=None) -> list[tuple[np.ndarray, object]]:
    """``(M_m, K_m)`` for m = 1..m_max via the full pipeline on ``P^m``.

    The stationary distribution of ``P`` is reused for every power and
    re-checked against each ``P^m``.
    """
    _check_steps(m_max)
    require_regular(p, NotPrimitive)
    if pi is None:
        pi = stationary(p)
    out = []
    pm = p
    for m in range(1, m_max + 1):
        if m > 1:
            pm = validate(pm.matrix @ p.matrix)
        _check_pi(pm, pi, m)
        z = fundamental(pm, pi)
        mm = mfpt_from_fundamental(z, pi)
        out.append((mm, pi @ mm @ pi))
    return out


def limit_mfpt(pi) -> tuple[np.ndarray, np.ndarray]:
    """``M_L = e [1/pi_1, ..., 1/pi_n]`` and its deleted-diagonal form.

    Raises ``ValueError`` unless ``Mbar_L pi = (n - 1) e``.
    """
    pi = np.asarray(pi)
    n = pi.shape[0]
    row = np.array([1 / x for x in pi], dtype=pi.dtype)
    m_limit = np.tile(row, (n, 1))
    mbar_limit = deleted_diagonal(m_limit)
    residual = nx.max_abs(mbar_limit @ pi - (n - 1) * nx.ones(n, nx.is_exact(pi)))
    if (residual != 0) if nx.is_exact(pi) else residual > 1e-9 * n:
        raise ValueError(f"Mbar_L pi differs from (n-1) e by {residual}")
    return m_limit, mbar_limit


def invariance_check(p: TransitionMatrix, mbar, pi, m: int) -> np.ndarray:
    """``P^m (Mbar pi) - Mbar pi``."""
    mbar, pi = np.asarray(mbar), np.asarray(pi)
    if mbar.shape != (p.n, p.n) or pi.shape != (p.n,):
        raise DimensionMismatch(f"Mbar {mbar.shape} / pi {pi.shape} do not match n={p.n}")
    _check_steps(m)
    kbar = mbar @ pi
    v = kbar
    for _ in range(m):
        v = p.matrix @ v
    return v - kbar


def _inf_norm(a):
    return max(sum(abs(x) for x in row) for row in a) if nx.is_exact(a) else float(
        np.max(np.sum(np.abs(a), axis=1))
    )


def projector_convergence(p: TransitionMatrix, pi, m_max: int) -> list:
    """``||P^m - e pi^T||_inf`` for m = 1..m_max."""
    _check_steps(m_max)
    require_regular(p, NotPrimitive)
    lim = limit_projector(pi)
    gaps = []
    pm = p.matrix
    for m in range(1, m_max + 1):
        if m > 1:
            pm = pm @ p.matrix
        gaps.append(_inf_norm(pm - lim))
    return gaps


def evolve(p: TransitionMatrix, m_max: int = DEFAULT_STEPS, pi=None) -> EvolutionSeries:
    """Assemble the per-step series for m = 1..m_max plus the limit data."""
    _check_steps(m_max)
    if pi is None:
        pi = stationary(p)
    eig_route = None if p.exact else kemeny_series(p, m_max)
    pipeline = mfpt_series(p, m_max, pi)
    gaps = projector_convergence(p, pi, m_max)
    mbar = deleted_diagonal(pipeline[0][0])
    steps = []
    kbar = mbar @ pi
    v = kbar
    for m in range(1, m_max + 1):
        v = p.matrix @ v
        mm, k_pipe = pipeline[m - 1]
        steps.append(
            StepRecord(
                m=m,
                K_eigen=None if eig_route is None else eig_route[m - 1],
                K_pipeline=k_pipe,
                projector_gap=gaps[m - 1],
                invariance_residual=nx.max_abs(v - kbar),
                mfpt=mm,
            )
        )
    m_limit, mbar_limit = limit_mfpt(pi)
    return EvolutionSeries(tuple(steps), p.n, m_limit, mbar_limit)
