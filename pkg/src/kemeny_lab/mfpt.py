"""Fundamental matrix and mean first passage times.

Two independent constructions of the MFPT matrix are provided:

* :func:`mfpt_from_fundamental` reads it off ``Z = (I - P + e pi^T)^-1``;
* :func:`mfpt_direct` solves, for each target ``j``, the first-step system
  ``m_ij = 1 + sum_{k != j} p_ik m_kj``.
"""
from __future__ import annotations

import numpy as np

from . import numerics as nx
from .chain import TransitionMatrix, limit_projector
from .errors import DimensionMismatch, SingularMatrix, SingularSystem


def fundamental(p: TransitionMatrix, pi) -> np.ndarray:
    """``Z = [I - (P - A)]^-1`` with ``A = e pi^T``."""
    n = p.n
    a = limit_projector(pi)
    return nx.invert(nx.identity(n, p.exact) - p.matrix + a)


def mfpt_from_fundamental(z, pi) -> np.ndarray:
    z, pi = np.asarray(z), np.asarray(pi)
    n = z.shape[0]
    if pi.shape != (n,):
        raise DimensionMismatch(f"pi has shape {pi.shape}, expected {(n,)}")
    m = z.copy()
    for j in range(n):
        for i in range(n):
            m[i, j] = 1 / pi[j] if i == j else (z[j, j] - z[i, j]) / pi[j]
    return m


def mfpt_direct(p: TransitionMatrix) -> np.ndarray:
    """MFPT matrix from the first-step equations, one linear solve per target.

    The diagonal comes out of the same solve (mean return times) and so does
    not depend on a separately computed stationary distribution.
    """
    n, exact = p.n, p.exact
    eye = nx.identity(n, exact)
    rhs = nx.ones(n, exact)
    m = nx.zeros((n, n), exact)
    for j in range(n):
        taboo = p.matrix.copy()
        taboo[:, j] = nx.zeros(n, exact)
        try:
            m[:, j] = nx.solve_linear(eye - taboo, rhs)
        except SingularMatrix as exc:
            raise SingularSystem(f"first-passage system for target {j} is singular: {exc}") from exc
    return m


def deleted_diagonal(m) -> np.ndarray:
    out = np.array(m, copy=True)
    zero = nx.zeros(1, nx.is_exact(out))[0]
    for i in range(out.shape[0]):
        out[i, i] = zero
    return out


def return_diagonal(pi) -> np.ndarray:
    """``D = diag(1/pi_i)``."""
    pi = np.asarray(pi)
    d = nx.zeros((pi.shape[0], pi.shape[0]), nx.is_exact(pi))
    for i, x in enumerate(pi):
        d[i, i] = 1 / x
    return d


def verify_pmd_identity(p: TransitionMatrix, m, d) -> np.ndarray:
    """Residual ``P(M - D) - (M - E)``, with ``E`` the all-ones matrix."""
    m, d = np.asarray(m), np.asarray(d)
    n = p.n
    if m.shape != (n, n) or d.shape != (n, n):
        raise DimensionMismatch(f"expected {n}x{n} operands, got M {m.shape} and D {d.shape}")
    return p.matrix @ (m - d) - (m - nx.ones((n, n), p.exact))


def d_minus_e_check(d, pi) -> np.ndarray:
    """Residual ``(D - E) pi``; ``pi`` spans the null space of ``D - E``."""
    d, pi = np.asarray(d), np.asarray(pi)
    if d.shape != (pi.shape[0], pi.shape[0]):
        raise DimensionMismatch(f"D has shape {d.shape} but pi has length {pi.shape[0]}")
    # E pi = e * sum(pi); E itself is never formed
    return d @ pi - sum(pi) * nx.ones(pi.shape[0], nx.is_exact(pi))
