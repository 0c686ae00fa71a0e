"""The Kemeny vector ``k = M pi`` and the Kemeny constant by three routes."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import numerics as nx
from .chain import TransitionMatrix
from .errors import DimensionMismatch, SpectrumInvalid
from .mfpt import d_minus_e_check  # noqa: F401  (re-exported)

UNIT_EIGENVALUE_TOL = 1e-8
IMAG_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class KemenyReport:
    """Everything known about the Kemeny constant of one chain.

    ``K`` always counts the diagonal (``M pi = K e``); ``kbar_level`` is
    ``K - 1``, the common value of ``Mbar pi``.
    """

    kemeny_vector: np.ndarray
    kbar: np.ndarray
    K_from_vector: object
    K_trace: object
    K_eigen: float | None
    constancy_spread: object
    route_max_discrepancy: object
    invariance_residual: object

    @property
    def K(self):
        return self.K_from_vector

    @property
    def kbar_level(self):
        return self.K_from_vector - 1


def kemeny_vector(m, pi) -> np.ndarray:
    m, pi = np.asarray(m), np.asarray(pi)
    if m.ndim != 2 or m.shape[1] != pi.shape[0]:
        raise DimensionMismatch(f"M has shape {m.shape} but pi has length {pi.shape[0]}")
    return m @ pi


def kemeny_trace(z):
    return sum(np.diagonal(np.asarray(z)))


def kemeny_eigen(eigs) -> float:
    """``K = 1 + sum over non-unit eigenvalues of 1/(1 - lambda)``."""
    eigs = [complex(z) for z in eigs]
    unit = [z for z in eigs if abs(z - 1) < UNIT_EIGENVALUE_TOL]
    if len(unit) != 1:
        raise SpectrumInvalid(f"expected exactly one unit eigenvalue, found {len(unit)}")
    rest = [z for z in eigs if abs(z - 1) >= UNIT_EIGENVALUE_TOL]
    outside = [z for z in rest if abs(z) >= 1]
    if outside:
        raise SpectrumInvalid(f"non-unit eigenvalues on or outside the unit circle: {outside}")
    total = 1 + sum(1 / (1 - z) for z in rest)
    if abs(total.imag) >= IMAG_RESIDUAL_TOL:
        raise SpectrumInvalid(f"imaginary residual {total.imag:.3e} in Kemeny sum")
    return total.real


def certify(p: TransitionMatrix, m, mbar, z, pi, eigs=None) -> KemenyReport:
    """Compute ``k = M pi`` without assuming it is constant, then measure how
    constant it is and how well the routes to ``K`` agree.

    Also checks that ``Mbar pi`` is fixed by ``P``.
    """
    k = kemeny_vector(m, pi)
    kbar = kemeny_vector(mbar, pi)
    # pi-weighted average; equals every k_i once constancy holds
    k_avg = sum(k * pi)
    k_trace = kemeny_trace(z)
    k_eigen = kemeny_eigen(eigs) if eigs is not None else None
    spread = max(k) - min(k)
    routes = [k_avg, k_trace] + ([k_eigen] if k_eigen is not None else [])
    discrepancy = max(abs(a - b) for a, b in combinations(routes, 2))
    invariance = nx.max_abs(p.matrix @ kbar - kbar)
    return KemenyReport(
        kemeny_vector=k,
        kbar=kbar,
        K_from_vector=k_avg,
        K_trace=k_trace,
        K_eigen=k_eigen,
        constancy_spread=spread,
        route_max_discrepancy=discrepancy,
        invariance_residual=invariance,
    )
