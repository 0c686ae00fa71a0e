"""Monte Carlo estimates of first passage times, and exact TV mixing curves."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .chain import TransitionMatrix, require_regular, stationary
from .errors import CensoringExceeded, DimensionMismatch, NotPrimitive
from .rng import uniforms

DEFAULT_MAX_STEPS = 10**6
CENSORING_LIMIT = 0.01
THREADS_ENV = "KEMENY_LAB_THREADS"


@dataclass(frozen=True)
class SimulationConfig:
    trials: int
    max_steps: int = DEFAULT_MAX_STEPS
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class EmpiricalMfpt:
    means: np.ndarray
    stderrs: np.ndarray
    censored_counts: np.ndarray


@dataclass(frozen=True)
class KemenyEstimate:
    values: np.ndarray
    stderrs: np.ndarray
    spread: float


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _cumulative_rows(p: TransitionMatrix) -> np.ndarray:
    probs = nx.to_float(p.matrix)
    cum = np.cumsum(probs, axis=1)
    for i, row in enumerate(probs):
        last = int(np.flatnonzero(row)[-1])
        cum[i, last:] = 1.0
    return cum


def _stream(start: int, target: int) -> int:
    return (start << 16) | target


def _walk(cum: np.ndarray, start: int, target: int, cfg: SimulationConfig):
    """Hitting times of every trial, or -1 where the walk was censored."""
    times = np.full(cfg.trials, -1, dtype=np.int64)
    active = np.arange(cfg.trials, dtype=np.int64)
    states = np.full(cfg.trials, start, dtype=np.int64)
    stream = _stream(start, target)
    for step in range(cfg.max_steps):
        if active.size == 0:
            break
        u = uniforms(cfg.seed, stream, active, step)
        states = np.sum(u[:, None] >= cum[states], axis=1)
        hit = states == target
        times[active[hit]] = step + 1
        active, states = active[~hit], states[~hit]
    return times


def simulate_hitting(p: TransitionMatrix, start: int, target: int, cfg: SimulationConfig,
                     _cum=None):
    """Mean steps to first reach ``target`` from ``start`` over ``cfg.trials`` walks.

    For ``start == target`` this is the first return time (at least one
    step). Returns ``(mean, stderr, censored)``; censored walks are excluded
    from the mean and more than 1% of them raises :class:`CensoringExceeded`.
    Trial ``t`` draws its step-``s`` uniform from the counter
    ``(s, t, start, target)`` under ``cfg.seed``.
    """
    n = p.n
    if not (0 <= start < n and 0 <= target < n):
        raise DimensionMismatch(f"states must lie in 0..{n - 1}")
    if n >= 2**16:
        raise DimensionMismatch("simulation supports at most 65535 states")
    cum = _cumulative_rows(p) if _cum is None else _cum
    times = _walk(cum, start, target, cfg)
    done = times[times >= 0].astype(np.float64)
    censored = cfg.trials - done.size
    if censored > CENSORING_LIMIT * cfg.trials:
        raise CensoringExceeded(start, target, censored, cfg.trials)
    mean = float(done.mean())
    stderr = float(done.std(ddof=1) / np.sqrt(done.size)) if done.size > 1 else float("inf")
    return mean, stderr, censored


def empirical_mfpt(p: TransitionMatrix, cfg: SimulationConfig, threads: int | None = None):
    """Simulate every (start, target) pair. Output is independent of ``threads``."""
    require_regular(p)
    n = p.n
    cum = _cumulative_rows(p)
    pairs = [(i, j) for i in range(n) for j in range(n)]
    threads = default_threads() if threads is None else threads

    def run(pair):
        return simulate_hitting(p, pair[0], pair[1], cfg, _cum=cum)

    if threads <= 1:
        results = [run(pair) for pair in pairs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, pairs))
    means = np.empty((n, n))
    stderrs = np.empty((n, n))
    censored = np.zeros((n, n), dtype=np.int64)
    for (i, j), (mean, se, cens) in zip(pairs, results):
        means[i, j], stderrs[i, j], censored[i, j] = mean, se, cens
    return EmpiricalMfpt(means, stderrs, censored)


def empirical_kemeny(emp: EmpiricalMfpt, pi) -> KemenyEstimate:
    """Per-start ``sum_j pi_j m_ij`` from simulated means.

    Cells are simulated with disjoint random streams, so standard errors
    combine in quadrature.
    """
    w = nx.to_float(pi)
    values = emp.means @ w
    stderrs = np.sqrt((emp.stderrs**2) @ (w**2))
    return KemenyEstimate(values, stderrs, float(values.max() - values.min()))


def tv_distance_curve(p: TransitionMatrix, initial, m_max: int) -> list:
    """``0.5 * || initial^T P^m - pi^T ||_1`` for m = 1..m_max (no sampling)."""
    require_regular(p, NotPrimitive)
    if int(m_max) != m_max or m_max < 1:
        raise ValueError(f"m_max must be a positive integer, got {m_max}")
    x = nx.as_mode(initial, p.exact)
    if x.shape != (p.n,):
        raise DimensionMismatch(f"initial distribution has shape {x.shape}, expected {(p.n,)}")
    total = sum(x)
    if any(v < 0 for v in x) or ((total != 1) if p.exact else abs(total - 1) > 1e-12):
        raise ValueError("initial vector is not a probability distribution")
    pi = stationary(p)
    curve = []
    for _ in range(m_max):
        x = x @ p.matrix
        curve.append(sum(abs(v) for v in (x - pi)) / 2)
    return curve
