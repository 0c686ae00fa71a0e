"""Counter-based random numbers (Philox4x32-10), vectorised over numpy arrays.

A draw is a pure function of ``(key, counter)``, so any walk can be replayed
from its coordinates alone and trials can be scheduled in any order or on
any number of threads without changing a single bit of output.
"""
from __future__ import annotations

import numpy as np

_MASK32 = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_SHIFT32 = np.uint64(32)
ROUNDS = 10


def philox4x32(counter, key):
    """Philox4x32-10 block function.

    ``counter`` is a sequence of four arrays (or scalars) of 32-bit words and
    ``key`` a pair of 32-bit words. Returns four ``uint32`` arrays.
    """
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) & _MASK32 for c in counter)
    c0, c1, c2, c3 = np.broadcast_arrays(c0, c1, c2, c3)
    k0 = np.uint64(int(key[0]) & 0xFFFFFFFF)
    k1 = np.uint64(int(key[1]) & 0xFFFFFFFF)
    for _ in range(ROUNDS):
        p0 = c0 * _M0
        p1 = c2 * _M1
        c0, c1, c2, c3 = (
            (p1 >> _SHIFT32) ^ c1 ^ k0,
            p1 & _MASK32,
            (p0 >> _SHIFT32) ^ c3 ^ k1,
            p0 & _MASK32,
        )
        k0 = (k0 + _W0) & _MASK32
        k1 = (k1 + _W1) & _MASK32
    return tuple(x.astype(np.uint32) for x in (c0, c1, c2, c3))


def seed_key(seed: int) -> tuple[int, int]:
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    return seed & 0xFFFFFFFF, seed >> 32


def uniforms(seed: int, stream: int, trials, step: int) -> np.ndarray:
    """Doubles in [0, 1) addressed by ``(seed; step, trial, stream)``.

    ``stream`` is any 32-bit label, e.g. an encoded (start, target) pair.
    Uses 53 bits from the first two output words.
    """
    trials = np.asarray(trials, dtype=np.uint64)
    w0, w1, _, _ = philox4x32((step, trials, stream, 0), seed_key(seed))
    hi = (w0 >> np.uint32(5)).astype(np.float64)
    lo = (w1 >> np.uint32(6)).astype(np.float64)
    return (hi * 67108864.0 + lo) / 9007199254740992.0
