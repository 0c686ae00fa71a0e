"""Markov chain mean first passage times and the Kemeny constant.

Exact (``fractions.Fraction``) and float modes are both supported; see
:mod:`kemeny_lab.numerics`.
"""
from .errors import (
    CensoringExceeded,
    DimensionMismatch,
    KemenyLabError,
    NoConvergence,
    NotPrimitive,
    NotRegular,
    NotStochastic,
    ParseError,
    SingularMatrix,
    SingularSystem,
    SpectrumInvalid,
    UnsupportedInMode,
)

__version__ = "0.1.0"
