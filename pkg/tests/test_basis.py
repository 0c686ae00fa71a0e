from fractions import Fraction as F

import numpy as np
import pytest

from kemeny_lab import basis, chain, mfpt
from kemeny_lab import numerics as nx
from kemeny_lab.errors import DimensionMismatch, SingularMatrix

from conftest import OZ_MBAR_INV, OZ_PI, exact, random_regular_chain

OZ_MBAR = [[0, 4, F(10, 3)], [F(8, 3), 0, F(8, 3)], [F(10, 3), 4, 0]]


def test_reconstruct_oz():
    got = basis.reconstruct_kemeny_vector(exact(OZ_MBAR), exact(OZ_PI))
    assert got.tolist() == [F(32, 15)] * 3


def test_reconstruct_two_state():
    got = basis.reconstruct_kemeny_vector(exact([[0, 2], [2, 0]]), exact([F(1, 2), F(1, 2)]))
    assert got.tolist() == [1, 1]


def test_reconstruct_selects_single_column():
    got = basis.reconstruct_kemeny_vector(exact(OZ_MBAR), exact([1, 0, 0]))
    assert got.tolist() == [0, F(8, 3), F(10, 3)]


def test_reconstruct_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        basis.reconstruct_kemeny_vector(exact(OZ_MBAR), exact([1, 0]))


def test_invert_with_trace_oz():
    inv, trace = basis.invert_with_trace(exact(OZ_MBAR))
    assert inv.tolist() == OZ_MBAR_INV
    assert trace.right.tolist() == OZ_MBAR_INV
    assert trace.initial[:, 3:].tolist() == nx.identity(3, True).tolist()


def test_invert_with_trace_antidiagonal():
    inv, _ = basis.invert_with_trace(exact([[0, 2], [2, 0]]))
    assert inv.tolist() == [[0, F(1, 2)], [F(1, 2), 0]]


def test_invert_with_trace_singular():
    with pytest.raises(SingularMatrix):
        basis.invert_with_trace(exact([[0, 1], [0, 0]]))


def test_invert_random_five_state_multiply_back():
    p = random_regular_chain(np.random.default_rng(5), 5)
    pi = chain.stationary(p)
    mbar = mfpt.deleted_diagonal(mfpt.mfpt_from_fundamental(mfpt.fundamental(p, pi), pi))
    inv, trace = basis.invert_with_trace(mbar)
    assert (mbar @ inv).tolist() == nx.identity(5, True).tolist()
    assert trace.replay().tolist() == trace.final.tolist()


def test_pullback_oz():
    pull, factor, res = basis.equiprobable_pullback(exact(OZ_MBAR_INV), exact(OZ_PI), F(47, 15))
    assert pull.tolist() == [F(5, 32) * x for x in OZ_PI]
    assert factor == F(32, 5)
    assert res == 0


def test_pullback_two_state():
    pull, factor, res = basis.equiprobable_pullback(
        exact([[0, F(1, 2)], [F(1, 2), 0]]), exact([F(1, 2), F(1, 2)]), F(2))
    assert pull.tolist() == [F(1, 4), F(1, 4)]
    assert factor == 2 and (factor * pull).tolist() == [F(1, 2), F(1, 2)]
    assert res == 0


def test_pullback_uniform_for_independent_trials():
    p = chain.validate(exact([[F(1, 3)] * 3] * 3))
    pi = chain.stationary(p)
    m = mfpt.mfpt_direct(p)
    cert = basis.certificate(mfpt.deleted_diagonal(m), pi, F(3))
    assert len(set(cert.pullback_vector)) == 1


def test_pullback_requires_k_above_one():
    with pytest.raises(ValueError):
        basis.equiprobable_pullback(exact(OZ_MBAR_INV), exact(OZ_PI), F(1))


def test_certificate_corpus(corpus):
    for p in corpus[:60]:
        pi = chain.stationary(p)
        z = mfpt.fundamental(p, pi)
        mbar = mfpt.deleted_diagonal(mfpt.mfpt_from_fundamental(z, pi))
        k = sum(np.diagonal(z))
        cert = basis.certificate(mbar, pi, k)
        assert cert.reconstruction.tolist() == (mbar @ pi).tolist()
        assert len(set(cert.reconstruction)) == 1
        assert cert.reconstruction_residual == 0
        assert cert.pullback_residual == 0
        assert (cert.normalization_factor * cert.pullback_vector).tolist() == pi.tolist()
        assert cert.tableau.replay().tolist() == cert.tableau.final.tolist()


def test_format_tableau_layout():
    _, trace = basis.invert_with_trace(exact(OZ_MBAR))
    lines = basis.format_tableau(trace).split("\n")
    assert lines[0].split() == ["M1", "M2", "M3", "s1", "s2", "s3"]
    assert lines[1].split() == "[ 0 4 10/3 | 1 0 0 ] [ 1 0 0 | -3/20 3/16 3/20 ]".split()
    assert "->" in lines[2]
    assert lines[3].split() == "[ 10/3 4 0 | 0 0 1 ] [ 0 0 1 | 3/20 3/16 -3/20 ]".split()
