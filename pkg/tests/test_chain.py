from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kemeny_lab import chain
from kemeny_lab import numerics as nx
from kemeny_lab.errors import NotRegular, NotStochastic

from conftest import OZ, OZ_PI, exact, random_regular_chain


def test_validate_accepts_oz_and_identity(oz):
    assert oz.n == 3 and oz.exact
    ident = chain.validate(np.eye(2))
    assert not ident.exact


def test_validate_rejects_bad_row_sum():
    with pytest.raises(NotStochastic) as info:
        chain.validate(np.array([[0.5, 0.6], [0.5, 0.4]]))
    assert info.value.row == 0


def test_validate_rejects_negative_entry():
    with pytest.raises(NotStochastic) as info:
        chain.validate(exact([[1, 0], [F(3, 2), F(-1, 2)]]))
    assert info.value.row == 1


def test_validate_float_tolerance():
    chain.validate(np.array([[0.5, 0.5 + 5e-13], [1.0, 0.0]]))
    with pytest.raises(NotStochastic):
        chain.validate(np.array([[0.5, 0.5 + 5e-12], [1.0, 0.0]]))


def test_validated_matrix_is_read_only(oz):
    with pytest.raises(ValueError):
        oz.matrix[0, 0] = F(1)


def test_primitivity_oz_needs_square(oz):
    report = chain.primitivity(oz)
    assert report.is_regular and report.witness_exponent == 2
    assert report.checked_bound == 5
    # by hand: P(Oz)^2 is strictly positive
    assert all(x > 0 for x in (oz.matrix @ oz.matrix).flat)


@pytest.mark.parametrize("rows", [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
def test_primitivity_fails_for_identity_and_flip(rows):
    report = chain.primitivity(chain.validate(exact(rows)))
    assert not report.is_regular and report.witness_exponent is None


def test_primitivity_wielandt_extremal_chain():
    # the Wielandt matrix attains the (n-1)^2 + 1 bound
    n = 4
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = 1
    rows[n - 1][0] = rows[n - 1][1] = F(1, 2)
    report = chain.primitivity(chain.validate(exact(rows)))
    assert report.is_regular and report.witness_exponent == (n - 1) ** 2 + 1


def test_stationary_oz(oz):
    assert chain.stationary(oz).tolist() == OZ_PI


def test_stationary_uniform_two_state(two_state):
    assert chain.stationary(two_state).tolist() == [F(1, 2), F(1, 2)]


def test_stationary_rejects_non_regular():
    with pytest.raises(NotRegular):
        chain.stationary(chain.validate(exact([[0, 1], [1, 0]])))


def test_stationary_random_float_matches_power_iteration():
    rng = np.random.default_rng(11)
    for _ in range(10):
        p = random_regular_chain(rng, 5, exact_mode=False)
        pi = chain.stationary(p)
        oracle = np.full(5, 0.2)
        for _ in range(200):
            oracle = oracle @ p.matrix
        assert np.max(np.abs(pi - oracle)) < 1e-10
        assert chain.stationary_residual(p, pi) < 1e-10


def test_power_cases(oz):
    assert chain.power(oz, 1).matrix.tolist() == oz.matrix.tolist()
    flip = chain.validate(exact([[0, 1], [1, 0]]))
    assert chain.power(flip, 2).matrix.tolist() == [[1, 0], [0, 1]]
    assert chain.power(oz, 2).matrix.tolist() == [
        [F(7, 16), F(3, 16), F(3, 8)],
        [F(3, 8), F(1, 4), F(3, 8)],
        [F(3, 8), F(3, 16), F(7, 16)],
    ]
    far = chain.power(chain.validate(nx.to_float(exact(OZ))), 60)
    assert np.allclose(far.matrix, [[0.4, 0.2, 0.4]] * 3, atol=1e-14)


def test_power_rejects_zero_exponent(oz):
    with pytest.raises(ValueError):
        chain.power(oz, 0)


def test_limit_projector_cases():
    lim = chain.limit_projector(exact(OZ_PI))
    assert lim.tolist() == [OZ_PI] * 3
    half = chain.limit_projector(exact([F(1, 2), F(1, 2)]))
    assert half.tolist() == [[F(1, 2)] * 2] * 2


def test_limit_projector_invariants_exact(oz):
    pi = chain.stationary(oz)
    lim = chain.limit_projector(pi)
    e = nx.ones(3, True)
    assert (lim @ lim).tolist() == lim.tolist()
    assert (lim @ e).tolist() == e.tolist()
    assert (lim.T @ pi).tolist() == pi.tolist()
    assert (oz.matrix @ lim).tolist() == lim.tolist()
    assert (lim @ oz.matrix).tolist() == lim.tolist()


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=2**32 - 1))
def test_chain_properties_random_regular(n, seed):
    p = random_regular_chain(np.random.default_rng(seed), n)
    pi = chain.stationary(p)
    assert sum(pi) == 1 and all(x > 0 for x in pi)
    lim = chain.limit_projector(pi)
    assert (p.matrix @ lim).tolist() == lim.tolist() == (lim @ p.matrix).tolist()
    for m in (2, 3):
        pm = chain.power(p, m)
        assert chain.stationary(pm).tolist() == pi.tolist()


def test_float_powers_converge_to_projector(corpus):
    for p in corpus[:40]:
        pf = chain.validate(nx.to_float(p.matrix))
        if pf.n > 8:
            continue
        pi = chain.stationary(pf)
        gap = np.max(np.sum(np.abs(chain.power(pf, 200).matrix - chain.limit_projector(pi)), axis=1))
        assert gap <= 1e-10
