import numpy as np
import pytest

from chanmaj.numerics import DomainError
from chanmaj.oracle import (
    OracleConfig,
    brute_concave_majorant,
    oracle_blackwell_l1,
    oracle_channel_majorizes,
    oracle_majorizes,
    oracle_set_containment,
    oracle_upper_bound_minimality,
    random_doubly_stochastic,
    sample_upper_bounds,
)

from conftest import rand_prob

INC_P = np.array([16, 4, 4, 4, 4, 4, 0, 0]) / 36
INC_Q = np.array([8, 8, 8, 8, 1, 1, 1, 1]) / 36


def test_config_validation():
    with pytest.raises(DomainError):
        OracleConfig(grid_step=0.9)


def test_permutation_hull():
    assert oracle_majorizes([1, 0, 0], [1 / 3] * 3)
    p = np.array([0.5, 0.3, 0.2])
    assert oracle_majorizes(p, p[[2, 0, 1]]) and oracle_majorizes(p[[2, 0, 1]], p)
    with pytest.raises(DomainError):
        oracle_majorizes(INC_P, INC_Q)


def test_truncated_incomparable_pair_consistent():
    from chanmaj.majorization import majorizes

    p, q = INC_P[:4] / INC_P[:4].sum(), INC_Q[:4] / INC_Q[:4].sum()
    assert oracle_majorizes(p, q) == majorizes(p, q)
    assert oracle_majorizes(q, p) == majorizes(q, p)


def test_grid_oracle_examples():
    N = np.array([(0.7, 0.15, 0.15), (0.05, 0.45, 0.5)]).T
    M = np.array([[0.6, 0.3, 0.1]]).T
    assert oracle_channel_majorizes(N, M) is True
    assert oracle_channel_majorizes(N, N) is True
    assert oracle_channel_majorizes(M, N) is None
    with pytest.raises(DomainError):
        oracle_channel_majorizes(np.ones((2, 4)) / 2, M)


def test_set_containment_example():
    N = np.array([(0.7, 0.15, 0.15), (0.5, 0.45, 0.05)]).T
    M = np.array([[0.6, 0.3, 0.1]]).T
    assert oracle_set_containment(N, M)
    assert not oracle_set_containment(M, N)


def test_upper_bound_samples_are_upper_bounds(rng):
    from chanmaj.majorization import majorizes

    A = [rand_prob(rng, 4) for _ in range(3)]
    for q in sample_upper_bounds(A, 200, 1):
        assert all(majorizes(q, a) for a in A)
    assert oracle_upper_bound_minimality(A, [1, 0, 0, 0]) is False


def test_blackwell_l1_trivial():
    x = ((1.0, 0.0), (0.0, 1.0))
    y = ((0.7, 0.3), (0.4, 0.6))
    assert oracle_blackwell_l1(x, y) and not oracle_blackwell_l1(y, x)


def test_birkhoff_sampler(rng):
    D = random_doubly_stochastic(5, rng)
    assert np.allclose(D.sum(0), 1) and np.allclose(D.sum(1), 1) and np.all(D >= 0)


def test_brute_majorant_small():
    assert np.allclose(brute_concave_majorant([0.2, 0.9, 1.0]), [0.45, 0.9, 1.0])
