import numpy as np
import pytest

from chanmaj.conditional import (
    JointDist,
    cond_game_payoff,
    conditional_entropy,
    conditionally_majorizes,
    s_test,
    s_test_sides,
)
from chanmaj.majorization import shannon_entropy
from chanmaj.numerics import DomainError
from chanmaj.oracle import oracle_conditional_lp, search_s_violator

CORR = np.eye(3) / 3
PROD = np.outer(np.full(3, 1 / 3), [0.5, 0.3, 0.2])


def _random_joint(rng, n, m, sparse=False):
    w = rng.random((n, m)) ** rng.choice([1.0, 3.0])
    if sparse:
        w[rng.random((n, m)) < 0.3] = 0.0
        w[0, 0] += 1e-3
    return w / w.sum()


def _degrade(P, rng, m2):
    """Q with P ⪰ Q by construction: mix sorted columns, then scramble."""
    n, m = P.shape
    R = rng.dirichlet(np.ones(m2), size=m).T  # R[w, y], columns sum to 1
    Ps = -np.sort(-P, axis=0)
    Q = np.column_stack([Ps @ R[w] for w in range(m2)])
    for w in range(m2):
        D = sum(a * np.eye(n)[rng.permutation(n)] for a in rng.dirichlet(np.ones(3)))
        Q[:, w] = D @ Q[:, w]
    return Q


def test_joint_validation():
    with pytest.raises(DomainError):
        JointDist([[0.5, 0.6]])
    with pytest.raises(DomainError):
        JointDist([[1.2, -0.2]])
    J = JointDist([[0.5, 0.0], [0.5, 0.0]])
    assert J.zero_mass.tolist() == [False, True]
    assert np.allclose(J.conditionals[:, 1], 0.5)


def test_correlated_majorizes_everything(rng):
    assert conditionally_majorizes(CORR, PROD).holds
    for _ in range(20):
        assert conditionally_majorizes(CORR, _random_joint(rng, 3, 2)).holds


def test_uniform_conditionals_are_minimal(rng):
    for _ in range(20):
        P = _random_joint(rng, 3, int(rng.integers(1, 4)))
        r = rng.dirichlet(np.ones(2))
        assert conditionally_majorizes(P, np.outer(np.full(3, 1 / 3), r)).holds


def test_uniform_does_not_majorize_correlated():
    res = conditionally_majorizes(PROD, CORR)
    assert not res.holds
    lhs, rhs = s_test_sides(JointDist(PROD), JointDist(CORR), res.S)
    assert lhs < rhs - 1e-9
    assert not s_test(PROD, CORR, res.S)
    assert search_s_violator(PROD, CORR, 1000) is not None


def test_certificate_R_reproduces_dominance(rng):
    for _ in range(100):
        n, m = int(rng.integers(2, 5)), int(rng.integers(1, 4))
        P = _random_joint(rng, n, m, sparse=True)
        Q = _degrade(P, rng, int(rng.integers(1, 4)))
        res = conditionally_majorizes(P, Q)
        assert res.holds
        assert np.allclose(res.R.sum(0), 1, atol=1e-9) and np.all(res.R >= -1e-12)


def test_lp_agrees_with_oracle_and_refuters_bite(rng):
    negatives = 0
    for _ in range(200):
        n, m, m2 = int(rng.integers(2, 5)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
        P, Q = _random_joint(rng, n, m, sparse=True), _random_joint(rng, n, m2)
        res = conditionally_majorizes(P, Q)
        assert res.holds == oracle_conditional_lp(P, Q)
        if not res.holds:
            negatives += 1
            S = res.S
            assert np.all(S >= 0) and np.all(S <= 1) and np.all(np.diff(S, axis=0) <= 1e-12)
            lhs, rhs = s_test_sides(JointDist(P), JointDist(Q), S)
            assert lhs < rhs
    assert negatives > 10


def test_s_test_trivial_cases():
    assert s_test(PROD, CORR, np.zeros((3, 3)))
    S = np.zeros((3, 3))
    S[:, 0] = 1.0
    assert s_test(PROD, CORR, S)
    with pytest.raises(DomainError):
        s_test(PROD, CORR, np.ones((3, 2)))
    with pytest.raises(DomainError):
        s_test(PROD, CORR, np.array([[0, 0, 0], [1, 0, 0], [1, 0, 0]], float))


def test_game_payoffs():
    assert cond_game_payoff(PROD, np.array([[0.0], [0.0], [1.0]])) == pytest.approx(1.0)
    assert cond_game_payoff(CORR, np.array([[1.0], [0.0], [0.0]])) == pytest.approx(1.0)
    assert cond_game_payoff(PROD, np.array([[1.0], [0.0], [0.0]])) == pytest.approx(1 / 3)
    with pytest.raises(DomainError):
        cond_game_payoff(PROD, np.array([[1.0], [1.0], [0.0]]))


def test_game_monotonicity_and_entropy(rng):
    for _ in range(60):
        n, m = int(rng.integers(2, 5)), int(rng.integers(1, 4))
        P = _random_joint(rng, n, m)
        Q = _degrade(P, rng, int(rng.integers(1, 4)))
        assert conditionally_majorizes(P, Q).holds
        for _ in range(100):
            ell = int(rng.integers(1, 4))
            T = rng.dirichlet(np.ones(n), size=ell).T * rng.random(ell)
            assert cond_game_payoff(P, T) >= cond_game_payoff(Q, T) - 1e-8
        assert conditional_entropy(P) <= conditional_entropy(Q) + 1e-8


def test_conditional_entropy_values(rng):
    q, r = np.array([0.5, 0.3, 0.2]), np.array([0.6, 0.4])
    assert conditional_entropy(np.outer(q, r)) == pytest.approx(shannon_entropy(q))
    assert conditional_entropy(CORR) == pytest.approx(0.0)
    for _ in range(20):
        A, B = _random_joint(rng, 2, 3), _random_joint(rng, 3, 2)
        # rows (x, x'), columns (y, y')
        AB = np.kron(A, B)
        assert conditional_entropy(AB) == pytest.approx(conditional_entropy(A) + conditional_entropy(B), abs=1e-9)


def test_conditional_permutations_do_not_matter(rng):
    for _ in range(50):
        P, Q = _random_joint(rng, 3, 2), _random_joint(rng, 3, 2)
        Pp = np.column_stack([P[rng.permutation(3), y] for y in range(2)])
        assert conditionally_majorizes(P, Q).holds == conditionally_majorizes(Pp, Q).holds


def test_padding_rows():
    P = np.array([[0.5], [0.5]])
    Q = np.array([[0.4], [0.3], [0.3]])
    assert conditionally_majorizes(P, Q).holds
    assert not conditionally_majorizes(Q, P).holds
