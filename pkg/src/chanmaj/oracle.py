"""Slow reference implementations for cross-checking.

Everything here is built on ``scipy.optimize.linprog``, permutation
enumeration or grids.  The only production helper used is the Ky Fan
profile.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .numerics import DomainError, ky_fan_profile


@dataclass(frozen=True)
class OracleConfig:
    grid_step: float = 1e-2
    max_dim: int = 4

    def __post_init__(self):
        if not 0 < self.grid_step <= 0.5:
            raise DomainError("grid_step must lie in (0, 0.5]")


DEFAULT_CONFIG = OracleConfig()
_SLACK = 1e-9


def _vec(v):
    return np.asarray(v, dtype=float).reshape(-1)


def _pad2(p, q):
    n = max(p.size, q.size)
    return np.pad(p, (0, n - p.size)), np.pad(q, (0, n - q.size))


def _feasible(A_eq, b_eq, A_ub=None, b_ub=None) -> bool:
    nvar = A_eq.shape[1]
    res = linprog(np.zeros(nvar), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * nvar, method="highs")
    return res.status == 0


def _in_hull(points: np.ndarray, target: np.ndarray) -> bool:
    """Whether ``target`` is a convex combination of the columns of ``points``."""
    k = points.shape[1]
    A = np.vstack([points, np.ones((1, k))])
    b = np.concatenate([target, [1.0]])
    return _feasible(A, b)


def _orbit(p: np.ndarray) -> np.ndarray:
    return np.array(sorted(set(itertools.permutations(p.tolist())))).T


def oracle_majorizes(p, q, cfg: OracleConfig = DEFAULT_CONFIG) -> bool:
    """``q`` in the convex hull of all permutations of ``p``."""
    p, q = _pad2(_vec(p), _vec(q))
    if p.size > cfg.max_dim:
        raise DomainError(f"dimension {p.size} exceeds the oracle cap")
    return _in_hull(_orbit(p), q)


def _dominates(a, b, slack=_SLACK) -> bool:
    return bool(np.all(ky_fan_profile(a) >= ky_fan_profile(b) - slack))


def _simplex_grid(m: int, step: float) -> np.ndarray:
    steps = int(round(1.0 / step))
    pts = [c for c in itertools.product(range(steps + 1), repeat=m - 1) if sum(c) <= steps]
    return np.array([list(c) + [steps - sum(c)] for c in pts], dtype=float) / steps


def oracle_channel_majorizes(N, M, cfg: OracleConfig = DEFAULT_CONFIG):
    """Grid search over mixing weights of the sorted columns of N.

    Returns True when every target column is dominated by some grid mixture,
    otherwise None (the grid may simply be too coarse).
    """
    N, M = np.atleast_2d(np.asarray(N, float)), np.atleast_2d(np.asarray(M, float))
    n = max(N.shape[0], M.shape[0])
    N = np.vstack([N, np.zeros((n - N.shape[0], N.shape[1]))])
    M = np.vstack([M, np.zeros((n - M.shape[0], M.shape[1]))])
    if N.shape[1] > 3 or n > cfg.max_dim:
        raise DomainError("instance exceeds the grid oracle caps")
    Ns = -np.sort(-N, axis=0)
    mixes = _simplex_grid(Ns.shape[1], cfg.grid_step) @ Ns.T  # each row is a sorted mixture
    prof = np.cumsum(mixes, axis=1)
    for w in range(M.shape[1]):
        target = ky_fan_profile(M[:, w])
        if not np.any(np.all(prof >= target - _SLACK, axis=1)):
            return None
    return True


def oracle_channel_lp(N, M) -> bool:
    """Exact channel decision with linprog (one LP per target)."""
    N, M = np.atleast_2d(np.asarray(N, float)), np.atleast_2d(np.asarray(M, float))
    n = max(N.shape[0], M.shape[0])
    N = np.vstack([N, np.zeros((n - N.shape[0], N.shape[1]))])
    M = np.vstack([M, np.zeros((n - M.shape[0], M.shape[1]))])
    prof = np.cumsum(-np.sort(-N, axis=0), axis=0)
    m = N.shape[1]
    for w in range(M.shape[1]):
        res = linprog(np.zeros(m), A_ub=-prof, b_ub=-ky_fan_profile(M[:, w]) + _SLACK,
                      A_eq=np.ones((1, m)), b_eq=[1.0], bounds=[(0, None)] * m, method="highs")
        if res.status != 0:
            return False
    return True


def oracle_set_containment(N, M, cfg: OracleConfig = DEFAULT_CONFIG) -> bool:
    """Every ``q_w`` lies in the hull of all permutations of all ``p_x``."""
    N, M = np.atleast_2d(np.asarray(N, float)), np.atleast_2d(np.asarray(M, float))
    n = max(N.shape[0], M.shape[0])
    if n > cfg.max_dim:
        raise DomainError("instance exceeds the oracle cap")
    N = np.vstack([N, np.zeros((n - N.shape[0], N.shape[1]))])
    M = np.vstack([M, np.zeros((n - M.shape[0], M.shape[1]))])
    pts = np.hstack([_orbit(N[:, x]) for x in range(N.shape[1])])
    return all(_in_hull(pts, M[:, w]) for w in range(M.shape[1]))


def sample_upper_bounds(A, count: int = 1000, seed=0) -> np.ndarray:
    """Random vectors majorizing every member of ``A``.

    Each sample is ``lam e_1 + (1 - lam) q0`` with ``q0`` a sorted Dirichlet
    draw and ``lam`` the smallest weight that works; every other sample adds
    a random extra shift toward ``e_1``.
    """
    A = [_vec(a) for a in A]
    n = max(a.size for a in A)
    top = np.max([np.cumsum(np.sort(np.pad(a, (0, n - a.size)))[::-1]) for a in A], axis=0)
    rng = np.random.default_rng(seed)
    e1 = np.eye(n)[0]
    out = []
    for i in range(count):
        q0 = np.sort(rng.dirichlet(np.full(n, rng.choice([0.3, 1.0, 3.0]))))[::-1]
        Q = np.cumsum(q0)
        open_ = Q < 1 - 1e-15
        need = np.max((top[open_] - Q[open_]) / (1 - Q[open_]), initial=0.0)
        lam = min(1.0, max(0.0, need))
        if i % 2:
            lam += (1 - lam) * rng.random() * 0.2
        out.append(lam * e1 + (1 - lam) * q0)
    return np.array(out)


def oracle_upper_bound_minimality(A, candidate, count: int = 1000, seed=0):
    """Whether every sampled upper bound of ``A`` majorizes ``candidate``.

    Returns None for a candidate that is not nonincreasing.
    """
    c = _vec(candidate)
    if np.any(np.diff(c) > _SLACK):
        return None
    return all(_dominates(q, c, 1e-9) for q in sample_upper_bounds(A, count, seed))


def oracle_blackwell_l1(x, y) -> bool:
    """``||p - t q||_1 >= ||p' - t q'||_1`` for all ``t >= 0``.

    Both sides are piecewise linear in t with breakpoints at the finite
    likelihood ratios, so the check runs on those ratios, zero, and one
    point past the last breakpoint.
    """
    (p, q), (p2, q2) = [tuple(map(_vec, z)) for z in (x, y)]
    ratios = [pi / qi for a, b in ((p, q), (p2, q2)) for pi, qi in zip(a, b) if qi > 0]
    ts = sorted(set([0.0] + ratios))
    ts.append(2 * ts[-1] + 1.0)
    for t in ts:
        if np.abs(p - t * q).sum() < np.abs(p2 - t * q2).sum() - 1e-9 * max(1.0, t):
            return False
    return True


def oracle_stochastic_map(x, y) -> bool:
    """Column-stochastic ``E`` with ``E p = p'`` and ``E q = q'`` (linprog)."""
    (p, q), (p2, q2) = [tuple(map(_vec, z)) for z in (x, y)]
    n, n2 = p.size, p2.size
    rows, rhs = [], []
    for v, t in ((p, p2), (q, q2)):
        for i in range(n2):
            r = np.zeros(n2 * n)
            r[i * n:(i + 1) * n] = v
            rows.append(r)
            rhs.append(t[i])
    for j in range(n):
        r = np.zeros(n2 * n)
        r[j::n] = 1.0
        rows.append(r)
        rhs.append(1.0)
    A, b = np.array(rows), np.array(rhs)
    return _feasible(A, b)


def oracle_conditional_lp(P, Q) -> bool:
    """Convex-sum test for conditional majorization with linprog.

    Variables ``r[w, y]``; each target column ``q_w`` must be dominated by
    ``sum_y r[w, y] p_y↓`` and each y-column of r must sum to 1.
    """
    P, Q = np.atleast_2d(np.asarray(P, float)), np.atleast_2d(np.asarray(Q, float))
    n = max(P.shape[0], Q.shape[0])
    P = np.vstack([P, np.zeros((n - P.shape[0], P.shape[1]))])
    Q = np.vstack([Q, np.zeros((n - Q.shape[0], Q.shape[1]))])
    m, m2 = P.shape[1], Q.shape[1]
    prof = np.cumsum(-np.sort(-P, axis=0), axis=0)
    A_ub = np.zeros((n * m2, m * m2))
    b_ub = np.zeros(n * m2)
    for w in range(m2):
        A_ub[w * n:(w + 1) * n, w * m:(w + 1) * m] = -prof
        b_ub[w * n:(w + 1) * n] = -ky_fan_profile(Q[:, w]) + _SLACK
    A_eq = np.zeros((m, m * m2))
    for w in range(m2):
        A_eq[:, w * m:(w + 1) * m] = np.eye(m)
    res = linprog(np.zeros(m * m2), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=np.ones(m),
                  bounds=[(0, None)] * (m * m2), method="highs")
    return res.status == 0


def random_sorted_substochastic(n: int, cols: int, rng) -> np.ndarray:
    """Random ``S`` with nonincreasing columns in [0, 1]."""
    return -np.sort(-rng.random((n, cols)) ** rng.choice([0.5, 1.0, 3.0]), axis=0)


def search_s_violator(P, Q, trials: int = 1000, seed=0):
    """Random search for S violating the conditional S-inequality."""
    P, Q = np.atleast_2d(np.asarray(P, float)), np.atleast_2d(np.asarray(Q, float))
    Ps, Qs = -np.sort(-P, axis=0), -np.sort(-Q, axis=0)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        S = random_sorted_substochastic(P.shape[0], Q.shape[1], rng)
        if np.sum(np.max(S.T @ Ps, axis=0)) < np.sum(S * Qs) - _SLACK:
            return S
    return None


def oracle_lp_feasible(A, b, sense) -> bool:
    """Feasibility of ``A x (sense) b, x >= 0`` with linprog."""
    A, b = np.atleast_2d(np.asarray(A, float)), _vec(b)
    senses = [sense] * b.size if isinstance(sense, str) else list(sense)
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for row, rhs, s in zip(A, b, senses):
        if s == "<=":
            ub_rows.append(row), ub_rhs.append(rhs)
        elif s == ">=":
            ub_rows.append(-row), ub_rhs.append(-rhs)
        else:
            eq_rows.append(row), eq_rhs.append(rhs)
    res = linprog(np.zeros(A.shape[1]),
                  A_ub=np.array(ub_rows) if ub_rows else None, b_ub=ub_rhs or None,
                  A_eq=np.array(eq_rows) if eq_rows else None, b_eq=eq_rhs or None,
                  bounds=[(0, None)] * A.shape[1], method="highs")
    return res.status == 0


def random_doubly_stochastic(n: int, rng, terms: int = 4) -> np.ndarray:
    """Random convex combination of permutation matrices."""
    w = rng.dirichlet(np.ones(terms))
    return sum(wi * np.eye(n)[rng.permutation(n)] for wi in w)


def brute_concave_majorant(points) -> np.ndarray:
    """Majorant at each k as the best chord over anchors ``i <= k <= j``."""
    y = np.concatenate([[0.0], _vec(points)])
    n = y.size - 1
    out = np.empty(n)
    for k in range(1, n + 1):
        best = y[k]
        for i in range(0, k + 1):
            for j in range(k, n + 1):
                if i < j:
                    best = max(best, y[i] + (y[j] - y[i]) * (k - i) / (j - i))
        out[k - 1] = best
    return out
