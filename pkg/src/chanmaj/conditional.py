"""Conditional majorization of joint distributions of (X, Y), with X the
uncertain system and Y the side information."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp import GE, FeasibilityProblem, solve_feasibility
from .majorization import shannon_entropy
from .numerics import (
    DEFAULT_TOL,
    DomainError,
    InternalConsistencyError,
    Tolerance,
    ky_fan_profile,
    profile_dominates,
)


class JointDist:
    """Joint distribution stored as an n x m array (rows X, columns Y).

    Column ``y`` is the unnormalised conditional ``p_y = sum_x p_xy e_x``.
    Zero-mass columns get a uniform conditional and are flagged in
    ``zero_mass``.
    """

    def __init__(self, weights, tol: Tolerance = DEFAULT_TOL):
        w = np.atleast_2d(np.asarray(weights, dtype=float))
        if w.ndim != 2 or w.size == 0 or not np.all(np.isfinite(w)):
            raise DomainError("weights must be a finite nonempty n x m array")
        if np.any(w < -tol.abs_eps):
            raise DomainError("joint weights must be nonnegative")
        w = np.where(w < 0, 0.0, w)
        if abs(w.sum() - 1.0) > max(w.size * tol.abs_eps, tol.bound(1.0)):
            raise DomainError(f"joint weights sum to {w.sum():.12g}, not 1")
        w.setflags(write=False)
        self.weights = w

    @classmethod
    def product(cls, px, py) -> "JointDist":
        return cls(np.outer(px, py))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def m(self) -> int:
        return self.weights.shape[1]

    @property
    def column_mass(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    @property
    def zero_mass(self) -> np.ndarray:
        return self.column_mass == 0

    @property
    def conditionals(self) -> np.ndarray:
        mass = self.column_mass
        out = np.full_like(self.weights, 1.0 / self.n)
        nz = mass > 0
        out[:, nz] = self.weights[:, nz] / mass[nz]
        return out

    def sorted_columns(self) -> np.ndarray:
        return -np.sort(-self.weights, axis=0)

    def padded(self, n: int) -> "JointDist":
        if n < self.n:
            raise DomainError("cannot remove rows")
        return JointDist(np.vstack([self.weights, np.zeros((n - self.n, self.m))]))

    def __repr__(self):
        return f"JointDist({self.weights.tolist()})"


def _joint(P, tol):
    return P if isinstance(P, JointDist) else JointDist(P, tol)


def _lower_ones(n):
    return np.tril(np.ones((n, n)))


@dataclass
class CondResult:
    """Decision plus certificate.

    ``R`` (m' x m, column-stochastic) on a positive answer; ``S`` (n x m',
    nonincreasing columns in [0, 1]) violating the S-inequality otherwise.
    """

    holds: bool
    R: np.ndarray | None = None
    S: np.ndarray | None = None
    farkas: np.ndarray | None = None

    def __bool__(self):
        return self.holds


def _common_rows(P, Q):
    n = max(P.n, Q.n)
    return P.padded(n), Q.padded(n)


def conditionally_majorizes(P, Q, tol: Tolerance = DEFAULT_TOL) -> CondResult:
    """Decide ``P ⪰_X Q`` with one linear program.

    Looks for ``r_{y'} >= 0`` (one block per column of Q) with
    ``L P↓ r_{y'} >= L q_{y'}↓`` and ``sum_{y'} r_{y'} <= 1``, where L takes
    prefix sums.  A feasible point is rescaled column-wise to a stochastic
    R.  On infeasibility the Farkas vector ``(v_1..v_{m'}, t)`` gives the
    refuter ``s_{y'} = L^T v_{y'}`` (suffix sums), scaled into [0, 1].
    """
    P, Q = _common_rows(_joint(P, tol), _joint(Q, tol))
    n = P.n
    live = np.flatnonzero(~P.zero_mass)
    Ps = P.sorted_columns()[:, live]
    Qs = Q.sorted_columns()
    m, m2 = live.size, Q.m
    L = _lower_ones(n)
    LP = L @ Ps
    A = np.zeros((n * m2 + m, m * m2))
    b = np.zeros(n * m2 + m)
    for w in range(m2):
        A[w * n:(w + 1) * n, w * m:(w + 1) * m] = LP
        b[w * n:(w + 1) * n] = L @ Qs[:, w]
        A[n * m2:, w * m:(w + 1) * m] = -np.eye(m)
    b[n * m2:] = -1.0
    prob = FeasibilityProblem(A, b, GE)
    res = solve_feasibility(prob, tol)
    if res.feasible:
        r = res.x.reshape(m2, m)  # r[w, y]
        R = np.zeros((m2, P.m))
        for k, y in enumerate(live):
            col = r[:, k]
            c = col.sum()
            R[:, y] = col / c if c > 0 else np.eye(m2)[0]
        R[:, P.zero_mass] = np.eye(m2)[0][:, None]
        if not _check_R(P, Q, R, tol):
            raise InternalConsistencyError("conditional certificate failed verification")
        return CondResult(True, R=R)
    y = res.y
    V = y[:n * m2].reshape(m2, n)
    S = np.column_stack([L.T @ V[w] for w in range(m2)])  # suffix sums
    top = S.sum(axis=0).max()
    S = S / top if top > 0 else S
    S = np.clip(S / max(1.0, S.max()), 0.0, 1.0)
    return CondResult(False, S=S, farkas=y)


def _check_R(P, Q, R, tol):
    if np.any(R < -tol.abs_eps) or not tol.eq(R.sum(axis=0), 1.0):
        return False
    Ps = P.sorted_columns()
    for w in range(Q.m):
        mix = Ps @ R[w]
        if not profile_dominates(np.cumsum(np.sort(mix)[::-1]), ky_fan_profile(Q.weights[:, w]), _loose(tol)):
            return False
    return True


def _loose(tol):
    return Tolerance(100 * tol.abs_eps, 100 * tol.rel_eps)


def s_test(P, Q, S, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Evaluate ``sum_y max_w s_w . p_y↓  >=  sum_w s_w . q_w↓`` for one S.

    ``S`` is n x m' with nonincreasing columns and entries in [0, 1].
    """
    P, Q = _common_rows(_joint(P, tol), _joint(Q, tol))
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if S.shape != (P.n, Q.m):
        raise DomainError(f"S must be {P.n} x {Q.m}")
    eps = tol.bound(1.0)
    if np.any(S < -eps) or np.any(S > 1 + eps):
        raise DomainError("S entries must lie in [0, 1]")
    if np.any(np.diff(S, axis=0) > eps):
        raise DomainError("S columns must be nonincreasing")
    lhs, rhs = s_test_sides(P, Q, S)
    return bool(lhs >= rhs - eps)


def s_test_sides(P, Q, S):
    """Both sides of the S-inequality, without validation."""
    Ps, Qs = P.sorted_columns(), Q.sorted_columns()
    lhs = float(np.sum(np.max(S.T @ Ps, axis=0)))
    rhs = float(np.sum(S * Qs))
    return lhs, rhs


def cond_game_payoff(P, T, tol: Tolerance = DEFAULT_TOL) -> float:
    """Winning chance ``sum_y max_w s_w . p_y↓`` with ``s_{xw} = sum_{k>=x} t_{k|w}``.

    ``T`` is n x l, nonnegative, column sums at most 1.
    """
    P = _joint(P, tol)
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if T.shape[0] != P.n:
        raise DomainError(f"game must have {P.n} rows")
    if np.any(T < -tol.abs_eps) or np.any(T.sum(axis=0) > 1 + tol.bound(1.0)):
        raise DomainError("game columns must be substochastic")
    S = np.cumsum(T[::-1], axis=0)[::-1]
    return float(np.sum(np.max(S.T @ P.sorted_columns(), axis=0)))


def conditional_entropy(P, tol: Tolerance = DEFAULT_TOL) -> float:
    """``H(X|Y) = sum_y p_y H(p_{|y})`` in bits; empty columns contribute 0."""
    P = _joint(P, tol)
    mass, cond = P.column_mass, P.conditionals
    return float(sum(mass[y] * shannon_entropy(cond[:, y], tol) for y in range(P.m) if mass[y] > 0))
