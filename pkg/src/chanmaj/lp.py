"""Dense two-phase simplex with Bland's rule.

Feasibility problems ``A x (>=|<=|=) b, x >= 0`` return either a feasible
point or a Farkas certificate read off the phase-I duals.  For the ``>=``
form the certificate ``y >= 0`` satisfies ``y^T A <= 0`` and ``y^T b > 0``,
which rules out any ``x >= 0`` because ``0 >= y^T A x >= y^T b > 0``.
Rows of other senses carry the matching sign (``<=`` rows: ``y_i <= 0``,
``=`` rows: free).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .numerics import DEFAULT_TOL, DomainError, Tolerance

GE, LE, EQ = ">=", "<=", "="
_SENSES = (GE, LE, EQ)

# pivot / reduced-cost thresholds of the tableau arithmetic
_PIV_EPS = 1e-11
_RC_EPS = 1e-11
_MAX_PIVOTS = 200_000


class LpNumericError(RuntimeError):
    """The simplex produced a result that fails its own residual checks."""


class Unbounded(RuntimeError):
    """The objective is unbounded below on the feasible set."""


@dataclass
class FeasibilityProblem:
    """Linear system ``A x (sense) b`` with ``x >= 0``.

    ``sense`` is one of ``">="``, ``"<="``, ``"="`` or a per-row sequence.
    """

    A: np.ndarray
    b: np.ndarray
    sense: str | Sequence[str] = GE

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        m = self.A.shape[0]
        if self.b.size != m:
            raise DomainError(f"A has {m} rows but b has {self.b.size} entries")
        if isinstance(self.sense, str):
            self.sense = [self.sense] * m
        self.sense = list(self.sense)
        if len(self.sense) != m or any(s not in _SENSES for s in self.sense):
            raise DomainError("sense must be '>=', '<=', '=' or one per row")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b))):
            raise DomainError("non-finite problem data")

    @property
    def shape(self):
        return self.A.shape

    def residuals(self, x) -> np.ndarray:
        """Constraint violations (positive = violated) per row."""
        ax = self.A @ x
        out = np.empty_like(self.b)
        for i, s in enumerate(self.sense):
            if s == GE:
                out[i] = self.b[i] - ax[i]
            elif s == LE:
                out[i] = ax[i] - self.b[i]
            else:
                out[i] = abs(ax[i] - self.b[i])
        return out


@dataclass
class LpResult:
    """Outcome of :func:`solve_feasibility`.

    Exactly one of ``x`` (feasible point) and ``y`` (Farkas certificate) is set.
    """

    feasible: bool
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    pivots: int = 0

    @property
    def status(self) -> str:
        return "feasible" if self.feasible else "infeasible"


@dataclass
class LpOptimum:
    value: float
    x: np.ndarray
    dual: np.ndarray
    dual_value: float
    pivots: int = 0
    extra: dict = field(default_factory=dict)


def check_farkas(prob: FeasibilityProblem, y, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Verify an infeasibility certificate by plain arithmetic.

    Conditions: sign of ``y_i`` matches the row sense, ``y^T A <= 10 eps``
    componentwise and ``y^T b > 10 eps``.
    """
    y = np.asarray(y, float)
    if y.shape != prob.b.shape:
        return False
    eps = 10 * tol.abs_eps
    for yi, s in zip(y, prob.sense):
        if s == GE and yi < -eps:
            return False
        if s == LE and yi > eps:
            return False
    scale = max(1.0, float(np.max(np.abs(y), initial=0.0)))
    return bool(np.all(y @ prob.A <= eps * scale) and y @ prob.b > eps * scale)


class _Tableau:
    """Equality-form tableau ``[A_eq | I_art | rhs]`` with an objective row."""

    def __init__(self, A_eq, b_eq):
        m, n = A_eq.shape
        self.m, self.n = m, n
        self.T = np.zeros((m + 1, n + m + 1))
        self.T[:m, :n] = A_eq
        self.T[:m, n:n + m] = np.eye(m)
        self.T[:m, -1] = b_eq
        self.basis = list(range(n, n + m))
        self.pivots = 0

    def pivot(self, r, c):
        T = self.T
        T[r] /= T[r, c]
        col = T[:, c].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, c] = 0.0
        T[r, c] = 1.0
        self.basis[r] = c
        self.pivots += 1
        if self.pivots > _MAX_PIVOTS:
            raise LpNumericError("pivot limit exceeded")

    def set_objective(self, cost):
        """Objective row = reduced costs for ``cost`` given the current basis."""
        T = self.T
        row = np.concatenate([cost, [0.0]])
        for i, j in enumerate(self.basis):
            row -= cost[j] * T[i]
        T[-1] = row

    def run(self, allowed: np.ndarray):
        """Bland's rule: lowest-index entering column, lowest-index leaving tie."""
        T, m = self.T, self.m
        while True:
            rc = T[-1, :-1]
            cand = np.flatnonzero(allowed & (rc < -_RC_EPS))
            if cand.size == 0:
                return
            c = cand[0]
            colv = T[:m, c]
            rows = np.flatnonzero(colv > _PIV_EPS)
            if rows.size == 0:
                raise Unbounded("objective unbounded below")
            ratios = T[rows, -1] / colv[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-14 * max(1.0, abs(best))]
            r = min(ties, key=lambda i: self.basis[i])
            self.pivot(r, c)

    def drive_out_artificials(self):
        n = self.n
        for r in range(self.m):
            if self.basis[r] >= n:
                row = self.T[r, :n]
                nz = np.flatnonzero(np.abs(row) > 1e-9)
                if nz.size:
                    self.pivot(r, nz[0])
                # otherwise the row is redundant; its artificial stays at zero

    def primal(self):
        x = np.zeros(self.n + self.m)
        for i, j in enumerate(self.basis):
            x[j] = self.T[i, -1]
        return x

    def duals(self, art_cost):
        """Equality-form duals from the reduced costs of the artificial columns."""
        n, m = self.n, self.m
        return art_cost - self.T[-1, n:n + m]


def _equality_form(prob: FeasibilityProblem):
    """Append slack/surplus columns and flip rows so that ``b >= 0``."""
    A, b = prob.A, prob.b
    m, n = A.shape
    slack_cols = [i for i, s in enumerate(prob.sense) if s != EQ]
    S = np.zeros((m, len(slack_cols)))
    for k, i in enumerate(slack_cols):
        S[i, k] = -1.0 if prob.sense[i] == GE else 1.0
    A_eq = np.hstack([A, S])
    sign = np.where(b < 0, -1.0, 1.0)
    return A_eq * sign[:, None], b * sign, sign


def _zero_rows(prob: FeasibilityProblem, tol: Tolerance):
    """Split rows into kept ones and all-zero ones; check the latter's b-sign.

    Returns ``(keep_mask, certificate_or_None)``.
    """
    zero = np.all(prob.A == 0.0, axis=1)
    eps = 10 * tol.abs_eps
    for i in np.flatnonzero(zero):
        bi, s = prob.b[i], prob.sense[i]
        bad = (s == GE and bi > eps) or (s == LE and bi < -eps) or (s == EQ and abs(bi) > eps)
        if bad:
            y = np.zeros_like(prob.b)
            y[i] = 1.0 if bi > 0 else -1.0
            return ~zero, y
    return ~zero, None


def _phase_one(prob: FeasibilityProblem, tol: Tolerance):
    keep, cert = _zero_rows(prob, tol)
    if cert is not None:
        return None, None, None, cert, keep
    sub = FeasibilityProblem(prob.A[keep], prob.b[keep], [s for s, k in zip(prob.sense, keep) if k])
    A_eq, b_eq, sign = _equality_form(sub)
    tab = _Tableau(A_eq, b_eq)
    N = A_eq.shape[1]
    m = A_eq.shape[0]
    cost1 = np.concatenate([np.zeros(N), np.ones(m)])
    tab.set_objective(cost1)
    tab.run(np.ones(N + m, bool))
    w = -tab.T[-1, -1]
    scale = max(1.0, float(np.max(np.abs(sub.b), initial=0.0)))
    if w > 10 * tol.bound(scale):
        y_eq = tab.duals(np.ones(m))
        y = np.zeros_like(prob.b)
        y[keep] = y_eq * sign
        return None, None, None, y, keep
    tab.drive_out_artificials()
    return tab, sub, sign, None, keep


def solve_feasibility(prob: FeasibilityProblem, tol: Tolerance = DEFAULT_TOL) -> LpResult:
    """Find ``x >= 0`` with ``A x (sense) b`` or a Farkas certificate.

    Parameters
    ----------
    prob : FeasibilityProblem
    tol : Tolerance
        Feasible points satisfy every row within ``10 * tol.bound(|b|_inf)``.

    Returns
    -------
    LpResult
    """
    n = prob.A.shape[1]
    tab, sub, _, y, _ = _phase_one(prob, tol)
    if tab is None:
        if not check_farkas(prob, y, tol):
            raise LpNumericError("phase-I certificate failed verification")
        return LpResult(False, y=y)
    x = np.clip(tab.primal()[:n], 0.0, None)
    _assert_residuals(prob, x, tol)
    return LpResult(True, x=x, pivots=tab.pivots)


def _assert_residuals(prob, x, tol):
    scale = max(1.0, float(np.max(np.abs(prob.b), initial=0.0)))
    worst = float(np.max(prob.residuals(x), initial=0.0))
    if worst > 10 * tol.bound(scale):
        raise LpNumericError(f"feasible point violates a row by {worst:.3e}")


def solve_lp_min(c, prob: FeasibilityProblem, tol: Tolerance = DEFAULT_TOL) -> LpOptimum:
    """Minimise ``c^T x`` subject to ``prob`` and ``x >= 0``.

    The dual vector ``y`` (``>= 0`` on ``>=`` rows, ``<= 0`` on ``<=`` rows)
    satisfies ``A^T y <= c`` and ``b^T y`` equals the optimum; both facts are
    checked before returning.

    Raises
    ------
    Infeasible
        Carries the Farkas certificate in ``.result``.
    Unbounded
        Objective unbounded below.
    """
    c = np.asarray(c, float).reshape(-1)
    n = prob.A.shape[1]
    if c.size != n:
        raise DomainError("cost vector length does not match the number of variables")
    tab, sub, sign, y, keep = _phase_one(prob, tol)
    if tab is None:
        raise Infeasible(LpResult(False, y=y))
    N = tab.n
    m = tab.m
    cost2 = np.concatenate([c, np.zeros(N - n), np.zeros(m)])
    tab.set_objective(cost2)
    allowed = np.concatenate([np.ones(N, bool), np.zeros(m, bool)])
    tab.run(allowed)
    x = np.clip(tab.primal()[:n], 0.0, None)
    _assert_residuals(prob, x, tol)
    y_sub = tab.duals(np.zeros(m)) * sign
    dual = np.zeros_like(prob.b)
    dual[keep] = y_sub
    value = float(c @ x)
    dual_value = float(prob.b @ dual)
    _assert_duality(prob, c, dual, value, dual_value, tol)
    return LpOptimum(value, x, dual, dual_value, tab.pivots)


class Infeasible(RuntimeError):
    def __init__(self, result: LpResult):
        super().__init__("problem is infeasible")
        self.result = result


def _assert_duality(prob, c, y, value, dual_value, tol):
    scale = max(1.0, abs(value))
    slack = float(np.max(y @ prob.A - c, initial=-np.inf))
    # dual feasibility (weak duality premise) and sign pattern
    if slack > 1e-7 * max(1.0, np.max(np.abs(c), initial=0.0)):
        raise LpNumericError(f"dual infeasible by {slack:.3e}")
    for yi, s in zip(y, prob.sense):
        if (s == GE and yi < -1e-7) or (s == LE and yi > 1e-7):
            raise LpNumericError("dual sign pattern violated")
    if abs(value - dual_value) > 1e-6 * scale:
        raise LpNumericError(f"duality gap {abs(value - dual_value):.3e}")
