"""Relative majorization of dichotomies ``(p, q)``: standard form, lower
Lorenz curves, Blackwell decision, hypothesis-testing errors and
divergences (bits)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lp import EQ, GE, FeasibilityProblem, solve_feasibility, solve_lp_min
from .majorization import as_prob
from .numerics import (
    DEFAULT_TOL,
    DomainError,
    InternalConsistencyError,
    Tolerance,
    cumulative,
    pad_common,
)


@dataclass(frozen=True)
class DichotomyPair:
    """Two probability vectors of a common (padded) dimension."""

    p: np.ndarray
    q: np.ndarray

    @classmethod
    def of(cls, p, q, tol: Tolerance = DEFAULT_TOL) -> "DichotomyPair":
        p, q = pad_common(as_prob(p, tol, "p"), as_prob(q, tol, "q"))
        return cls(p, q)

    @property
    def n(self) -> int:
        return self.p.size


def _pair(x, tol) -> DichotomyPair:
    if isinstance(x, DichotomyPair):
        return x
    p, q = x
    return DichotomyPair.of(p, q, tol)


@dataclass(frozen=True)
class StdPair:
    """Pair in standard form: no joint zeros, ratios ``p/q`` nonincreasing.

    ``index`` maps each position back to the original coordinate.
    """

    p: np.ndarray
    q: np.ndarray
    ratios: np.ndarray
    index: np.ndarray


def _ratios(p, q):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(q > 0, p / np.where(q > 0, q, 1.0), np.inf)


def standardize_pair(pair, tol: Tolerance = DEFAULT_TOL) -> StdPair:
    """Drop joint zeros and sort by ratio ``p_x/q_x`` descending.

    Entries with ``q_x = 0 < p_x`` have ratio inf and come first; ties keep
    the original index order.
    """
    pair = _pair(pair, tol)
    keep = np.flatnonzero((pair.p > 0) | (pair.q > 0))
    p, q = pair.p[keep], pair.q[keep]
    r = _ratios(p, q)
    order = np.argsort(-r, kind="stable")
    return StdPair(p[order], q[order], r[order], keep[order])


def merge_equal_ratios(sp: StdPair, tol: Tolerance = DEFAULT_TOL) -> StdPair:
    """Merge neighbouring entries with equal ratio, pairwise left to right.

    The merged pair is equivalent to the input and has the same Lorenz
    curve as a point set.
    """
    p, q, idx = list(sp.p), list(sp.q), [[int(i)] for i in sp.index]
    k = 0
    while k + 1 < len(p):
        # equal ratio  <=>  p_k q_{k+1} == p_{k+1} q_k  (handles inf)
        if abs(p[k] * q[k + 1] - p[k + 1] * q[k]) <= tol.bound(1.0) and (q[k] > 0) == (q[k + 1] > 0):
            p[k] += p.pop(k + 1)
            q[k] += q.pop(k + 1)
            idx[k] += idx.pop(k + 1)
        else:
            k += 1
    p, q = np.array(p), np.array(q)
    return StdPair(p, q, _ratios(p, q), np.array([g[0] for g in idx]))


@dataclass(frozen=True)
class LorenzCurve:
    """Piecewise-linear lower Lorenz curve through ``vertices`` (k+1 x 2)."""

    vertices: np.ndarray

    @property
    def a(self):
        return self.vertices[:, 0]

    @property
    def b(self):
        return self.vertices[:, 1]

    def value_at(self, a: float) -> float:
        """Lowest curve height at abscissa ``a`` (bottom of vertical runs)."""
        xs, ys = self.a, self.b
        if a <= xs[0]:
            return float(ys[0])
        if a >= xs[-1]:
            return float(ys[np.flatnonzero(xs >= xs[-1])[0]])
        k = int(np.searchsorted(xs, a, side="left"))
        if xs[k] == a:
            return float(ys[k])
        x0, x1, y0, y1 = xs[k - 1], xs[k], ys[k - 1], ys[k]
        return float(y0 + (y1 - y0) * (a - x0) / (x1 - x0))


def lower_lorenz(sp, simplify: bool = False, tol: Tolerance = DEFAULT_TOL) -> LorenzCurve:
    """Vertices ``(sum_{x<=k} p_x, sum_{x<=k} q_x)`` of a standard-form pair."""
    if not isinstance(sp, StdPair):
        sp = standardize_pair(sp, tol)
    if simplify:
        sp = merge_equal_ratios(sp, tol)
    a, b = cumulative(sp.p), cumulative(sp.q)
    # once a vector's mass is exhausted its coordinate is exactly 1
    a[np.flatnonzero(sp.p > 0)[-1] + 1:] = 1.0
    b[np.flatnonzero(sp.q > 0)[-1] + 1:] = 1.0
    return LorenzCurve(np.column_stack([a, b]))


@dataclass
class RelativeResult:
    holds: bool
    stochastic: np.ndarray | None = None  # E with E p = p', E q = q'
    violation: tuple[float, float, float] | None = None  # (a, f_x(a), f_y(a))

    def __bool__(self):
        return self.holds


def lorenz_contains(x, y, tol: Tolerance = DEFAULT_TOL):
    """Testing-region containment via the lower curves.

    Returns ``(True, None)`` or ``(False, (a, f_x(a), f_y(a)))`` for the
    first abscissa where the curve of x lies above that of y.
    """
    cx, cy = lower_lorenz(_pair(x, tol), tol=tol), lower_lorenz(_pair(y, tol), tol=tol)
    for a in np.unique(np.concatenate([cx.a, cy.a])):
        fx, fy = cx.value_at(a), cy.value_at(a)
        if fx > fy + tol.bound(1.0):
            return False, (float(a), fx, fy)
    return True, None


def stochastic_map_lp(x, y, tol: Tolerance = DEFAULT_TOL):
    """Search for a column-stochastic ``E`` (n' x n) with ``E p = p'``, ``E q = q'``."""
    x, y = _pair(x, tol), _pair(y, tol)
    n, n2 = x.n, y.n
    # variables: E flattened row-major, e_{ij} at i*n + j
    rows, rhs = [], []
    for vec, target in ((x.p, y.p), (x.q, y.q)):
        for i in range(n2):
            r = np.zeros(n2 * n)
            r[i * n:(i + 1) * n] = vec
            rows.append(r)
            rhs.append(target[i])
    for j in range(n):
        r = np.zeros(n2 * n)
        r[j::n] = 1.0
        rows.append(r)
        rhs.append(1.0)
    res = solve_feasibility(FeasibilityProblem(np.array(rows), np.array(rhs), EQ), tol)
    return res.x.reshape(n2, n) if res.feasible else None


def relatively_majorizes(x, y, tol: Tolerance = DEFAULT_TOL, certificate: bool = True) -> RelativeResult:
    """Decide ``(p, q) ⪰ (p', q')`` by Lorenz-curve containment.

    Parameters
    ----------
    x, y : DichotomyPair or (p, q) tuples
    certificate : bool
        On a positive answer also solve for the stochastic map E.

    Returns
    -------
    RelativeResult
        ``stochastic`` holds E when requested; ``violation`` holds the failing
        abscissa when the answer is negative.
    """
    ok, where = lorenz_contains(x, y, tol)
    if not ok:
        return RelativeResult(False, violation=where)
    E = None
    if certificate:
        E = stochastic_map_lp(x, y, tol)
        if E is None:
            raise InternalConsistencyError("Lorenz containment holds but no stochastic map was found")
    return RelativeResult(True, stochastic=E)


def beta_star(pair, eps: float, method: str = "curve", tol: Tolerance = DEFAULT_TOL) -> float:
    """Smallest type-II error ``t.q`` subject to ``t.p >= 1 - eps``, ``0 <= t <= 1``.

    ``method="curve"`` reads the lower Lorenz curve at ``1 - eps``;
    ``method="lp"`` solves the linear program directly.
    """
    if not 0.0 <= eps <= 1.0:
        raise DomainError("eps must lie in [0, 1]")
    pair = _pair(pair, tol)
    if method == "curve":
        return lower_lorenz(pair, tol=tol).value_at(1.0 - eps)
    if method != "lp":
        raise DomainError(f"unknown method {method!r}")
    n = pair.n
    A = np.vstack([pair.p, -np.eye(n)])
    b = np.concatenate([[1.0 - eps], -np.ones(n)])
    return solve_lp_min(pair.q, FeasibilityProblem(A, b, GE), tol).value


def f_divergence(p, q, f: Callable[[float], float], f_zero: float | None = None,
                 slope_inf: float | None = None, tol: Tolerance = DEFAULT_TOL) -> float:
    """``sum_x q_x f(p_x / q_x)`` with the limit conventions for zeros.

    Parameters
    ----------
    f : callable
        Convex on (0, inf) with ``f(1) = 0`` (checked).
    f_zero : float, optional
        ``lim_{r->0+} f(r)``; defaults to ``f(0.0)``.
    slope_inf : float, optional
        ``lim_{s->0+} s f(1/s)``, used where ``q_x = 0 < p_x``; defaults to inf.
    """
    p, q = pad_common(as_prob(p, tol, "p"), as_prob(q, tol, "q"))
    if abs(f(1.0)) > tol.bound(1.0):
        raise DomainError("f(1) must be 0")
    total = 0.0
    for px, qx in zip(p, q):
        if qx > 0:
            total += qx * (f(px / qx) if px > 0 else (f(0.0) if f_zero is None else f_zero))
        elif px > 0:
            s = np.inf if slope_inf is None else slope_inf
            total += px * s
    return float(total)


def _kl_f(r):
    return r * np.log2(r) if r > 0 else 0.0


def kl_divergence(p, q, tol: Tolerance = DEFAULT_TOL) -> float:
    return f_divergence(p, q, _kl_f, 0.0, np.inf, tol)


def chi_square(p, q, tol: Tolerance = DEFAULT_TOL) -> float:
    return f_divergence(p, q, lambda r: (r - 1.0) ** 2, 1.0, np.inf, tol)


def total_variation(p, q, tol: Tolerance = DEFAULT_TOL) -> float:
    return f_divergence(p, q, lambda r: 0.5 * abs(r - 1.0), 0.5, 0.5, tol)


def renyi_relative(p, q, alpha: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Rényi relative entropy ``D_alpha(p || q)`` in bits.

    Finite when supp p ⊆ supp q, or when ``alpha < 1`` and ``p.q != 0``;
    otherwise inf.  ``alpha`` 0, 1, inf use the min-relative entropy, KL
    and max-relative entropy.
    """
    if alpha < 0 or np.isnan(alpha):
        raise DomainError("alpha must be nonnegative")
    p, q = pad_common(as_prob(p, tol, "p"), as_prob(q, tol, "q"))
    sp = p > 0
    abs_cont = not np.any(sp & (q == 0))
    overlap = float(p @ q) != 0.0
    if not (abs_cont or (alpha < 1 and overlap)):
        return np.inf
    if alpha == 0:
        return float(-np.log2(q[sp].sum()))
    if alpha == 1:
        return kl_divergence(p, q, tol)
    if np.isinf(alpha):
        return float(np.log2(np.max(p[sp] / q[sp])))
    both = sp & (q > 0)
    s = np.sum(p[both] ** alpha * q[both] ** (1.0 - alpha))
    return float(np.log2(s) / (alpha - 1.0))


def d_min(p, q, tol: Tolerance = DEFAULT_TOL) -> float:
    return renyi_relative(p, q, 0.0, tol)


def d_max(p, q, tol: Tolerance = DEFAULT_TOL) -> float:
    return renyi_relative(p, q, np.inf, tol)


def dmax_dmin_sufficient(x, y, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``D_max(p'||q') <= D_min(p||q)``, which implies ``x ⪰ y``."""
    x, y = _pair(x, tol), _pair(y, tol)
    lo, hi = d_max(y.p, y.q, tol), d_min(x.p, x.q, tol)
    if np.isinf(hi):
        return True
    return bool(lo <= hi + tol.bound(max(1.0, abs(hi))))
