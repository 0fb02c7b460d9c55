"""Classical channels as column-stochastic transition matrices: standard
form, channel majorization, predictability, t-games and reductions."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .lp import GE, FeasibilityProblem, solve_feasibility
from .majorization import as_prob, majorizes
from .numerics import (
    DEFAULT_TOL,
    DomainError,
    InternalConsistencyError,
    Tolerance,
    is_nonincreasing,
    ky_fan_profile,
    profile_dominates,
)


class Channel:
    """Transition matrix ``N`` (n outputs x m inputs); column x is ``N(e_x)``."""

    def __init__(self, matrix, name: str | None = None, tol: Tolerance = DEFAULT_TOL):
        N = np.asarray(matrix, dtype=float)
        if N.ndim == 1:
            N = N[:, None]
        if N.ndim != 2 or N.size == 0:
            raise DomainError("channel matrix must be a nonempty n x m array")
        cols = [as_prob(N[:, x], tol, f"column {x}") for x in range(N.shape[1])]
        M = np.column_stack(cols)
        M.setflags(write=False)
        self.matrix = M
        self.name = name

    @classmethod
    def from_columns(cls, cols, name=None, tol: Tolerance = DEFAULT_TOL) -> "Channel":
        cols = [np.asarray(c, float) for c in cols]
        n = max(c.size for c in cols)
        return cls(np.column_stack([np.pad(c, (0, n - c.size)) for c in cols]), name, tol)

    @classmethod
    def from_json(cls, obj, tol: Tolerance = DEFAULT_TOL) -> "Channel":
        if not isinstance(obj, dict) or "cols" not in obj:
            raise DomainError('channel JSON needs a "cols" list')
        return cls.from_columns(obj["cols"], obj.get("name"), tol)

    def to_json(self) -> dict:
        out = {"cols": self.matrix.T.tolist()}
        if self.name is not None:
            out["name"] = self.name
        return out

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def columns(self) -> list[np.ndarray]:
        return [self.matrix[:, x] for x in range(self.m)]

    def sorted_columns(self) -> np.ndarray:
        return -np.sort(-self.matrix, axis=0)

    def pad_outputs(self, n: int) -> "Channel":
        if n < self.n:
            raise DomainError("cannot drop outputs")
        return Channel(np.vstack([self.matrix, np.zeros((n - self.n, self.m))]), self.name)

    def __call__(self, p) -> np.ndarray:
        return self.matrix @ as_prob(p)

    def __repr__(self):
        return f"Channel({self.matrix.tolist()})"


def _chan(N, tol=DEFAULT_TOL) -> Channel:
    return N if isinstance(N, Channel) else Channel(N, tol=tol)


def _common_outputs(N, M):
    n = max(N.n, M.n)
    return N.pad_outputs(n), M.pad_outputs(n)


def point_channel(n: int, y: int = 0, m: int = 1) -> Channel:
    """Channel that always outputs ``e_y``."""
    N = np.zeros((n, m))
    N[y] = 1.0
    return Channel(N, "point")


def maximally_randomizing(n: int, m: int = 1) -> Channel:
    return Channel(np.full((n, m), 1.0 / n), "randomizing")


def replacement_channel(p, m: int = 1) -> Channel:
    """Channel with ``m`` inputs, each mapped to ``p``."""
    p = as_prob(p)
    return Channel(np.tile(p[:, None], (1, m)), "replacement")


def tensor(N, M) -> Channel:
    """Parallel composition; the input/output index is ``(x, x')`` row-major."""
    return Channel(np.kron(_chan(N).matrix, _chan(M).matrix))


def compose(N, M) -> Channel:
    """``N ∘ M``: apply M, then N."""
    return Channel(_chan(N).matrix @ _chan(M).matrix)


def _lower_ones(n):
    return np.tril(np.ones((n, n)))


def _mixture_lp(cols: np.ndarray, q_sorted: np.ndarray, tol: Tolerance):
    """Solve ``L cols s >= L q↓, sum s <= 1, s >= 0`` (cols already arranged)."""
    n, m = cols.shape
    L = _lower_ones(n)
    A = np.vstack([L @ cols, -np.ones((1, m))])
    b = np.concatenate([L @ q_sorted, [-1.0]])
    return solve_feasibility(FeasibilityProblem(A, b, GE), tol)


@dataclass
class ColumnDecision:
    """Outcome for one target column: weights or a refuting s in Prob↓(n)."""

    holds: bool
    weights: np.ndarray | None = None
    refuter: np.ndarray | None = None


def _column_decision(Ps, q, tol, sort=True) -> ColumnDecision:
    res = _mixture_lp(Ps, -np.sort(-q), tol)
    if res.feasible:
        s = np.clip(res.x, 0.0, None)
        total = s.sum()
        if total <= 0:
            raise InternalConsistencyError("zero mixture reported feasible")
        return ColumnDecision(True, weights=s / total)
    n = Ps.shape[0]
    v = res.y[:n]
    s = np.cumsum(v[::-1])[::-1]  # L^T v: suffix sums, nonincreasing
    return ColumnDecision(False, refuter=s / s.sum())


@dataclass
class ChannelResult:
    """Decision for ``N ⪰ M``.

    ``weights`` (m x m') has column w equal to the mixing weights for the
    target ``q_w``; on a negative answer ``refuter`` is an ``s`` in
    Prob↓(n) with ``P_N(s) < P_M(s)`` and ``column`` is the failing target.
    """

    holds: bool
    weights: np.ndarray | None = None
    refuter: np.ndarray | None = None
    column: int | None = None

    def __bool__(self):
        return self.holds


def channel_majorizes(N, M, tol: Tolerance = DEFAULT_TOL, sort: bool = True, jobs: int = 1) -> ChannelResult:
    """Decide ``N ⪰ M``, one LP per column of M.

    Parameters
    ----------
    sort : bool
        With False, mix the columns of N without sorting them first.  This
        is a diagnostic mode: it only certifies sufficient mixtures.
    jobs : int
        Number of worker threads for the per-column LPs.
    """
    N, M = _common_outputs(_chan(N, tol), _chan(M, tol))
    Ps = N.sorted_columns() if sort else N.matrix
    targets = M.columns
    if jobs > 1 and len(targets) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(lambda q: _column_decision(Ps, q, tol), targets))
    else:
        out = [_column_decision(Ps, q, tol) for q in targets]
    for w, d in enumerate(out):
        if not d.holds:
            return ChannelResult(False, refuter=d.refuter, column=w)
    W = np.column_stack([d.weights for d in out])
    if sort:
        _verify_weights(N, M, W, tol)
    return ChannelResult(True, weights=W)


def _verify_weights(N, M, W, tol):
    loose = Tolerance(100 * tol.abs_eps, 100 * tol.rel_eps)
    Ps = N.sorted_columns()
    for w, q in enumerate(M.columns):
        mix = Ps @ W[:, w]
        if not profile_dominates(ky_fan_profile(mix), ky_fan_profile(q), loose):
            raise InternalConsistencyError(f"mixture for column {w} fails Ky Fan dominance")


def _dominated_by_others(cols: np.ndarray, x: int, tol) -> bool:
    others = np.delete(cols, x, axis=1)
    return _mixture_lp(others, cols[:, x], tol).feasible


def standard_form(N, tol: Tolerance = DEFAULT_TOL) -> Channel:
    """Sort columns, drop columns dominated by mixtures of the rest, order.

    Removal scans from the lowest index and restarts after each removal.
    The kept columns are sorted lexicographically in decreasing order.
    """
    N = _chan(N, tol)
    cols = N.sorted_columns()
    changed = True
    while changed and cols.shape[1] > 1:
        changed = False
        for x in range(cols.shape[1]):
            if _dominated_by_others(cols, x, tol):
                cols = np.delete(cols, x, axis=1)
                changed = True
                break
    order = sorted(range(cols.shape[1]), key=lambda x: tuple(cols[:, x]), reverse=True)
    return Channel(cols[:, order], N.name)


def is_standard(N, tol: Tolerance = DEFAULT_TOL) -> bool:
    N = _chan(N, tol)
    S = standard_form(N, tol)
    return S.m == N.m and np.allclose(S.matrix, N.matrix, atol=tol.bound(1.0), rtol=0)


def predictability(N, s, tol: Tolerance = DEFAULT_TOL) -> float:
    """``P_N(s) = max_x s . p_x↓`` for nonincreasing nonnegative ``s``."""
    N = _chan(N, tol)
    s = np.asarray(s, float).reshape(-1)
    if s.size > N.n:
        N = N.pad_outputs(s.size)
    if np.any(s < -tol.abs_eps) or not is_nonincreasing(s, tol):
        raise DomainError("s must be nonnegative and nonincreasing")
    s = np.pad(s, (0, N.n - s.size))
    return float(np.max(s @ N.sorted_columns()))


@dataclass(frozen=True)
class GameSpec:
    """Joint distribution ``t[w, k]`` over a message ``w`` and a guess budget ``k``."""

    t: np.ndarray

    @classmethod
    def of(cls, t, tol: Tolerance = DEFAULT_TOL) -> "GameSpec":
        t = np.atleast_2d(np.asarray(t, dtype=float))
        as_prob(t.ravel(), tol, "game")
        return cls(np.clip(t, 0.0, None))

    @property
    def ell(self) -> int:
        return self.t.shape[0]

    @property
    def n(self) -> int:
        return self.t.shape[1]

    @property
    def marginals(self) -> np.ndarray:
        return self.t.sum(axis=1)

    @property
    def conditionals(self) -> np.ndarray:
        tw = self.marginals
        out = np.full_like(self.t, 1.0 / self.n)
        nz = tw > 0
        out[nz] = self.t[nz] / tw[nz, None]
        return out


def t_game_payoff(N, g, tol: Tolerance = DEFAULT_TOL) -> float:
    """``sum_w t_w max_x sum_k t_{k|w} ||p_x||_(k)``.

    Also evaluated as ``sum_w P_N(s_w)`` with ``s_w`` the suffix sums of
    ``t_{w, .}``; the two values must agree.
    """
    N = _chan(N, tol)
    g = g if isinstance(g, GameSpec) else GameSpec.of(g, tol)
    if g.n != N.n:
        raise DomainError(f"game has budget dimension {g.n}, channel has {N.n} outputs")
    K = np.cumsum(N.sorted_columns(), axis=0)  # K[k, x] = ||p_x||_(k+1)
    direct = float(np.sum(g.marginals * np.max(g.conditionals @ K, axis=1)))
    S = np.cumsum(g.t[:, ::-1], axis=1)[:, ::-1]
    via = float(sum(predictability(N, s, tol) for s in S))
    if abs(direct - via) > tol.bound(max(1.0, direct)) * N.n:
        raise InternalConsistencyError(f"game payoff paths disagree: {direct} vs {via}")
    return direct


@dataclass
class TwoInputResult:
    holds: bool
    mu: np.ndarray
    nu: np.ndarray
    zero_ok: np.ndarray

    def __bool__(self):
        return self.holds


def two_input_fast_path(N, M, tol: Tolerance = DEFAULT_TOL) -> TwoInputResult:
    """Closed-form decision for a two-column ``N``.

    With Ky Fan gaps ``g_k = ||p_1||_(k) - ||p_2||_(k)``, each target needs a
    ``t`` in ``[mu_w, nu_w]`` where ``mu_w`` (``nu_w``) is the largest
    (smallest) ratio ``(||q_w||_(k) - ||p_2||_(k)) / g_k`` over positive
    (negative) gaps, clipped to [0, 1]; at zero gaps ``p_2`` must dominate.
    """
    N, M = _common_outputs(_chan(N, tol), _chan(M, tol))
    if N.m != 2:
        raise DomainError("fast path needs exactly two inputs")
    K = np.cumsum(N.sorted_columns(), axis=0)
    k1, k2 = K[:, 0], K[:, 1]
    gap = k1 - k2
    eps = tol.bound(1.0)
    plus, minus = gap > eps, gap < -eps
    zero = ~(plus | minus)
    mu, nu, zok = np.zeros(M.m), np.ones(M.m), np.ones(M.m, bool)
    for w, q in enumerate(M.columns):
        kq = np.cumsum(-np.sort(-q))
        ratio = np.zeros_like(gap)
        nz = plus | minus
        ratio[nz] = (kq[nz] - k2[nz]) / gap[nz]
        mu[w] = max(0.0, ratio[plus].max(initial=-np.inf))
        nu[w] = min(1.0, ratio[minus].min(initial=np.inf))
        zok[w] = bool(np.all(k2[zero] >= kq[zero] - eps))
    holds = bool(np.all(nu >= mu - eps) and np.all(zok))
    return TwoInputResult(holds, mu, nu, zok)


def replacement_reduction(p, q, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Compare replacement channels with laws ``p`` and ``q``.

    The channel decision must coincide with ``majorizes(p, q)``.
    """
    p, q = as_prob(p, tol, "p"), as_prob(q, tol, "q")
    out = channel_majorizes(replacement_channel(p, 2), replacement_channel(q, 2), tol).holds
    if out != majorizes(p, q, tol):
        raise InternalConsistencyError("replacement channels disagree with vector majorization")
    return out


def channel_equivalent(N, M, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Equality of standard forms, cross-checked with two-way majorization."""
    N, M = _common_outputs(_chan(N, tol), _chan(M, tol))
    SN, SM = standard_form(N, tol), standard_form(M, tol)
    same = SN.m == SM.m and bool(np.all(np.abs(SN.matrix - SM.matrix) <= 10 * tol.bound(1.0)))
    both = channel_majorizes(N, M, tol).holds and channel_majorizes(M, N, tol).holds
    if same != both:
        raise InternalConsistencyError("standard forms and two-way decisions disagree")
    return same


def induced_joint(N, p) -> np.ndarray:
    """Joint weights ``[y, x] = N[y, x] p_x`` (outputs as rows)."""
    N = _chan(N)
    return N.matrix * as_prob(p, name="input distribution")[None, :]


def channel_maj_via_conditional(N, M, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Decide ``N ⪰ M`` through conditional majorization of induced joints.

    The input law on N is read off the channel witness
    (``p_x = sum_w s_{x|w} / m'``) with a uniform law on M; when no witness
    exists, uniform laws on both sides must fail too.  The answer is
    checked against :func:`channel_majorizes`.
    """
    from .conditional import conditionally_majorizes

    N, M = _common_outputs(_chan(N, tol), _chan(M, tol))
    N = standard_form(N, tol)
    direct = channel_majorizes(N, M, tol)
    q = np.full(M.m, 1.0 / M.m)
    p = direct.weights.mean(axis=1) if direct.holds else np.full(N.m, 1.0 / N.m)
    p = p / p.sum()
    cond = conditionally_majorizes(induced_joint(N, p), induced_joint(M, q), tol).holds
    if cond != direct.holds:
        raise InternalConsistencyError("conditional route disagrees with the channel decision")
    return cond
