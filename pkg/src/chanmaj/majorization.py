"""Probability vectors, the majorization preorder, constructive witnesses
and Rényi entropies (bits)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import (
    DEFAULT_TOL,
    DomainError,
    InternalConsistencyError,
    Tolerance,
    argsort_desc,
    as_real_vector,
    ky_fan_profile,
    pad_common,
    profile_dominates,
)


class NotComparableError(DomainError):
    """A witness was requested for a pair that is not ordered."""


class ProbVector:
    """Finite probability distribution with tolerance-checked membership.

    Entries in ``(-abs_eps, 0)`` are clamped to 0, more negative entries are
    rejected, and the sum must be 1 within ``n * abs_eps``.
    """

    __slots__ = ("entries",)

    def __init__(self, entries, tol: Tolerance = DEFAULT_TOL, name: str = "vector"):
        if isinstance(entries, ProbVector):
            entries = entries.entries
        v = as_real_vector(entries, name).copy()
        if np.any(v < -tol.abs_eps):
            raise DomainError(f"{name} has a negative entry {v.min():.3g}")
        v[v < 0] = 0.0
        if abs(v.sum() - 1.0) > max(v.size * tol.abs_eps, tol.bound(1.0)):
            raise DomainError(f"{name} sums to {v.sum():.12g}, not 1")
        v.setflags(write=False)
        self.entries = v

    def __len__(self):
        return self.entries.size

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return f"ProbVector({self.entries.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, ProbVector):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.all(self.entries == other.entries))

    def __hash__(self):
        return hash(self.entries.tobytes())


def as_prob(p, tol: Tolerance = DEFAULT_TOL, name: str = "vector") -> np.ndarray:
    return ProbVector(p, tol, name).entries


def majorizes(p, q, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``p`` majorizes ``q``.

    Vectors of different length are compared after zero padding.
    """
    p, q = pad_common(as_prob(p, tol), as_prob(q, tol))
    return profile_dominates(ky_fan_profile(p), ky_fan_profile(q), tol)


def equivalent(p, q, tol: Tolerance = DEFAULT_TOL) -> bool:
    return majorizes(p, q, tol) and majorizes(q, p, tol)


@dataclass(frozen=True)
class TTransform:
    """``t I + (1 - t) Pi`` where ``Pi`` swaps indices ``i`` and ``j``."""

    i: int
    j: int
    t: float

    def matrix(self, n: int) -> np.ndarray:
        T = np.eye(n)
        T[self.i, self.i] = T[self.j, self.j] = self.t
        T[self.i, self.j] = T[self.j, self.i] = 1.0 - self.t
        return T

    def apply(self, v) -> np.ndarray:
        v = np.array(v, dtype=float)
        a, b = v[self.i], v[self.j]
        v[self.i] = self.t * a + (1 - self.t) * b
        v[self.j] = self.t * b + (1 - self.t) * a
        return v


@dataclass
class MajorizationWitness:
    """Certificate that ``p`` majorizes ``q``.

    ``kind`` is ``"ky_fan"``, ``"t_chain"`` or ``"doubly_stochastic"``.
    For a T-chain, ``perm_p`` sorts the padded p (``p[perm_p]`` is p↓),
    ``steps`` act on p↓, and ``perm_q`` sorts the padded q.
    """

    kind: str
    steps: list[TTransform] = field(default_factory=list)
    perm_p: np.ndarray | None = None
    perm_q: np.ndarray | None = None
    matrix: np.ndarray | None = None
    gaps: np.ndarray | None = None

    def apply(self, p) -> np.ndarray:
        """Image of the (padded) vector ``p`` under the witness map."""
        p = np.asarray(p, float)
        if self.kind == "doubly_stochastic":
            n = self.matrix.shape[0]
            return self.matrix @ np.concatenate([p, np.zeros(n - p.size)])
        if self.kind != "t_chain":
            raise DomainError("a Ky Fan witness has no map")
        n = self.perm_p.size
        v = np.concatenate([p, np.zeros(n - p.size)])[self.perm_p]
        for T in self.steps:
            v = T.apply(v)
        out = np.empty(n)
        out[self.perm_q] = v
        return out


def ky_fan_witness(p, q, tol: Tolerance = DEFAULT_TOL) -> MajorizationWitness:
    """Profile gaps ``||p||_(k) - ||q||_(k)`` (all nonnegative when p ≻ q)."""
    p, q = pad_common(as_prob(p, tol), as_prob(q, tol))
    return MajorizationWitness("ky_fan", gaps=ky_fan_profile(p) - ky_fan_profile(q))


def witness_t_chain(p, q, tol: Tolerance = DEFAULT_TOL) -> MajorizationWitness:
    """Chain of T-transforms taking p↓ to q↓.

    Each step takes ``x`` as the largest index with ``p_x > q_x`` and ``y``
    as the first index after ``x`` with ``p_y < q_y``; it moves
    ``min(p_x - q_x, q_y - p_y)`` from x to y, fixing at least one
    coordinate.  The returned ``t`` lies in [1/2, 1].
    """
    if not majorizes(p, q, tol):
        raise NotComparableError("p does not majorize q")
    p, q = pad_common(as_prob(p, tol), as_prob(q, tol))
    n = p.size
    perm_p, perm_q = argsort_desc(p), argsort_desc(q)
    r, qs = p[perm_p].copy(), q[perm_q]
    eps = tol.bound(1.0)
    steps: list[TTransform] = []
    for _ in range(2 * n):
        above = np.flatnonzero(r - qs > eps)
        if above.size == 0:
            break
        x = above[-1]
        below = np.flatnonzero(r[x + 1:] - qs[x + 1:] < -eps)
        if below.size == 0:
            break  # remaining discrepancy is below tolerance
        y = x + 1 + below[0]
        delta = min(r[x] - qs[x], qs[y] - r[y])
        t = 1.0 - delta / (r[x] - r[y])
        steps.append(TTransform(int(x), int(y), float(t)))
        total = r[x] + r[y]
        if r[x] - qs[x] <= qs[y] - r[y]:
            r[x] = qs[x]
            r[y] = total - r[x]
        else:
            r[y] = qs[y]
            r[x] = total - r[y]
    w = MajorizationWitness("t_chain", steps=steps, perm_p=perm_p, perm_q=perm_q)
    if np.max(np.abs(w.apply(p) - q)) > max(n * tol.abs_eps, eps):
        raise InternalConsistencyError("T-chain does not reproduce q")
    return w


def witness_doubly_stochastic(p, q, tol: Tolerance = DEFAULT_TOL) -> MajorizationWitness:
    """Explicit doubly stochastic ``D`` with ``D p = q`` (padded vectors)."""
    chain = witness_t_chain(p, q, tol)
    n = chain.perm_p.size
    P = np.eye(n)[chain.perm_p]  # P v = v[perm_p]
    Q = np.eye(n)[chain.perm_q]
    D = P
    for T in chain.steps:
        D = T.matrix(n) @ D
    D = Q.T @ D
    return MajorizationWitness("doubly_stochastic", matrix=D)


def renyi_entropy(p, alpha: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Rényi entropy ``H_alpha(p)`` in bits, ``alpha`` in [0, inf].

    ``alpha`` = 0, 1 and inf use the limit forms (log support size,
    Shannon, minus log of the largest entry).
    """
    if alpha < 0 or np.isnan(alpha):
        raise DomainError("alpha must be nonnegative")
    p = as_prob(p, tol)
    s = p[p > 0]
    if alpha == 0:
        return float(np.log2(s.size))
    if alpha == 1:
        return shannon_entropy(p, tol)
    if np.isinf(alpha):
        return float(-np.log2(s.max())) + 0.0  # no negative zero
    return float(np.log2(np.sum(s ** alpha)) / (1.0 - alpha)) + 0.0


def shannon_entropy(p, tol: Tolerance = DEFAULT_TOL) -> float:
    p = as_prob(p, tol)
    s = p[p > 0]
    return float(max(0.0, -np.sum(s * np.log2(s))))


def sample_random(n: int, seed=None) -> ProbVector:
    """Uniform sample from the simplex via gaps of sorted uniforms."""
    if n < 1:
        raise DomainError("n must be positive")
    rng = np.random.default_rng(seed)
    return ProbVector(_simplex_gaps(rng, n))


def _simplex_gaps(rng, n):
    cuts = np.sort(rng.random(n - 1))
    return np.diff(np.concatenate([[0.0], cuts, [1.0]]))


def sample_random_channel(m: int, n: int, seed=None):
    """Channel with ``m`` inputs whose ``n``-dim columns are simplex-uniform."""
    from .channel import Channel

    if m < 1 or n < 1:
        raise DomainError("dimensions must be positive")
    rng = np.random.default_rng(seed)
    return Channel(np.column_stack([_simplex_gaps(rng, n) for _ in range(m)]))
