"""Entropies of classical channels: optimal bound vectors, maximal and
minimal extensions, regularized estimates, the typical majorizer and two
alternative channel functionals (bits throughout)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import _chan, standard_form
from .majorization import as_prob, renyi_entropy, shannon_entropy
from .numerics import (
    DEFAULT_TOL,
    DomainError,
    InternalConsistencyError,
    Tolerance,
    diffs_to_vector,
    is_nonincreasing,
    ky_fan_profile,
    least_concave_majorant,
    pad_common,
    profile_dominates,
)
from .relative import kl_divergence

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class EntropySpec:
    """A Rényi-family vector entropy: ``shannon`` (alpha 1), ``min``
    (alpha inf), ``max`` (alpha 0) or ``renyi`` with explicit alpha."""

    kind: str
    alpha: float

    @classmethod
    def parse(cls, text: str) -> "EntropySpec":
        t = text.strip().lower()
        fixed = {"shannon": 1.0, "min": math.inf, "max": 0.0}
        if t in fixed:
            return cls(t, fixed[t])
        if t.startswith("renyi:"):
            try:
                a = float(t.split(":", 1)[1])
            except ValueError:
                raise DomainError(f"bad Rényi order in {text!r}") from None
            if not a >= 0:
                raise DomainError("Rényi order must be nonnegative")
            return cls("renyi", a)
        raise DomainError(f"unknown entropy {text!r}; use shannon, min, max or renyi:<alpha>")

    @property
    def evaluator(self) -> Callable[[np.ndarray], float]:
        return lambda p: renyi_entropy(p, self.alpha)

    def __call__(self, p) -> float:
        return renyi_entropy(p, self.alpha)

    def __str__(self):
        return f"renyi:{self.alpha:g}" if self.kind == "renyi" else self.kind


SHANNON = EntropySpec("shannon", 1.0)
H_MIN = EntropySpec("min", math.inf)
H_MAX = EntropySpec("max", 0.0)


def _spec(H) -> EntropySpec:
    if H is None:
        return SHANNON
    return H if isinstance(H, EntropySpec) else EntropySpec.parse(H)


def _profiles(A, tol):
    vs = [as_prob(a, tol, f"member {i}") for i, a in enumerate(A)]
    if not vs:
        raise DomainError("the vector set is empty")
    return np.array([ky_fan_profile(v) for v in pad_common(*vs)])


def optimal_lower_bound(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Greatest lower bound: differences of the pointwise-minimum profile."""
    K = _profiles(A, tol)
    low = diffs_to_vector(K.min(axis=0))
    if np.any(low < -tol.bound(1.0)) or not is_nonincreasing(low, tol):
        raise InternalConsistencyError("lower bound is not a nonincreasing distribution")
    return np.clip(low, 0.0, None)


def naive_upper_candidate(A, tol: Tolerance = DEFAULT_TOL):
    """Differences of the pointwise-maximum profile, with its monotonicity flag.

    This vector is generally not nonincreasing, hence not a valid upper bound.
    """
    v = diffs_to_vector(_profiles(A, tol).max(axis=0))
    return v, is_nonincreasing(v, tol)


def optimal_upper_bound(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Least upper bound: concave majorant of the pointwise-maximum profile."""
    K = _profiles(A, tol)
    up = diffs_to_vector(least_concave_majorant(K.max(axis=0), tol))
    up = np.clip(up, 0.0, None)
    if not all(profile_dominates(ky_fan_profile(up), k, tol) for k in K):
        raise InternalConsistencyError("upper bound fails to majorize a member")
    return up


def channel_entropy_max_ext(N, H=None, tol: Tolerance = DEFAULT_TOL) -> float:
    """Maximal extension ``min_x H(p_x)`` of a quasiconcave entropy."""
    N, H = _chan(N, tol), _spec(H)
    return float(min(H(p) for p in N.columns))


def channel_entropy_min_ext(N, H=None, tol: Tolerance = DEFAULT_TOL) -> float:
    """Minimal extension, evaluated as ``H`` of the optimal upper bound of the
    channel's image."""
    N, H = _chan(N, tol), _spec(H)
    return float(H(optimal_upper_bound(N.columns, tol)))


def channel_entropy_min_ext_shannon(N, tol: Tolerance = DEFAULT_TOL) -> float:
    value = channel_entropy_min_ext(N, SHANNON, tol)
    top = channel_entropy_max_ext(N, SHANNON, tol)
    if value > top + 1e-9:
        raise InternalConsistencyError("minimal extension exceeds the maximal extension")
    return value


def hmin_underline_construction(N, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``q = (N11, ..., N11, 1 - k0 N11)`` with ``k0 = floor(1 / N11)``,
    built on the standard form; an upper bound of the image with
    ``H_min(q) = -log N11``."""
    S = standard_form(N, tol)
    top = float(S.matrix[0, 0])
    k0 = int(math.floor(1.0 / top + tol.bound(1.0)))
    rest = max(0.0, 1.0 - k0 * top)
    q = np.array([top] * k0 + ([rest] if rest > 0 else []))
    return q


def hmax_underline_construction(N, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Upper bound of the image supported on ``k0 = min_x |supp p_x|`` points.

    The first entry is ``max_x ||p_x||_(k0-1)``; the next ``k0 - 1`` entries
    share the remainder equally.
    """
    N = _chan(N, tol)
    supports = [int(np.count_nonzero(p > 0)) for p in N.columns]
    k0 = min(supports)
    if k0 == 1:
        return np.array([1.0])
    q1 = max(float(ky_fan_profile(p)[k0 - 2]) for p in N.columns)
    return np.array([q1] + [(1.0 - q1) / (k0 - 1)] * (k0 - 1))


def _type_classes(m: int, k: int):
    return itertools.combinations_with_replacement(range(m), k)


def _kron_all(vs):
    out = np.array([1.0])
    for v in vs:
        out = np.kron(out, v)
    return out


def regularized_min_ext_estimate(N, k: int, cap: int = DEFAULT_CAP, tol: Tolerance = DEFAULT_TOL) -> float:
    """``(1/k)`` times the Shannon minimal extension of ``N^{⊗k}``.

    Only one column per multiset of inputs is formed: columns within a type
    class are permutations of each other.
    """
    N = _chan(N, tol)
    if k < 1:
        raise DomainError("k must be positive")
    if N.n ** k > cap:
        raise DomainError(f"output dimension {N.n}^{k} exceeds the cap {cap}")
    cols = [_kron_all([N.matrix[:, x] for x in t]) for t in _type_classes(N.m, k)]
    return shannon_entropy(optimal_upper_bound(cols, tol)) / k


@dataclass
class RegularizationTrend:
    ks: list[int]
    values: list[float]
    limit: float
    nondecreasing: bool
    bounded: bool

    @property
    def final_gap(self) -> float:
        return self.limit - self.values[-1]


def regularization_trend(N, kmax: int = 5, cap: int = DEFAULT_CAP, tol: Tolerance = DEFAULT_TOL) -> RegularizationTrend:
    """Estimates for ``k = 1..kmax`` and their gap to the maximal extension."""
    ks = list(range(1, kmax + 1))
    vals = [regularized_min_ext_estimate(N, k, cap, tol) for k in ks]
    limit = channel_entropy_max_ext(N, SHANNON, tol)
    mono = all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))
    return RegularizationTrend(ks, vals, limit, mono, all(v <= limit + 1e-9 for v in vals))


@dataclass
class TypicalMajorizer:
    """``r_k = (delta, e, ..., e, s_k)`` with ``e = 2^{-k(H - eps)}`` repeated
    ``count`` times.  ``valid`` is None when ``p^{⊗k}`` was too large to form."""

    r: np.ndarray
    count: int
    valid: bool | None
    degenerate: bool
    materialized: bool


def typical_majorizer(p, eps: float, delta: float, k: int, cap: int = DEFAULT_CAP,
                      tol: Tolerance = DEFAULT_TOL) -> TypicalMajorizer:
    """Candidate majorizer of ``p^{⊗k}`` built from the typical set.

    ``delta`` sits in front, unsorted; comparisons sort first.  When
    ``H(p) <= eps`` the construction is flagged as degenerate.
    """
    if not (0 < eps < 1 and 0 < delta < 1):
        raise DomainError("eps and delta must lie in (0, 1)")
    if k < 1:
        raise DomainError("k must be positive")
    p = as_prob(p, tol)
    h = shannon_entropy(p)
    expo = k * (h - eps)
    raw = (1.0 - delta) * 2.0 ** expo
    if not math.isfinite(raw) or raw >= 2**53:
        raise OverflowError("typical-set size does not fit a machine integer")
    count = int(math.floor(raw))
    e = 2.0 ** (-expo)
    s = max(0.0, 1.0 - delta - count * e)
    r = np.concatenate([[delta], np.full(count, e), [s]])
    valid, mat = None, p.size ** k <= cap
    if mat:
        pk = _kron_all([p] * k)
        valid = profile_dominates(ky_fan_profile(r), ky_fan_profile(pk), tol)
    return TypicalMajorizer(r, count, valid, h <= eps, mat)


def kl_randomizing_entropy(N, tol: Tolerance = DEFAULT_TOL) -> float:
    """``log n - max_x D(p_x || u)``; agrees with the Shannon maximal extension."""
    N = _chan(N, tol)
    u = np.full(N.n, 1.0 / N.n)
    value = float(np.log2(N.n) - max(kl_divergence(p, u, tol) for p in N.columns))
    if abs(value - channel_entropy_max_ext(N, SHANNON, tol)) > 1e-9:
        raise InternalConsistencyError("divergence form disagrees with the min-output entropy")
    return value


def choi_entropy(N, tol: Tolerance = DEFAULT_TOL) -> float:
    """``H(vec(N) / m) - log m`` for the classical Choi distribution."""
    N = _chan(N, tol)
    return float(shannon_entropy(N.matrix.T.ravel() / N.m) - np.log2(N.m))


def channel_entropy(N, H=None, ext: str = "max", tol: Tolerance = DEFAULT_TOL) -> float:
    """Dispatch on the extension name: ``max``, ``min``, ``choi`` or ``kl-rand``."""
    if ext == "max":
        return channel_entropy_max_ext(N, H, tol)
    if ext == "min":
        return channel_entropy_min_ext(N, H, tol)
    if ext == "choi":
        return choi_entropy(N, tol)
    if ext == "kl-rand":
        return kl_randomizing_entropy(N, tol)
    raise DomainError(f"unknown extension {ext!r}")


__all__ = [
    "EntropySpec",
    "SHANNON",
    "H_MIN",
    "H_MAX",
    "optimal_lower_bound",
    "optimal_upper_bound",
    "naive_upper_candidate",
    "channel_entropy_max_ext",
    "channel_entropy_min_ext",
    "channel_entropy_min_ext_shannon",
    "hmin_underline_construction",
    "hmax_underline_construction",
    "regularized_min_ext_estimate",
    "regularization_trend",
    "typical_majorizer",
    "kl_randomizing_entropy",
    "choi_entropy",
    "channel_entropy",
]
