"""Shared numeric policy: tolerances, stable sorting, Ky Fan profiles and
concave majorants on the integer grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class InternalConsistencyError(RuntimeError):
    """A result failed one of its own post-condition checks."""


@dataclass(frozen=True)
class Tolerance:
    """Dual absolute/relative tolerance.

    Every inexact comparison in the library goes through :meth:`bound`,
    which returns ``max(abs_eps, rel_eps * scale)``.
    """

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9

    def __post_init__(self):
        if not (self.abs_eps >= 0 and self.rel_eps >= 0):
            raise DomainError("tolerances must be nonnegative")

    def bound(self, scale: float = 1.0) -> float:
        return max(self.abs_eps, self.rel_eps * abs(scale))

    def _scale(self, a, b):
        return max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))

    def le(self, a, b, scale: float | None = None) -> bool:
        """``a <= b`` elementwise (all) up to tolerance."""
        a, b = np.asarray(a, float), np.asarray(b, float)
        s = self._scale(a, b) if scale is None else scale
        return bool(np.all(a <= b + self.bound(s)))

    def ge(self, a, b, scale: float | None = None) -> bool:
        return self.le(b, a, scale)

    def eq(self, a, b, scale: float | None = None) -> bool:
        a, b = np.asarray(a, float), np.asarray(b, float)
        s = self._scale(a, b) if scale is None else scale
        return bool(np.all(np.abs(a - b) <= self.bound(s)))


DEFAULT_TOL = Tolerance()


def as_real_vector(r, name: str = "vector") -> np.ndarray:
    v = np.asarray(r, dtype=float).reshape(-1)
    if v.size == 0:
        raise DomainError(f"{name} is empty")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} has non-finite entries")
    return v


def argsort_desc(v) -> np.ndarray:
    """Indices sorting ``v`` in nonincreasing order; ties keep original order."""
    return np.argsort(-np.asarray(v, float), kind="stable")


def sort_desc(v) -> np.ndarray:
    v = np.asarray(v, float)
    return v[argsort_desc(v)]


def pad(v, n: int) -> np.ndarray:
    """Append zeros to reach length ``n``."""
    v = np.asarray(v, float)
    if v.size > n:
        raise DomainError(f"cannot pad length {v.size} down to {n}")
    return np.concatenate([v, np.zeros(n - v.size)])


def pad_common(*vs) -> list[np.ndarray]:
    n = max(np.asarray(v).size for v in vs)
    return [pad(v, n) for v in vs]


def ky_fan_profile(r) -> np.ndarray:
    """Ky Fan profile of a vector.

    Parameters
    ----------
    r : array_like
        Real vector of length n >= 1.

    Returns
    -------
    ndarray
        ``values[k-1]`` is the sum of the k largest absolute entries of r.
    """
    v = as_real_vector(r)
    return np.cumsum(sort_desc(np.abs(v)))


def profile_dominates(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Componentwise ``a >= b`` for two profiles after zero-order padding.

    Shorter profiles are extended by repeating their last value (the profile
    of a zero-padded vector).
    """
    a, b = np.asarray(a, float), np.asarray(b, float)
    n = max(a.size, b.size)
    a = np.concatenate([a, np.full(n - a.size, a[-1])])
    b = np.concatenate([b, np.full(n - b.size, b[-1])])
    return tol.ge(a, b, scale=max(1.0, np.max(np.abs(a)), np.max(np.abs(b))))


def cumulative(v) -> np.ndarray:
    """Prefix sums with a leading zero: ``(0, v1, v1+v2, ...)``."""
    return np.concatenate([[0.0], np.cumsum(np.asarray(v, float))])


def least_concave_majorant(points, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Smallest concave curve through (0, 0) dominating ``points`` on k = 1..n.

    Computed as the upper hull (monotone chain) of the grid points
    ``(k, points[k-1])`` together with the anchor ``(0, 0)``, then evaluated
    back on the integer grid.

    Parameters
    ----------
    points : array_like
        Nondecreasing heights at k = 1..n, last value 1.

    Returns
    -------
    ndarray
        Majorant heights at k = 1..n.
    """
    y = as_real_vector(points, "points")
    if np.any(np.diff(np.concatenate([[0.0], y])) < -tol.bound(1.0)):
        raise DomainError("points must be nondecreasing from 0")
    if not tol.eq(y[-1], 1.0):
        raise DomainError("points must end at 1")
    xs = np.arange(y.size + 1, dtype=float)
    ys = np.concatenate([[0.0], y])
    hull: list[int] = []
    for k in range(xs.size):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # drop j if it lies on or below the chord i -> k
            cross = (xs[j] - xs[i]) * (ys[k] - ys[i]) - (ys[j] - ys[i]) * (xs[k] - xs[i])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(k)
    out = np.interp(xs, xs[hull], ys[hull])[1:]
    # keep exact input values where the hull touches them
    touch = np.zeros(y.size, bool)
    touch[np.asarray(hull[1:]) - 1] = True
    out[touch] = y[touch]
    return out


def diffs_to_vector(profile) -> np.ndarray:
    """Successive differences of a profile, starting from an implicit 0."""
    p = as_real_vector(profile, "profile")
    return np.diff(np.concatenate([[0.0], p]))


def is_nonincreasing(v, tol: Tolerance = DEFAULT_TOL) -> bool:
    v = np.asarray(v, float)
    return bool(np.all(np.diff(v) <= tol.bound(1.0)))
