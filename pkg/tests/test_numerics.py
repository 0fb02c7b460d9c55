import numpy as np
import pytest

from chanmaj.numerics import (
    DomainError,
    Tolerance,
    argsort_desc,
    cumulative,
    diffs_to_vector,
    is_nonincreasing,
    ky_fan_profile,
    least_concave_majorant,
    pad_common,
    profile_dominates,
)
from chanmaj.oracle import brute_concave_majorant


def test_tolerance_bound_mixes_abs_and_rel():
    tol = Tolerance(1e-9, 1e-6)
    assert tol.bound(1.0) == 1e-6
    assert tol.bound(1e-6) == 1e-9
    assert tol.le(1.0 + 5e-7, 1.0)
    assert not tol.le(1.0 + 5e-6, 1.0)


def test_tolerance_rejects_negative():
    with pytest.raises(DomainError):
        Tolerance(-1.0, 0.0)


def test_ky_fan_profile_uses_absolute_values():
    assert np.allclose(ky_fan_profile([0.1, -0.5, 0.3]), [0.5, 0.8, 0.9])


def test_argsort_desc_is_stable():
    assert argsort_desc([0.2, 0.5, 0.2, 0.5]).tolist() == [1, 3, 0, 2]


def test_profile_dominates_pads_shorter_profile():
    # (1) against (0.5, 0.5): profiles (1) vs (0.5, 1)
    assert profile_dominates([1.0], [0.5, 1.0])
    assert not profile_dominates([0.5, 1.0], [1.0])


def test_cumulative_and_diffs_roundtrip(rng):
    v = rng.random(6)
    assert np.allclose(diffs_to_vector(cumulative(v)[1:]), v)


def test_pad_common():
    a, b = pad_common([1.0], [0.5, 0.25, 0.25])
    assert a.tolist() == [1.0, 0.0, 0.0] and b.size == 3


def test_hull_example_value():
    # the chord from (0,0) to (2,0.9) passes through (1,0.45) above 0.2
    assert np.allclose(least_concave_majorant([0.2, 0.9, 1.0]), [0.45, 0.9, 1.0])


def test_hull_keeps_concave_input():
    pts = [0.4, 0.7, 0.9, 1.0]
    assert np.array_equal(least_concave_majorant(pts), pts)


def test_hull_rejects_bad_input():
    with pytest.raises(DomainError):
        least_concave_majorant([0.5, 0.3, 1.0])
    with pytest.raises(DomainError):
        least_concave_majorant([0.5, 0.9])


def test_hull_against_brute_force(rng):
    for _ in range(200):
        n = int(rng.integers(1, 8))
        pts = np.cumsum(rng.dirichlet(np.ones(n)))
        pts[-1] = 1.0
        got = least_concave_majorant(pts)
        assert np.allclose(got, brute_concave_majorant(pts), atol=1e-12)
        # concave with the anchor, and dominating
        ext = np.concatenate([[0.0], got])
        assert np.all(np.diff(ext, 2) <= 1e-12)
        assert np.all(got >= pts - 1e-12)


def test_is_nonincreasing():
    assert is_nonincreasing([3, 2, 2, 1])
    assert not is_nonincreasing([1, 2])
