"""Numbered acceptance checks, each returning ``(passed, detail)``."""

from __future__ import annotations

import math

import numpy as np

from . import channel as ch
from . import conditional as cd
from . import entropy as en
from . import relative as rl
from .majorization import majorizes, renyi_entropy, sample_random, sample_random_channel, shannon_entropy

WORKED_N = [(0.70, 0.15, 0.15), (0.05, 0.45, 0.50)]
WORKED_M = [(0.60, 0.30, 0.10)]
BOUND_SET = [(0.4, 0.2, 0.2, 0.2), (0.3, 0.3, 0.3, 0.1)]
INCOMPARABLE_PAIR = (np.array([16, 4, 4, 4, 4, 4, 0, 0]) / 36, np.array([8, 8, 8, 8, 1, 1, 1, 1]) / 36)
LORENZ_X = ((0.9, 0.1, 0.0), (0.1, 0.8, 0.1))
LORENZ_Y = ((0.2, 0.8), (0.1, 0.9))
POINT = [[1.0], [0.0]]
CHOI_M = [[1.0, 0.5], [0.0, 0.5]]
BSC = [[0.9, 0.1], [0.1, 0.9]]
ALPHAS = (0, 0.25, 0.5, 1, 2, 4, math.inf)


def criterion_1():
    N, M = ch.Channel.from_columns(WORKED_N), ch.Channel.from_columns(WORKED_M)
    res = ch.channel_majorizes(N, M)
    w = res.weights[:, 0] if res.holds else None
    resid = float(np.max(np.abs(N.sorted_columns() @ w - M.matrix[:, 0]))) if w is not None else math.inf
    unsorted = ch.channel_majorizes(N, M, sort=False).holds
    ok = res.holds and np.allclose(w, 0.5, atol=1e-12, rtol=0) and resid <= 1e-12 and not unsorted
    return ok, f"weights={None if w is None else w.tolist()} residual={resid:.2e} unsorted_feasible={unsorted}"


def criterion_2():
    up = en.optimal_upper_bound(BOUND_SET)
    naive, mono = en.naive_upper_candidate(BOUND_SET)
    err = float(np.max(np.abs(up - [0.4, 0.25, 0.25, 0.1])))
    ok = err <= 1e-12 and not mono and np.allclose(naive, [0.4, 0.2, 0.3, 0.1], atol=1e-12)
    return ok, f"upper={up.tolist()} err={err:.2e} naive={naive.tolist()} naive_nonincreasing={mono}"


def criterion_3():
    p, q = INCOMPARABLE_PAIR
    gaps = [renyi_entropy(q, a) - renyi_entropy(p, a) for a in ALPHAS]
    ok = min(gaps) >= -1e-9 and not majorizes(p, q) and not majorizes(q, p)
    return ok, f"min H(q)-H(p)={min(gaps):.3g} p>q={majorizes(p, q)} q>p={majorizes(q, p)}"


def criterion_4():
    v = rl.lower_lorenz(LORENZ_X).vertices
    exact = v.shape == (4, 2) and bool(np.all(v == [[0, 0], [0.9, 0.1], [1, 0.9], [1, 1]]))
    b_curve, b_lp = rl.beta_star(LORENZ_X, 0.0, "curve"), rl.beta_star(LORENZ_X, 0.0, "lp")
    ok = exact and abs(b_curve - 0.9) <= 1e-9 and abs(b_lp - 0.9) <= 1e-9 and abs(b_curve - b_lp) <= 1e-9
    return ok, f"vertices={v.tolist()} beta_curve={b_curve!r} beta_lp={b_lp!r}"


def criterion_5():
    holds = rl.relatively_majorizes(LORENZ_X, LORENZ_Y).holds
    dmax, dmin = rl.d_max(*LORENZ_Y), rl.d_min(*LORENZ_X)
    suff = rl.dmax_dmin_sufficient(LORENZ_X, LORENZ_Y)
    ok = holds and abs(dmax - 1.0) <= 1e-12 and abs(dmin + math.log2(0.9)) <= 1e-12 and not suff
    return ok, f"relmaj={holds} D_max(y)={dmax!r} D_min(x)={dmin!r} sufficient={suff}"


def _all_channel_entropies(N):
    vals = []
    for spec in ("shannon", "min", "max", "renyi:0.5", "renyi:2"):
        vals += [en.channel_entropy(N, spec, "max"), en.channel_entropy(N, spec, "min")]
    vals.append(en.kl_randomizing_entropy(N))
    vals.append(en.regularized_min_ext_estimate(N, 3))
    return vals


def criterion_6():
    equiv = ch.channel_equivalent(POINT, CHOI_M)
    zeros = all(abs(v) <= 1e-12 for N in (POINT, CHOI_M) for v in _all_channel_entropies(N))
    f_m, f_n = en.choi_entropy(CHOI_M), en.choi_entropy(POINT)
    ok = equiv and zeros and abs(f_m - 0.5) <= 1e-12 and abs(f_n) <= 1e-12
    return ok, f"equivalent={equiv} entropies_zero={zeros} choi(M)={f_m!r} choi(N)={f_n!r}"


def criterion_7(count: int = 200, seed: int = 7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        N = sample_random_channel(int(rng.integers(1, 6)), int(rng.integers(1, 6)), rng)
        hmin = renyi_entropy(en.hmin_underline_construction(N), math.inf)
        hmax = renyi_entropy(en.hmax_underline_construction(N), 0)
        ref_min = -math.log2(float(N.matrix.max()))
        ref_max = math.log2(min(int(np.count_nonzero(p)) for p in N.columns))
        worst = max(worst, abs(hmin - ref_min), abs(hmax - ref_max),
                    abs(en.channel_entropy_min_ext(N, "min") - ref_min),
                    abs(en.channel_entropy_min_ext(N, "max") - ref_max))
    return worst <= 1e-9, f"{count} channels, worst deviation {worst:.2e}"


def criterion_8(count: int = 200, seed: int = 8):
    """Condensed property sweep; the full suites live in the test modules."""
    rng = np.random.default_rng(seed)
    bad = []
    for i in range(count):
        n, m = int(rng.integers(2, 6)), int(rng.integers(1, 4))
        N = sample_random_channel(m, n, rng)
        # garble N into M so that N ⪰ M holds by construction
        mix = rng.dirichlet(np.ones(m), size=int(rng.integers(1, 4))).T
        D = sum(w * np.eye(n)[rng.permutation(n)] for w in rng.dirichlet(np.ones(3)))
        M = ch.Channel(D @ N.sorted_columns() @ mix)
        if not ch.channel_majorizes(N, M).holds:
            bad.append(f"garbling {i}")
            continue
        s = -np.sort(-rng.random(n))
        if ch.predictability(N, s) < ch.predictability(M, s) - 1e-8:
            bad.append(f"predictability {i}")
        if en.channel_entropy_max_ext(N) > en.channel_entropy_max_ext(M) + 1e-8:
            bad.append(f"entropy {i}")
        p, q = sample_random(n, rng).entries, sample_random(n, rng).entries
        x, y = (p, q), (D @ p, D @ q)
        if not (rl.relatively_majorizes(x, y).holds and _blackwell_l1(x, y)):
            bad.append(f"blackwell {i}")
        P = rng.random((n, 2))
        P /= P.sum()
        R = rng.dirichlet(np.ones(2), size=2).T  # R[w, y], columns sum to 1
        Q = np.column_stack([D @ (-np.sort(-P, axis=0) @ R[w]) for w in range(2)])
        if not cd.conditionally_majorizes(P, Q).holds:
            bad.append(f"conditional {i}")
    return not bad, f"{count} instances, violations: {bad[:5] if bad else 'none'}"


def _blackwell_l1(x, y):
    (p, q), (p2, q2) = x, y
    ts = [0.0] + [a / b for a, b in zip(np.r_[p, p2], np.r_[q, q2]) if b > 0]
    ts.append(2 * max(ts) + 1)
    return all(np.abs(p - t * q).sum() >= np.abs(p2 - t * q2).sum() - 1e-9 * max(1, t) for t in ts)


def criterion_9():
    tr = en.regularization_trend(BSC, 5)
    limit = shannon_entropy([0.9, 0.1])
    ok = tr.nondecreasing and all(v <= limit + 1e-9 for v in tr.values)
    return ok, f"values={[round(v, 12) for v in tr.values]} gap_at_k5={limit - tr.values[-1]:.3e}"


def criterion_10(count: int = 20, seed: int = 10, cap: int = 10**6):
    rng = np.random.default_rng(seed)
    fails = []
    for i in range(count):
        n = 2 + i % 2
        p = sample_random(n, rng).entries
        k = 1
        while n ** k <= cap:
            tm = en.typical_majorizer(p, 0.1, 0.1, k, cap)
            if not tm.valid:
                fails.append((i, n, k))
            k += 1
    first = fails[:4]
    return not fails, f"{len(fails)} failing (p, k) cases; first {first}" if fails else "all (p, k) valid"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def run(fast: bool = False):
    """Evaluate every criterion; ``fast`` shrinks the random sweeps."""
    out = []
    for i, fn in CRITERIA.items():
        kwargs = {"count": 40} if fast and i in (7, 8) else {}
        try:
            ok, detail = fn(**kwargs)
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((i, bool(ok), detail))
    return out

