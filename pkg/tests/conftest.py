import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rand_prob(rng, n, sparse=False):
    """Random distribution; with ``sparse`` some entries are zeroed."""
    v = rng.dirichlet(np.full(n, rng.choice([0.3, 1.0, 3.0])))
    if sparse and n > 1:
        v[rng.random(n) < 0.3] = 0.0
        if v.sum() == 0:
            v[0] = 1.0
        v = v / v.sum()
    return v


ACCEPTANCE = {}


def record(criterion: int, passed: bool, detail: str):
    """Store one acceptance line; printed in the terminal summary."""
    ACCEPTANCE[criterion] = (bool(passed), detail)
    print(f"{'PASS' if passed else 'FAIL'} criterion {criterion:2d}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k:2d}: {detail}")
