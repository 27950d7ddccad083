import itertools
import math

import numpy as np
import pytest

from shuffled_regression.data import SyntheticSpec, generate


def synthetic(m, n, alpha=1.0, snr_db=math.inf, seed=0):
    return generate(SyntheticSpec(m, n, alpha, snr_db, seed))


def all_perms(m):
    return np.array(list(itertools.permutations(range(m))), dtype=np.intp)


def random_orthonormal(rng, m, r):
    q, _ = np.linalg.qr(rng.standard_normal((m, r)))
    return q


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
