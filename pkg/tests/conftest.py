import numpy as np
import pytest

from tempaudit.core import Snapshot
from tempaudit.temporal import SnapshotSeries


def random_snapshot(rng, n, m, time=0, ids=None):
    """Snapshot with probabilities on a coarse grid, so ties and exact
    threshold hits are common."""
    w = rng.integers(0, 4, size=(n, m)).astype(float)
    empty = w.sum(axis=1) == 0
    w[empty, rng.integers(0, m, size=empty.sum())] = 1.0
    probs = w / w.sum(axis=1, keepdims=True)
    labels = rng.integers(0, m, size=n)
    ids = ids if ids is not None else [f"x{k}" for k in range(n)]
    truth = rng.integers(0, m, size=n)
    return Snapshot(time, ids, labels, probs, [f"c{k}" for k in range(m)], true_labels=truth)


def random_series(rng, max_times=3, max_points=6, max_classes=3):
    """Series over a shared pool of ids where each id may be absent at any time."""
    n_times = int(rng.integers(2, max_times + 1))
    m = int(rng.integers(2, max_classes + 1))
    pool = [f"p{k}" for k in range(max_points)]
    snaps = []
    for t in range(n_times):
        present = [d for d in pool if rng.random() < 0.8] or [pool[0]]
        order = list(rng.permutation(present))
        snaps.append(random_snapshot(rng, len(order), m, time=t * 2, ids=order))
    return SnapshotSeries.from_snapshots(snaps)


def as_plain(s):
    return {
        "ids": list(s.ids),
        "labels": [int(y) for y in s.noisy_labels],
        "probs": [[float(p) for p in row] for row in s.prob_matrix],
        "m": s.m,
        "truth": [int(y) for y in s.true_labels],
    }


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
