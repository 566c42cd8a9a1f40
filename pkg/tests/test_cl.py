import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import as_plain, random_snapshot
from oracles import cl_oracle
from tempaudit import cl
from tempaudit.core import Snapshot
from tempaudit.errors import DegenerateRowWarning, ThresholdMismatch

FOUR = Snapshot(
    0, ["a", "b", "c", "d"], [0, 0, 0, 1],
    [[0.9, 0.1], [0.8, 0.2], [0.3, 0.7], [0.6, 0.4]], ["x", "y"],
)


def snap(probs, labels, ids=None):
    m = len(probs[0])
    return Snapshot(0, ids or [f"i{k}" for k in range(len(labels))], labels, probs, [f"c{k}" for k in range(m)])


def test_thresholds_hand_average():
    th = cl.compute_thresholds(snap([[0.2, 0.8], [0.4, 0.6], [0.5, 0.5]], [1, 1, 0]))
    assert th.t[1] == pytest.approx(0.7)
    assert th.support.tolist() == [1, 2]


def test_thresholds_constant_and_empty():
    th = cl.compute_thresholds(snap([[0.1, 0.9, 0.0], [0.1, 0.9, 0.0]], [1, 1]))
    assert th.t[1] == pytest.approx(0.9)
    assert np.isnan(th.t[0]) and np.isnan(th.t[2])
    assert th.defined.tolist() == [False, True, False]


def test_four_row_example():
    # t0 = (0.9 + 0.8 + 0.3) / 3 = 2/3, t1 = 0.4
    # row c: 0.3 < 2/3, 0.7 >= 0.4 -> bin (0, 1); row d: 0.6 < 2/3, 0.4 >= 0.4 -> (1, 1)
    th = cl.compute_thresholds(FOUR)
    assert th.t[0] == pytest.approx(2 / 3)
    assert th.t[1] == 0.4
    cj = cl.confident_joint(FOUR, th)
    assert cj.counts.tolist() == [[2, 1], [0, 1]]
    assert cj.assigned.tolist() == [0, 0, 1, 1]
    _, bins, C, _, _ = cl_oracle(FOUR.prob_matrix.tolist(), FOUR.noisy_labels.tolist(), 2)
    assert C == cj.counts.tolist() and bins == [0, 0, 1, 1]
    issues = cl.find_label_issues(cj, FOUR)
    assert issues == [cl.LabelIssue("c", 0, 1, 0.3)]
    q = cl.estimate_joint(cj, FOUR).q
    # rows scaled to supports 3 and 1: [2, 1], [0, 1]; total 4
    assert np.allclose(q, [[0.5, 0.25], [0.0, 0.25]], atol=1e-12)


def test_one_hot_probabilities_give_diagonal_joint():
    labels = [0, 1, 2, 2, 1, 0, 0]
    probs = np.eye(3)[labels]
    s = snap(probs, labels)
    cj = cl.confident_joint(s, cl.compute_thresholds(s))
    assert cj.counts.tolist() == np.diag([3, 2, 2]).tolist()
    assert cl.find_label_issues(cj, s) == []


def test_argmax_tie_goes_to_lowest_index():
    s = snap([[0.5, 0.5], [0.5, 0.5]], [0, 1])
    cj = cl.confident_joint(s, cl.compute_thresholds(s))
    assert cj.assigned.tolist() == [0, 0]
    assert cj.counts.tolist() == [[1, 0], [1, 0]]


def test_unassigned_rows_are_excluded():
    # t0 = 0.75, t1 = 0.75; row 3 (0.5, 0.5) clears neither
    s = snap([[1.0, 0.0], [0.5, 0.5], [0.0, 1.0], [0.5, 0.5]], [0, 0, 1, 1])
    cj = cl.confident_joint(s, cl.compute_thresholds(s))
    assert cj.assigned.tolist() == [0, -1, 1, -1]
    assert cj.n_unassigned == 2
    assert cj.counts.sum() == 2


def test_threshold_mismatch():
    th = cl.compute_thresholds(snap([[0.2, 0.3, 0.5]], [2]))
    with pytest.raises(ThresholdMismatch):
        cl.confident_joint(FOUR, th)


def test_estimate_joint_hand_formula():
    labels = [0] * 6 + [1] * 4
    s = snap([[0.5, 0.5]] * 10, labels)
    C = np.array([[4, 2], [1, 3]])
    cj = cl.ConfidentJoint(C, np.zeros(10, dtype=int))
    q = cl.estimate_joint(cj, s).q
    # independent evaluation with exact fractions
    support = [6, 4]
    scaled = [[Fraction(int(C[i, j]), int(C[i].sum())) * support[i] for j in range(2)] for i in range(2)]
    total = sum(map(sum, scaled))
    expected = [[float(v / total) for v in row] for row in scaled]
    assert np.allclose(q, expected, atol=1e-12)
    assert np.allclose(q, [[0.4, 0.2], [0.1, 0.3]], atol=1e-12)


def test_estimate_joint_diagonal():
    s = snap([[1.0, 0.0]] * 5 + [[0.0, 1.0]] * 5, [0] * 5 + [1] * 5)
    cj = cl.ConfidentJoint(np.diag([5, 5]), np.array([0] * 5 + [1] * 5))
    assert np.allclose(cl.estimate_joint(cj, s).q, [[0.5, 0.0], [0.0, 0.5]])


def test_degenerate_row_warns_and_gets_zero_mass():
    s = snap([[1.0, 0.0]] * 3 + [[0.0, 1.0]], [0, 0, 0, 1])
    cj = cl.ConfidentJoint(np.array([[3, 0], [0, 0]]), np.array([0, 0, 0, -1]))
    with pytest.warns(DegenerateRowWarning):
        est = cl.estimate_joint(cj, s)
    assert est.degenerate_rows == (1,)
    assert est.q.tolist() == [[1.0, 0.0], [0.0, 0.0]]


def test_ranking_ties_break_by_id():
    # t0 = 0.44, t1 = 0.7
    s = snap([[0.1, 0.9], [0.9, 0.1], [0.1, 0.9], [0.9, 0.1], [0.2, 0.8], [0.3, 0.7]], [0, 0, 0, 0, 0, 1],
             ids=["zeta", "k1", "alpha", "k2", "mid", "one"])
    cj = cl.confident_joint(s, cl.compute_thresholds(s))
    issues = cl.find_label_issues(cj, s)
    assert [i.id for i in issues] == ["alpha", "zeta", "mid"]
    assert all(i.suggested == 1 and i.given == 0 for i in issues)


def test_well_separated_snapshot_recovers_exact_errors(rng):
    n, m = 300, 3
    true = rng.integers(0, m, size=n)
    noisy = np.where(rng.random(n) < 0.25, (true + rng.integers(1, m, size=n)) % m, true)
    s = Snapshot(0, [f"x{k}" for k in range(n)], noisy, np.eye(m)[true], ["a", "b", "c"])
    cj = cl.confident_joint(s, cl.compute_thresholds(s))
    found = {i.id for i in cl.find_label_issues(cj, s)}
    assert found == {f"x{k}" for k in np.flatnonzero(noisy != true)}


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12), st.integers(2, 4))
def test_matches_oracle_and_invariants(seed, n, m):
    s = random_snapshot(np.random.default_rng(seed), n, m)
    p = as_plain(s)
    t, bins, C, Q, degenerate = cl_oracle(p["probs"], p["labels"], m)
    th = cl.compute_thresholds(s)
    for j in range(m):
        assert (t[j] is None and np.isnan(th.t[j])) or t[j] == th.t[j]
    cj = cl.confident_joint(s, th)
    assert cj.counts.tolist() == C
    assert [None if b < 0 else b for b in cj.assigned.tolist()] == bins
    # bin disjointness
    assert cj.counts.sum() == n - cj.n_unassigned <= n
    assert (cj.counts.sum(axis=1) <= np.bincount(s.noisy_labels, minlength=m)).all()
    assert not degenerate
    est = cl.estimate_joint(cj, s)
    assert np.allclose(est.q, [[float(v) for v in r] for r in Q], atol=1e-9, rtol=0)
    assert abs(est.q.sum() - 1.0) <= 1e-9
    assert np.allclose(est.q.sum(axis=1), np.bincount(s.noisy_labels, minlength=m) / n, atol=1e-9)
    issues = cl.find_label_issues(cj, s)
    assert all(i.given != i.suggested for i in issues)
    keys = [(i.self_confidence, i.id) for i in issues]
    assert keys == sorted(keys)


def test_estimates_ignore_everything_but_probabilities_and_labels(rng):
    s = random_snapshot(rng, 10, 3)
    renamed = Snapshot(7, [f"other{k}" for k in range(10)], s.noisy_labels, s.prob_matrix, ["p", "q", "r"])
    a = cl.confident_joint(s, cl.compute_thresholds(s))
    b = cl.confident_joint(renamed, cl.compute_thresholds(renamed))
    assert (a.counts == b.counts).all()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert np.array_equal(cl.estimate_joint(a, s).q, cl.estimate_joint(b, renamed).q)
