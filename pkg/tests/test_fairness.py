import numpy as np
import pytest
from hypothesis import given, strategies as st

from tempaudit.core import Snapshot, TimeFrame
from tempaudit.errors import FrameMismatch, HypothesisUnmet, MissingTruth, OutOfRange, SeriesTooShort
from tempaudit.fairness import (
    BIAS_TAXONOMY,
    AuditConfig,
    CompletenessResult,
    LabelSetManifest,
    ReliabilityResult,
    Uncovered,
    check_completeness,
    check_fairness,
    check_reliability,
    is_reliable,
    tag_biases,
    theorem1_check,
    theorem2_check,
)
from tempaudit.temporal import ChangeRate, SnapshotSeries, confident_label_changes
from tempaudit.toy import toy_series

BINARY = ["male", "female"]


def two_point_series(ids=("a", "b", "c")):
    snaps = [
        Snapshot(t, list(ids), [0, 1, 0][: len(ids)], np.eye(2)[[0, 1, 0][: len(ids)]], BINARY)
        for t in (0, 5)
    ]
    return SnapshotSeries.from_snapshots(snaps)


def truth_all(series, mapping):
    return {s.time: dict(mapping) for s in series}


def test_nonbinary_datapoint_makes_label_set_incomplete():
    series = two_point_series()
    truth = truth_all(series, {"a": "male", "b": "female", "c": "nonbinary"})
    result = check_completeness(LabelSetManifest.from_names({0: BINARY}), series, truth)
    assert not result.complete
    assert [(u.id, u.label) for u in result.uncovered] == [("c", "nonbinary"), ("c", "nonbinary")]
    assert {u.time for u in result.uncovered} == {0, 5}


def test_single_uncovered_triple():
    series = two_point_series()
    truth = {0: {"a": "male", "b": "female", "c": "male"}, 5: {"a": "male", "b": "female", "c": "nonbinary"}}
    result = check_completeness(LabelSetManifest.from_names({0: BINARY}), series, truth)
    assert len(result.uncovered) == 1


def test_covering_manifest_is_complete():
    series = two_point_series()
    truth = truth_all(series, {"a": "male", "b": "female", "c": "male"})
    assert check_completeness(LabelSetManifest.from_names({0: BINARY}), series, truth).complete


def test_label_added_at_last_timestamp_covers_earlier_need():
    series = two_point_series()
    truth = truth_all(series, {"a": "male", "b": "female", "c": "nonbinary"})
    manifest = LabelSetManifest.from_names({0: BINARY, 5: BINARY + ["nonbinary"]})
    result = check_completeness(manifest, series, truth)
    assert result.complete
    assert [(u.id, u.time) for u in result.covered_by_union_only] == [("c", 0)]


def test_intermediate_only_labels_are_reported():
    snaps = [Snapshot(t, ["a"], [0], [[1.0, 0.0]], BINARY) for t in (0, 1, 2)]
    series = SnapshotSeries.from_snapshots(snaps)
    manifest = LabelSetManifest.from_names({0: BINARY, 1: BINARY + ["queer"], 2: BINARY})
    truth = {0: {"a": "male"}, 1: {"a": "queer"}, 2: {"a": "male"}}
    result = check_completeness(manifest, series, truth)
    assert not result.complete
    assert result.intermediate_only_labels == ("queer",)


def test_completeness_errors():
    series = two_point_series()
    with pytest.raises(MissingTruth):
        check_completeness(LabelSetManifest.from_names({0: BINARY}), series, {0: {"a": "male"}})
    with pytest.raises(FrameMismatch):
        check_completeness(LabelSetManifest.from_names({3: BINARY}), series, {})


def cfg(pi, frame):
    return AuditConfig(pi=pi, frame=frame)


def test_reliability_on_toy():
    series, truth, _ = toy_series()
    assert check_reliability(series, truth, cfg(0.5, series.frame), "male").reliable
    at_boundary = check_reliability(series, truth, cfg(0.4, series.frame), "male")
    assert at_boundary.epsilon.epsilon == pytest.approx(0.4)
    # 0.8 - 0.4 in floating point is 0.4 exactly
    assert not at_boundary.reliable


def test_reliability_drift_free():
    series = two_point_series()
    truth = truth_all(series, {"a": "male", "b": "female", "c": "male"})
    for pi in (1e-9, 0.3, 1.0):
        assert check_reliability(series, truth, cfg(pi, series.frame)).reliable


def test_reliability_errors():
    series, truth, _ = toy_series()
    short = SnapshotSeries.from_snapshots(series.snapshots[:1])
    with pytest.raises(SeriesTooShort):
        check_reliability(short, truth, cfg(0.5, short.frame))
    with pytest.raises(FrameMismatch):
        check_reliability(series, truth, cfg(0.5, TimeFrame((0, 2))))
    with pytest.raises(OutOfRange):
        AuditConfig(pi=0.0, frame=series.frame)


def _comp(ok, frame=TimeFrame((0, 1))):
    return CompletenessResult(ok, frame)


def _rel(eps, pi, frame=TimeFrame((0, 1))):
    return ReliabilityResult(is_reliable(eps, pi), ChangeRate(eps), pi, frame)


@pytest.mark.parametrize(
    "complete, eps, pi, fair",
    [(True, 0.1, 0.5, True), (False, 0.1, 0.5, False), (True, 0.5, 0.5, False), (True, 0.6, 0.5, False)],
)
def test_fairness_conjunction(complete, eps, pi, fair):
    assert check_fairness(_comp(complete), _rel(eps, pi)).fair is fair


def test_fairness_frame_mismatch():
    with pytest.raises(FrameMismatch):
        check_fairness(_comp(True, TimeFrame((0, 2))), _rel(0.1, 0.5))


def test_theorem1():
    assert theorem1_check(True, 0.3, 0.5).holds
    assert theorem1_check(True, 0.3, 0.5).slack == pytest.approx(0.2)
    assert not theorem1_check(True, 0.5, 0.5).holds
    with pytest.raises(HypothesisUnmet):
        theorem1_check(False, 0.1, 0.5)


def test_theorem2():
    ok = theorem2_check(0.2, 0.2, 0.5)
    assert ok.holds and ok.slack == pytest.approx(0.1)
    assert not theorem2_check(0.2, 0.4, 0.5).holds
    assert theorem2_check(ChangeRate(0.2), 0.0, 0.5).holds
    boundary = theorem2_check(0.25, 0.25, 0.5)
    assert boundary.holds and boundary.slack == 0.0
    with pytest.raises(HypothesisUnmet):
        theorem2_check(0.5, 0.0, 0.5)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(1e-6, 1))
def test_pi_monotonicity(eps, pi, pi_bigger):
    pi2 = max(pi, pi_bigger)
    if pi <= 0:
        return
    if is_reliable(eps, pi):
        assert is_reliable(eps, pi2)
        for complete in (True, False):
            if check_fairness(_comp(complete), _rel(eps, pi)).fair:
                assert check_fairness(_comp(complete), _rel(eps, pi2)).fair


@given(st.floats(0, 1), st.floats(1e-6, 1), st.booleans())
def test_theorem1_agrees_with_pipeline(eps, pi, complete):
    verdict = check_fairness(_comp(complete), _rel(eps, pi))
    assert not verdict.fair or (verdict.complete and verdict.reliable)
    if complete:
        assert theorem1_check(True, eps, pi).holds == verdict.fair


@given(st.floats(0, 1), st.floats(1e-6, 1))
def test_theorem2_with_no_change_is_theorem1_hypothesis(eps, pi):
    if eps < pi:
        assert theorem2_check(eps, 0.0, pi).holds == theorem1_check(True, eps, pi).holds is True


def test_bias_tags_for_uncovered_datapoint():
    series = two_point_series()
    truth = truth_all(series, {"a": "male", "b": "female", "c": "nonbinary"})
    comp = check_completeness(LabelSetManifest.from_names({0: BINARY}), series, truth)
    kinds = {t.kind for t in tag_biases(comp)}
    assert kinds == {"label-quality", "exclusion", "time-interval", "misclassification"}
    assert all("c@t" in e for t in tag_biases(comp) for e in t.evidence)


def test_bias_tags_for_flipping_datapoint():
    ids = ["a", "b", "c"]
    s0 = Snapshot(0, ids, [0, 1, 1], np.eye(2)[[0, 1, 1]], BINARY)
    s1 = Snapshot(1, ids, [0, 1, 1], np.eye(2)[[0, 1, 0]], BINARY)
    series = SnapshotSeries.from_snapshots([s0, s1])
    comp = CompletenessResult(True, series.frame)
    tags = tag_biases(comp, confident_label_changes(series))
    assert [t.kind for t in tags] == ["chronological", "misclassification"]
    assert tags[0].evidence == ("c: 'female'@t0 -> 'male'@t1",)


def test_clean_audit_has_no_tags():
    series, truth, manifest = toy_series()
    comp = check_completeness(manifest, series, truth)
    assert tag_biases(comp, confident_label_changes(series)) == []


def test_tags_come_from_taxonomy():
    comp = CompletenessResult(False, TimeFrame((0,)), uncovered=(Uncovered("x", 0, "y"),))
    for t in tag_biases(comp):
        assert t.kind in BIAS_TAXONOMY and t.family == BIAS_TAXONOMY[t.kind][0]
