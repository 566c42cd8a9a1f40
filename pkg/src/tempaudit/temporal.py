"""Change rates and temporal confident joints across timestamped snapshots."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

from . import cl
from .core import (
    ConfusionMatrix,
    LabelPartition,
    Snapshot,
    TimeFrame,
    accuracy,
    build_confusion,
)
from .errors import (
    InvariantViolation,
    MissingTruth,
    OutOfRange,
    SameLabel,
    SeriesTooShort,
    ZeroMarginal,
)

# time -> datapoint id -> correct label name
Truth = Mapping[int, Mapping[str, str]]
Direction = Literal["shrink", "grow"]

MULTIPLICATIVE_READING_NOTE = (
    "temporal error probability scales p(noisy=i) at the earlier time by (1 - eps); "
    "adding (1 - eps) to p(noisy=i) instead gives "
    "0.6 * (0.4 + 0.6) / 0.5 = 1.2 on the two-snapshot toy example, not a probability, "
    "while the multiplicative reading gives 0.288"
)


@dataclass(frozen=True, eq=False)
class SnapshotSeries:
    frame: TimeFrame
    snapshots: tuple[Snapshot, ...]

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        object.__setattr__(self, "snapshots", snaps)
        if tuple(s.time for s in snaps) != self.frame.timestamps:
            raise InvariantViolation(
                f"snapshot times {[s.time for s in snaps]} do not match frame {list(self.frame)}"
            )
        if any(s.classes != snaps[0].classes for s in snaps):
            raise InvariantViolation("all snapshots in a series must share the same classes")

    @classmethod
    def from_snapshots(cls, snapshots: Sequence[Snapshot]) -> "SnapshotSeries":
        snaps = sorted(snapshots, key=lambda s: s.time)
        return cls(TimeFrame(tuple(s.time for s in snaps)), tuple(snaps))

    def __len__(self):
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    @property
    def classes(self) -> tuple[str, ...]:
        return self.snapshots[0].classes

    def at(self, time: int) -> Snapshot:
        for s in self.snapshots:
            if s.time == time:
                return s
        raise KeyError(time)

    def population(self) -> list[str]:
        """Union of datapoint ids across the series, in first-seen order."""
        seen = {}
        for s in self.snapshots:
            for d in s.ids:
                seen.setdefault(d, None)
        return list(seen)


@dataclass(frozen=True)
class ChangeRate:
    epsilon: float
    from_time: int | None = None
    to_time: int | None = None
    basis: str = "overall"


def _check_rate(x: float, name: str):
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"{name}={x!r} is not a rate in [0, 1]")


def change_rate(acc_t1: float, acc_tn: float, *, from_time=None, to_time=None, basis="overall") -> ChangeRate:
    """Absolute difference between two accuracies."""
    _check_rate(acc_t1, "acc_t1")
    _check_rate(acc_tn, "acc_tn")
    return ChangeRate(abs(float(acc_t1) - float(acc_tn)), from_time, to_time, basis)


def truth_from_series(series: SnapshotSeries) -> dict[int, dict[str, str]]:
    """Read ground truth out of snapshots that carry ``true_labels``."""
    out = {}
    for s in series:
        if s.true_labels is None:
            raise MissingTruth(f"snapshot t={s.time} carries no true labels")
        out[s.time] = {d: s.classes[k] for d, k in zip(s.ids, s.true_labels) if k >= 0}
    return out


def snapshot_confusion(s: Snapshot, truth: Truth) -> tuple[ConfusionMatrix, int]:
    """Confusion matrix of noisy labels against annotated truth at one snapshot.

    Returns the matrix and the number of datapoints left out because their
    correct label is not one of the snapshot's classes.
    """
    if s.time not in truth:
        raise MissingTruth(f"no truth annotations at t={s.time}")
    at_t = truth[s.time]
    index = {c: k for k, c in enumerate(s.classes)}
    predicted, actual = [], []
    outside = 0
    for d, noisy in zip(s.ids, s.noisy_labels):
        if d not in at_t:
            raise MissingTruth(f"no truth annotation for id {d!r} at t={s.time}")
        k = index.get(at_t[d])
        if k is None:
            outside += 1
            continue
        predicted.append(int(noisy))
        actual.append(k)
    if not predicted:
        raise MissingTruth(f"no datapoint at t={s.time} has a correct label among {s.classes}")
    return build_confusion(predicted, actual, LabelPartition.from_names(s.classes, s.time)), outside


def accuracy_on(cm: ConfusionMatrix, reference: int | str | None = None) -> float:
    """Overall accuracy, or the per-class accuracy (recall) of ``reference``."""
    return accuracy(cm) if reference is None else cm.tpr(reference)


def basis_name(reference: int | str | None, classes: Sequence[str]) -> str:
    if reference is None:
        return "overall"
    return f"class:{classes[reference] if isinstance(reference, (int, np.integer)) else reference}"


def pairwise_change_rate(
    earlier: ConfusionMatrix, later: ConfusionMatrix, reference: int | str | None = None,
    from_time: int | None = None, to_time: int | None = None,
) -> ChangeRate:
    return change_rate(
        accuracy_on(earlier, reference), accuracy_on(later, reference),
        from_time=from_time, to_time=to_time,
        basis=basis_name(reference, earlier.class_order.names),
    )


def series_change_rate(
    series: SnapshotSeries, truth: Truth, reference: int | str | None = None
) -> ChangeRate:
    """Change rate between the first and last snapshot of a series.

    Only the endpoints enter. With ``reference`` set, the per-class accuracy
    of that class is compared instead of the overall accuracy.
    """
    if len(series) < 2:
        raise SeriesTooShort("a change rate needs at least 2 snapshots")
    first, last = series.snapshots[0], series.snapshots[-1]
    cm1, _ = snapshot_confusion(first, truth)
    cmn, _ = snapshot_confusion(last, truth)
    return pairwise_change_rate(cm1, cmn, reference, first.time, last.time)


def step_change_rates(
    series: SnapshotSeries, truth: Truth, reference: int | str | None = None
) -> list[ChangeRate]:
    """Change rate between each pair of consecutive snapshots."""
    cms = [snapshot_confusion(s, truth)[0] for s in series]
    return [
        pairwise_change_rate(a, b, reference, s.time, t.time)
        for a, b, s, t in zip(cms, cms[1:], series.snapshots, series.snapshots[1:])
    ]


@dataclass(frozen=True)
class TemporalErrorProbability:
    value: float
    raw: float
    clamped: bool
    direction: str

    def __float__(self):
        return self.value


def temporal_error_probability(
    cm_later: ConfusionMatrix,
    cm_earlier: ConfusionMatrix,
    eps: ChangeRate | float,
    wrong: int | str,
    correct: int | str,
    direction: Direction = "shrink",
) -> TemporalErrorProbability:
    """Probability that label ``wrong`` is given at the later time to a
    datapoint whose correct label at the earlier time was ``correct``.

    Computed as::

        p(true=j | noisy=i)_later * p(noisy=i)_earlier * (1 -/+ eps) / p(true=j)_earlier

    ``direction="shrink"`` uses ``1 - eps`` and ``"grow"`` uses ``1 + eps``.
    Values above 1 are clamped and flagged.
    """
    if direction not in ("shrink", "grow"):
        raise ValueError(f"direction must be 'shrink' or 'grow', not {direction!r}")
    e = eps.epsilon if isinstance(eps, ChangeRate) else float(eps)
    _check_rate(e, "epsilon")
    names = cm_later.class_order.names
    if cm_earlier.class_order.names != names:
        raise InvariantViolation("both matrices must share the same class order")
    i = cm_later.class_order.index_of(wrong)
    j = cm_later.class_order.index_of(correct)
    if i == j:
        raise SameLabel("wrong and correct labels must differ")
    later, earlier = cm_later.counts, cm_earlier.counts
    row_later = int(later[i].sum())
    col_earlier = int(earlier[:, j].sum())
    if row_later == 0:
        raise ZeroMarginal(f"no datapoints labeled {names[i]!r} at the later time")
    if col_earlier == 0:
        raise ZeroMarginal(f"no datapoints actually {names[j]!r} at the earlier time")
    n_earlier = cm_earlier.total
    true_given_noisy_later = later[i, j] / row_later
    noisy_earlier = earlier[i].sum() / n_earlier
    true_earlier = col_earlier / n_earlier
    factor = 1.0 - e if direction == "shrink" else 1.0 + e
    raw = float(true_given_noisy_later * (noisy_earlier * factor) / true_earlier)
    return TemporalErrorProbability(min(raw, 1.0), raw, raw > 1.0, direction)


def _series_bins(series: SnapshotSeries) -> list[np.ndarray]:
    bins = []
    for s in series:
        bins.append(cl.confident_joint(s, cl.compute_thresholds(s)).assigned)
    return bins


def _temporal_count(series: SnapshotSeries, wrong: int, correct: int, earlier_class) -> int:
    if len(series) < 2:
        raise SeriesTooShort("a temporal confident joint needs at least 2 snapshots")
    snaps = series.snapshots
    total = 0
    for b in range(1, len(snaps)):
        later = snaps[b]
        labeled = [d for d, y in zip(later.ids, later.noisy_labels) if y == wrong]
        for a in range(b):
            cls_before = earlier_class[a]
            earlier = snaps[a]
            for d in labeled:
                k = earlier.row_of(d)
                if k is not None and cls_before[k] == correct:
                    total += 1
    return total


def _resolve(series: SnapshotSeries, label) -> int:
    return series.snapshots[0].partition.index_of(label)


def temporal_confident_joint_pair(
    series: SnapshotSeries, wrong: int | str, correct: int | str, exact: bool = False
) -> int:
    """Count (later, earlier, datapoint) triples where the datapoint is labeled
    ``wrong`` at the later time and was of class ``correct`` at the earlier one.

    Summed over every ordered pair of timestamps. A datapoint counts only when
    present at both times. The earlier class is its confident-joint bin, or
    its true label when ``exact`` is set.
    """
    i, j = _resolve(series, wrong), _resolve(series, correct)
    if len(series) < 2:
        raise SeriesTooShort("a temporal confident joint needs at least 2 snapshots")
    if exact:
        if any(s.true_labels is None for s in series):
            raise MissingTruth("exact temporal joint needs true labels on every snapshot")
        earlier_class = [s.true_labels for s in series]
    else:
        earlier_class = _series_bins(series)
    return _temporal_count(series, i, j, earlier_class)


def temporal_confident_joint_fixed(
    series: SnapshotSeries, label: int | str, exact: bool = False
) -> int:
    """Temporal confident joint with the same label on both sides."""
    return temporal_confident_joint_pair(series, label, label, exact=exact)


def temporal_joint_matrix(series: SnapshotSeries, exact: bool = False) -> np.ndarray:
    """All (wrong, correct) temporal counts at once; the diagonal is the fixed-label joint."""
    if len(series) < 2:
        raise SeriesTooShort("a temporal confident joint needs at least 2 snapshots")
    m = len(series.classes)
    earlier_class = [s.true_labels for s in series] if exact else _series_bins(series)
    out = np.zeros((m, m), dtype=np.int64)
    snaps = series.snapshots
    for b in range(1, len(snaps)):
        later = snaps[b]
        for a in range(b):
            earlier = snaps[a]
            rows = np.array([earlier.row_of(d) if earlier.row_of(d) is not None else -1 for d in later.ids])
            present = rows >= 0
            before = earlier_class[a][rows[present]]
            ok = before >= 0
            np.add.at(out, (later.noisy_labels[present][ok], before[ok]), 1)
    return out


@dataclass(frozen=True)
class LabelChange:
    id: str
    from_time: int
    to_time: int
    from_label: str
    to_label: str


def confident_label_changes(series: SnapshotSeries) -> list[LabelChange]:
    """Datapoints whose confident class differs between consecutive observations.

    Snapshots where a datapoint is absent or unassigned are skipped over.
    """
    bins = _series_bins(series)
    classes = series.classes
    last: dict[str, tuple[int, int]] = {}
    changes = []
    for s, assigned in zip(series, bins):
        for d, k in zip(s.ids, assigned):
            if k == cl.UNASSIGNED:
                continue
            prev = last.get(d)
            if prev is not None and prev[1] != k:
                changes.append(LabelChange(d, prev[0], s.time, classes[prev[1]], classes[k]))
            last[d] = (s.time, int(k))
    return changes
