"""Confident learning on a single snapshot.

Counting: per-class thresholds and the confident joint.
Pruning: datapoints binned off the diagonal are label issues.
Ranking: issues are ordered by self-confidence, least confident first.

Everything here depends only on the predicted probabilities and the noisy
labels of a :class:`~tempaudit.core.Snapshot`, never on features.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import Snapshot, _frozen
from .errors import DegenerateJoint, DegenerateRowWarning, ThresholdMismatch

UNASSIGNED = -1


@dataclass(frozen=True, eq=False)
class Thresholds:
    """Average self-confidence per class.

    ``t[j]`` is NaN for a class no datapoint is labeled with; such a class
    can never be a confident candidate.
    """

    t: np.ndarray
    support: np.ndarray

    @property
    def defined(self) -> np.ndarray:
        return self.support > 0


@dataclass(frozen=True, eq=False)
class ConfidentJoint:
    """Confident joint counts plus each datapoint's bin.

    ``counts[i, j]`` is the number of datapoints labeled ``i`` that are
    confidently of class ``j``. ``assigned[k]`` is the confident class of row
    ``k`` of the snapshot (the bin is ``(noisy_labels[k], assigned[k])``), or
    ``UNASSIGNED`` if the row clears no threshold.
    """

    counts: np.ndarray
    assigned: np.ndarray

    @property
    def n_unassigned(self) -> int:
        return int(np.sum(self.assigned == UNASSIGNED))


@dataclass(frozen=True, eq=False)
class JointEstimate:
    q: np.ndarray
    degenerate_rows: tuple[int, ...] = ()


@dataclass(frozen=True)
class LabelIssue:
    id: str
    given: int
    suggested: int
    self_confidence: float


def compute_thresholds(s: Snapshot) -> Thresholds:
    """Per-class mean of ``P[x, j]`` over the datapoints labeled ``j``."""
    support = np.bincount(s.noisy_labels, minlength=s.m)
    # bincount accumulates in row order, so the sum is reproducible by a plain loop.
    sums = np.bincount(s.noisy_labels, weights=s.self_confidence(), minlength=s.m)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(support > 0, sums / np.maximum(support, 1), np.nan)
    return Thresholds(_frozen(t), _frozen(support))


def confident_joint(s: Snapshot, th: Thresholds) -> ConfidentJoint:
    """Bin every datapoint by (noisy label, most probable class clearing its threshold).

    Ties in the arg max go to the lowest class index. Datapoints clearing no
    threshold stay unassigned and are left out of the counts.
    """
    if th.t.shape != (s.m,) or th.support.shape != (s.m,):
        raise ThresholdMismatch(f"thresholds for {th.t.shape[0]} classes, snapshot has {s.m}")
    with np.errstate(invalid="ignore"):
        above = s.prob_matrix >= th.t[None, :]  # NaN compares False
    candidate = np.where(above, s.prob_matrix, -np.inf)
    best = np.argmax(candidate, axis=1) if s.n else np.zeros(0, dtype=np.int64)
    assigned = np.where(above.any(axis=1), best, UNASSIGNED).astype(np.int64)
    ok = assigned != UNASSIGNED
    m = s.m
    counts = np.bincount(s.noisy_labels[ok] * m + assigned[ok], minlength=m * m).reshape(m, m)
    return ConfidentJoint(_frozen(counts.astype(np.int64)), _frozen(assigned))


def estimate_joint(cj: ConfidentJoint, s: Snapshot) -> JointEstimate:
    """Normalize the confident joint into a joint distribution.

    Each row is scaled to sum to the number of datapoints carrying that noisy
    label, then the whole matrix is scaled to sum to 1. A supported class
    whose row is all zero keeps zero mass and triggers
    :class:`DegenerateRowWarning`.
    """
    counts = cj.counts.astype(np.float64)
    support = np.bincount(s.noisy_labels, minlength=s.m).astype(np.float64)
    row_sums = counts.sum(axis=1)
    degenerate = tuple(int(i) for i in np.flatnonzero((support > 0) & (row_sums == 0)))
    if degenerate:
        names = [s.classes[i] for i in degenerate]
        warnings.warn(
            f"snapshot t={s.time}: no confidently counted examples for labeled classes {names}",
            DegenerateRowWarning,
            stacklevel=2,
        )
    scaled = np.zeros_like(counts)
    live = row_sums > 0
    scaled[live] = counts[live] / row_sums[live, None] * support[live, None]
    total = scaled.sum()
    if total == 0:
        raise DegenerateJoint(f"snapshot t={s.time}: confident joint has no mass")
    return JointEstimate(_frozen(scaled / total), degenerate)


def find_label_issues(cj: ConfidentJoint, s: Snapshot) -> list[LabelIssue]:
    """Datapoints whose confident class differs from their given label.

    Sorted by ascending self-confidence, ties broken by id.
    """
    rows = np.flatnonzero((cj.assigned != UNASSIGNED) & (cj.assigned != s.noisy_labels))
    conf = s.self_confidence()
    issues = [
        LabelIssue(s.ids[k], int(s.noisy_labels[k]), int(cj.assigned[k]), float(conf[k]))
        for k in rows
    ]
    issues.sort(key=lambda issue: (issue.self_confidence, issue.id))
    return issues
