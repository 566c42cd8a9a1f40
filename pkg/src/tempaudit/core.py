"""Shared domain types, confusion matrices and the scalar rates built on them.

Confusion matrices are oriented with rows = predicted (noisy) label and
columns = actual (true) label. Counts are exact integers; rates are floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    EmptyMatrix,
    IndexOutOfRange,
    InvariantViolation,
    LengthMismatch,
    SameLabel,
    ShapeMismatch,
    ZeroMarginal,
)

ROW_SUM_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ClassLabel:
    name: str
    index: int

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise InvariantViolation("class label name must be a non-empty string")
        if self.index < 0:
            raise InvariantViolation(f"class label index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class LabelPartition:
    """The admissible class labels valid at one timestamp."""

    labels: tuple[ClassLabel, ...]
    valid_at: int = 0

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) < 2:
            raise InvariantViolation("a label partition needs at least 2 labels")
        names = [lab.name for lab in self.labels]
        if len(set(names)) != len(names):
            raise InvariantViolation(f"duplicate label names in partition: {names}")
        indices = [lab.index for lab in self.labels]
        if len(set(indices)) != len(indices):
            raise InvariantViolation(f"duplicate label indices in partition: {indices}")

    @classmethod
    def from_names(cls, names: Sequence[str], valid_at: int = 0) -> "LabelPartition":
        return cls(tuple(ClassLabel(n, i) for i, n in enumerate(names)), valid_at)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(lab.name for lab in self.labels)

    def __len__(self):
        return len(self.labels)

    def __contains__(self, name):
        return name in self.names

    def index_of(self, label: int | str) -> int:
        """Resolve a label given by name or ordinal to its ordinal."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < len(self.labels):
                raise IndexOutOfRange(f"label index {label} outside [0, {len(self.labels)})")
            return int(label)
        for lab in self.labels:
            if lab.name == label:
                return lab.index
        raise IndexOutOfRange(f"unknown label {label!r}; partition has {list(self.names)}")


@dataclass(frozen=True)
class TimeFrame:
    timestamps: tuple[int, ...]

    def __post_init__(self):
        ts = tuple(int(t) for t in self.timestamps)
        object.__setattr__(self, "timestamps", ts)
        if not ts:
            raise InvariantViolation("a time frame needs at least one timestamp")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvariantViolation(f"timestamps must be strictly increasing: {ts}")

    @property
    def first(self) -> int:
        return self.timestamps[0]

    @property
    def last(self) -> int:
        return self.timestamps[-1]

    def __len__(self):
        return len(self.timestamps)

    def __iter__(self):
        return iter(self.timestamps)


@dataclass(frozen=True, eq=False)
class Snapshot:
    """One timestamped view of a dataset.

    Parameters
    ----------
    time : int
        Time index of the snapshot.
    ids : sequence of str
        Datapoint identifiers, unique.
    noisy_labels : array of int, shape (n,)
        Given (possibly wrong) label index per datapoint.
    prob_matrix : array of float, shape (n, m)
        Out-of-sample predicted probabilities; each row sums to 1.
    classes : sequence of str
        Class names, column order of ``prob_matrix``.
    true_labels : array of int, optional
        Ground-truth label index per datapoint, -1 when the true label lies
        outside ``classes``. Only available for simulated or annotated data.
    """

    time: int
    ids: tuple[str, ...]
    noisy_labels: np.ndarray
    prob_matrix: np.ndarray
    classes: tuple[str, ...]
    true_labels: np.ndarray | None = None
    _row: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ids = tuple(str(i) for i in self.ids)
        classes = tuple(self.classes)
        labels = np.array(self.noisy_labels, dtype=np.int64).reshape(-1)
        probs = np.array(self.prob_matrix, dtype=np.float64)
        if probs.ndim != 2:
            raise InvariantViolation("prob_matrix must be 2-dimensional")
        n, m = probs.shape
        if len(set(ids)) != len(ids):
            raise InvariantViolation("ids must be unique")
        if not (len(ids) == n == len(labels)):
            raise InvariantViolation(
                f"|ids|={len(ids)}, rows of prob_matrix={n} and |noisy_labels|={len(labels)} must agree"
            )
        if len(classes) != m:
            raise InvariantViolation(f"{len(classes)} class names for {m} probability columns")
        LabelPartition.from_names(classes)
        if n and (np.any(~np.isfinite(probs)) or probs.min() < 0.0 or probs.max() > 1.0):
            raise InvariantViolation("prob_matrix entries must lie in [0, 1]")
        bad = np.flatnonzero(np.abs(probs.sum(axis=1) - 1.0) > ROW_SUM_TOL)
        if bad.size:
            raise InvariantViolation(
                f"prob_matrix row for id {ids[bad[0]]!r} sums to {probs[bad[0]].sum()!r}, not 1"
            )
        if n and (labels.min() < 0 or labels.max() >= m):
            raise InvariantViolation(f"noisy label index outside [0, {m})")
        truth = None
        if self.true_labels is not None:
            truth = np.array(self.true_labels, dtype=np.int64).reshape(-1)
            if len(truth) != n:
                raise InvariantViolation("true_labels must have one entry per id")
            if n and (truth.min() < -1 or truth.max() >= m):
                raise InvariantViolation(f"true label index outside [-1, {m})")
            truth = _frozen(truth)
        object.__setattr__(self, "time", int(self.time))
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "noisy_labels", _frozen(labels))
        object.__setattr__(self, "prob_matrix", _frozen(probs))
        object.__setattr__(self, "true_labels", truth)
        object.__setattr__(self, "_row", {d: k for k, d in enumerate(ids)})

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def m(self) -> int:
        return len(self.classes)

    @property
    def partition(self) -> LabelPartition:
        return LabelPartition.from_names(self.classes, self.time)

    def row_of(self, datapoint_id: str) -> int | None:
        return self._row.get(datapoint_id)

    def self_confidence(self) -> np.ndarray:
        """Predicted probability of each datapoint's own given label."""
        return self.prob_matrix[np.arange(self.n), self.noisy_labels]


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    counts: np.ndarray
    class_order: LabelPartition

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        m = len(self.class_order)
        if counts.shape != (m, m):
            raise ShapeMismatch(f"counts shape {counts.shape} does not match {m} classes")
        if counts.min() < 0:
            raise InvariantViolation("confusion counts must be non-negative")
        object.__setattr__(self, "counts", _frozen(counts))

    def __eq__(self, other):
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.class_order == other.class_order and np.array_equal(self.counts, other.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def tpr(self, label: int | str) -> float:
        """Per-class true positive rate (recall): correct / all actually of that class."""
        k = self.class_order.index_of(label)
        col = self.counts[:, k].sum()
        if col == 0:
            raise ZeroMarginal(f"no datapoints actually of class {self.class_order.names[k]!r}")
        return float(self.counts[k, k] / col)

    def fpr(self, label: int | str) -> float:
        """Per-class false positive rate: predicted as the class among those not of it."""
        k = self.class_order.index_of(label)
        negatives = self.total - self.counts[:, k].sum()
        if negatives == 0:
            raise ZeroMarginal(f"every datapoint is actually of class {self.class_order.names[k]!r}")
        return float((self.counts[k].sum() - self.counts[k, k]) / negatives)


def build_confusion(
    predicted: Sequence[int], actual: Sequence[int], partition: LabelPartition
) -> ConfusionMatrix:
    """Count predicted/actual label pairs into an m x m matrix."""
    predicted = np.asarray(predicted, dtype=np.int64).reshape(-1)
    actual = np.asarray(actual, dtype=np.int64).reshape(-1)
    if len(predicted) != len(actual):
        raise LengthMismatch(f"{len(predicted)} predicted labels vs {len(actual)} actual labels")
    if len(predicted) == 0:
        raise LengthMismatch("need at least one datapoint")
    m = len(partition)
    for arr in (predicted, actual):
        if arr.min() < 0 or arr.max() >= m:
            raise IndexOutOfRange(f"label index outside [0, {m})")
    counts = np.bincount(predicted * m + actual, minlength=m * m).reshape(m, m)
    return ConfusionMatrix(counts, partition)


def _check_nonempty(cm: ConfusionMatrix) -> int:
    total = cm.total
    if total == 0:
        raise EmptyMatrix("confusion matrix has no datapoints")
    return total


def accuracy(cm: ConfusionMatrix) -> float:
    """Fraction of datapoints on the diagonal."""
    total = _check_nonempty(cm)
    return float(np.trace(cm.counts) / total)


def error_rate(cm: ConfusionMatrix) -> float:
    """Fraction of datapoints off the diagonal."""
    total = _check_nonempty(cm)
    return float((total - np.trace(cm.counts)) / total)


def pair_error_rate(cm: ConfusionMatrix, wrong: int | str, correct: int | str) -> float:
    """Probability that a datapoint of true class ``correct`` carries label ``wrong``.

    Evaluates p(noisy=i | true=j) through Bayes' rule,
    p(true=j | noisy=i) p(noisy=i) / p(true=j), which collapses to
    counts[i, j] / column-j total.
    """
    i = cm.class_order.index_of(wrong)
    j = cm.class_order.index_of(correct)
    if i == j:
        raise SameLabel("wrong and correct labels must differ")
    col = int(cm.counts[:, j].sum())
    if col == 0:
        raise ZeroMarginal(f"no datapoints actually of class {cm.class_order.names[j]!r}")
    return float(cm.counts[i, j] / col)


def matrix_diff(later: ConfusionMatrix, earlier: ConfusionMatrix) -> np.ndarray:
    """Elementwise ``later - earlier``; entries may be negative."""
    if later.class_order.names != earlier.class_order.names or later.counts.shape != earlier.counts.shape:
        raise ShapeMismatch(
            f"cannot subtract matrices over {earlier.class_order.names} from {later.class_order.names}"
        )
    return later.counts - earlier.counts
