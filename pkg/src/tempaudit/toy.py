"""A ten-datapoint, two-snapshot binary example with known confusion matrices.

At ``t=0`` noisy labels against truth give ``[[4, 2], [1, 3]]``; at ``t=1``
they give ``[[2, 3], [3, 2]]`` (rows predicted, columns actual, class order
male, female). Predicted probabilities put 0.9 on the true class.
"""

from __future__ import annotations

import numpy as np

from .core import Snapshot
from .fairness import LabelSetManifest
from .temporal import SnapshotSeries

CLASSES = ("male", "female")
IDS = tuple(f"d{k}" for k in range(10))
TRUTH = ("male",) * 5 + ("female",) * 5
NOISY = {
    0: ("male", "male", "male", "male", "female", "male", "male", "female", "female", "female"),
    1: ("male", "male", "female", "female", "female", "male", "male", "male", "female", "female"),
}


def toy_series(confidence: float = 0.9):
    """Return ``(series, truth, manifest)`` for the two-snapshot example."""
    idx = {c: k for k, c in enumerate(CLASSES)}
    true_idx = np.array([idx[c] for c in TRUTH])
    probs = np.full((len(IDS), 2), 1.0 - confidence)
    probs[np.arange(len(IDS)), true_idx] = confidence
    snaps = [
        Snapshot(t, IDS, [idx[c] for c in NOISY[t]], probs, CLASSES, true_labels=true_idx)
        for t in sorted(NOISY)
    ]
    truth = {t: dict(zip(IDS, TRUTH)) for t in NOISY}
    manifest = LabelSetManifest.from_names({0: list(CLASSES)})
    return SnapshotSeries.from_snapshots(snaps), truth, manifest
