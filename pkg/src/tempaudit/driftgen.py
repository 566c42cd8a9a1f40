"""Synthetic timestamped datasets with controlled label drift and label noise.

The latent true label of each datapoint drifts over time: at every step it
flips with probability ``drift_rate`` to a class chosen uniformly among the
others. Given labels are assigned once, at the first timestamp, by corrupting
the true label at ``noise_rate`` (class-conditional, uniform over the other
classes), and then kept. Drift therefore makes given labels go stale.

Predicted probabilities follow the current true label:
``sharpness * onehot(y) + (1 - sharpness) / m``.

If ``new_label_time`` is set, a label outside the classifier's classes
(``new_label_name``) becomes a possible drift target from that time on.
Datapoints holding it get a uniform probability row. The manifest announces
the label at that time unless ``announce_new_label`` is off.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .core import Snapshot
from .errors import InvalidConfig
from .fairness import LabelSetManifest
from .temporal import SnapshotSeries


@dataclass(frozen=True)
class DriftConfig:
    n_datapoints: int = 200
    n_classes: int = 2
    timestamps: int = 5
    drift_rate: float = 0.0
    noise_rate: float = 0.0
    sharpness: float = 1.0
    new_label_time: int | None = None
    seed: int = 0
    class_names: tuple[str, ...] | None = None
    new_label_name: str = "new_label"
    announce_new_label: bool = True

    def __post_init__(self):
        if self.class_names is not None:
            object.__setattr__(self, "class_names", tuple(self.class_names))
        self.validate()

    def validate(self):
        if self.timestamps < 2:
            raise InvalidConfig(f"need at least 2 timestamps, got {self.timestamps}")
        if self.n_datapoints < 1:
            raise InvalidConfig("need at least one datapoint")
        if self.n_classes < 2:
            raise InvalidConfig("need at least 2 classes")
        for name in ("drift_rate", "noise_rate", "sharpness"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidConfig(f"{name}={v!r} must lie in [0, 1]")
        if self.class_names is not None and len(self.class_names) != self.n_classes:
            raise InvalidConfig(f"{len(self.class_names)} class names for {self.n_classes} classes")
        if self.new_label_time is not None:
            if not 0 <= self.new_label_time < self.timestamps:
                raise InvalidConfig(f"new_label_time {self.new_label_time} outside [0, {self.timestamps})")
            if self.new_label_name in self.names:
                raise InvalidConfig(f"new label {self.new_label_name!r} clashes with a class name")

    @property
    def names(self) -> tuple[str, ...]:
        return self.class_names or tuple(f"class_{k}" for k in range(self.n_classes))

    @classmethod
    def from_dict(cls, d: dict) -> "DriftConfig":
        d = dict(d)
        base = {}
        if "preset" in d:
            name = d.pop("preset")
            if name not in PRESETS:
                raise InvalidConfig(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
            base = asdict(PRESETS[name])
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InvalidConfig(f"unknown config keys {sorted(unknown)}")
        base.update(d)
        try:
            return cls(**base)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["class_names"] is not None:
            d["class_names"] = list(d["class_names"])
        return d


PRESETS = {
    # Population whose label identities barely move over the frame.
    "midwest-1950": DriftConfig(
        n_datapoints=200, n_classes=2, timestamps=5, drift_rate=0.0, noise_rate=0.05,
        sharpness=0.9, class_names=("male", "female"), new_label_name="nonbinary",
    ),
    # Population with frequent label changes and a label introduced mid-frame.
    "berlin-1990": DriftConfig(
        n_datapoints=200, n_classes=2, timestamps=5, drift_rate=0.1, noise_rate=0.05,
        sharpness=0.9, class_names=("male", "female"), new_label_time=2,
        new_label_name="nonbinary",
    ),
}


@dataclass(frozen=True)
class GeneratedData:
    series: SnapshotSeries
    truth: dict[int, dict[str, str]]
    manifest: LabelSetManifest
    config: DriftConfig = field(repr=False)


def _other(rng, current: np.ndarray, k: int) -> np.ndarray:
    """Uniformly chosen label in [0, k) different from ``current``."""
    return (current + rng.integers(1, k, size=current.shape)) % k


def generate(cfg: DriftConfig) -> GeneratedData:
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    n, m = cfg.n_datapoints, cfg.n_classes
    names = cfg.names
    all_names = names + ((cfg.new_label_name,) if cfg.new_label_time is not None else ())
    width = len(str(n - 1))
    ids = tuple(f"d{k:0{width}d}" for k in range(n))

    y = rng.integers(0, m, size=n)
    noisy = np.where(rng.random(n) < cfg.noise_rate, _other(rng, y, m), y)
    snapshots, truth = [], {}
    for t in range(cfg.timestamps):
        if t > 0:
            k = m + 1 if cfg.new_label_time is not None and t >= cfg.new_label_time else m
            flips = rng.random(n) < cfg.drift_rate
            y = np.where(flips, _other(rng, y, k), y)
        outside = y >= m
        probs = np.full((n, m), (1.0 - cfg.sharpness) / m)
        probs[np.arange(n)[~outside], y[~outside]] += cfg.sharpness
        probs[outside] = 1.0 / m
        true_idx = np.where(outside, -1, y)
        snapshots.append(Snapshot(t, ids, noisy, probs, names, true_labels=true_idx))
        truth[t] = {d: all_names[int(k)] for d, k in zip(ids, y)}

    parts = {0: list(names)}
    if cfg.new_label_time is not None and cfg.announce_new_label:
        parts[cfg.new_label_time] = list(all_names)
    return GeneratedData(
        SnapshotSeries.from_snapshots(snapshots), truth, LabelSetManifest.from_names(parts), cfg
    )
