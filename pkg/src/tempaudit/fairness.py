"""Completeness, reliability and fairness predicates over a time frame, and
bias tagging of what an audit found.

Fairness here is a necessary condition only: a system is fair over a frame
only if its label set is complete and its accuracy is reliable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

from .core import LabelPartition, TimeFrame
from .errors import FrameMismatch, HypothesisUnmet, InvariantViolation, MissingTruth, OutOfRange
from .temporal import ChangeRate, LabelChange, SnapshotSeries, Truth, series_change_rate

# Bias vocabulary: data biases, then label biases. "historical" appears in both.
BIAS_TAXONOMY: dict[str, tuple[str, str]] = {
    "behavioral": ("data", "User behavior differs across contexts"),
    "exclusion": ("data", "Systematic exclusion of some data"),
    "historical": ("data+label", "Cultural prejudices included into systematic processes"),
    "time-interval": ("data", "Data collected over too limited a time range"),
    "label-quality": ("label", "Errors affecting the quality of labels"),
    "chronological": ("label", "Distortion from temporal changes in the world the data describe"),
    "misclassification": ("label", "Data points assigned to incorrect categories"),
}


@dataclass(frozen=True)
class LabelSetManifest:
    """Label partitions keyed by the timestamp from which each is valid."""

    partitions: Mapping[int, LabelPartition]

    def __post_init__(self):
        parts = {int(t): p for t, p in sorted(self.partitions.items())}
        if not parts:
            raise InvariantViolation("a manifest needs at least one partition")
        object.__setattr__(self, "partitions", parts)

    @classmethod
    def from_names(cls, mapping: Mapping[int, Sequence[str]]) -> "LabelSetManifest":
        return cls({int(t): LabelPartition.from_names(list(v), int(t)) for t, v in mapping.items()})

    def validate_against(self, frame: TimeFrame):
        stray = [t for t in self.partitions if t not in frame.timestamps]
        if stray:
            raise FrameMismatch(f"manifest timestamps {stray} are not in the time frame {list(frame)}")

    def in_force(self, time: int) -> LabelPartition:
        """Partition with the latest timestamp not after ``time``."""
        best = None
        for t, p in self.partitions.items():
            if t <= time:
                best = p
        if best is None:
            raise FrameMismatch(f"no label partition in force at t={time}")
        return best


@dataclass(frozen=True)
class AuditConfig:
    pi: float
    frame: TimeFrame
    epsilon_direction: Literal["shrink", "grow"] = "shrink"

    def __post_init__(self):
        if not 0.0 < self.pi <= 1.0:
            raise OutOfRange(f"safety threshold pi={self.pi!r} must lie in (0, 1]")
        if self.epsilon_direction not in ("shrink", "grow"):
            raise InvariantViolation(f"unknown epsilon direction {self.epsilon_direction!r}")


@dataclass(frozen=True)
class Uncovered:
    id: str
    time: int
    label: str


@dataclass(frozen=True)
class CompletenessResult:
    complete: bool
    frame: TimeFrame
    uncovered: tuple[Uncovered, ...] = ()
    # Covered only through the union of endpoint partitions, not by the partition in force.
    covered_by_union_only: tuple[Uncovered, ...] = ()
    intermediate_only_labels: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReliabilityResult:
    reliable: bool
    epsilon: ChangeRate
    pi: float
    frame: TimeFrame


@dataclass(frozen=True)
class BiasTag:
    kind: str
    family: str
    evidence: tuple[str, ...] = ()


@dataclass(frozen=True)
class AuditVerdict:
    complete: bool
    uncovered: tuple[Uncovered, ...]
    reliable: bool
    epsilon: float
    fair: bool
    bias_tags: tuple[BiasTag, ...] = field(default=())

    def __post_init__(self):
        if self.fair and not (self.complete and self.reliable):
            raise InvariantViolation("a verdict cannot be fair without completeness and reliability")


@dataclass(frozen=True)
class TheoremResult:
    holds: bool
    slack: float


def check_completeness(
    manifest: LabelSetManifest, series: SnapshotSeries, truth: Truth
) -> CompletenessResult:
    """Every datapoint, at every time it is present, needs a correct label in
    the union of the first and last partitions of the frame."""
    frame = series.frame
    manifest.validate_against(frame)
    first, last = manifest.in_force(frame.first), manifest.in_force(frame.last)
    union = set(first.names) | set(last.names)
    uncovered, union_only = [], []
    for s in series:
        if s.time not in truth:
            raise MissingTruth(f"no truth annotations at t={s.time}")
        at_t = truth[s.time]
        in_force = set(manifest.in_force(s.time).names)
        for d in s.ids:
            if d not in at_t:
                raise MissingTruth(f"no truth annotation for id {d!r} at t={s.time}")
            label = at_t[d]
            if label not in union:
                uncovered.append(Uncovered(d, s.time, label))
            elif label not in in_force:
                union_only.append(Uncovered(d, s.time, label))
    intermediate = sorted(
        {n for p in manifest.partitions.values() for n in p.names} - union
    )
    return CompletenessResult(
        not uncovered, frame, tuple(uncovered), tuple(union_only), tuple(intermediate)
    )


def is_reliable(epsilon: float, pi: float) -> bool:
    return epsilon < pi


def check_reliability(
    series: SnapshotSeries, truth: Truth, cfg: AuditConfig, reference: int | str | None = None
) -> ReliabilityResult:
    """Reliable iff the endpoint change rate stays strictly below ``cfg.pi``."""
    if series.frame != cfg.frame:
        raise FrameMismatch("series and config cover different time frames")
    eps = series_change_rate(series, truth, reference)
    return ReliabilityResult(is_reliable(eps.epsilon, cfg.pi), eps, cfg.pi, series.frame)


def check_fairness(
    completeness: CompletenessResult,
    reliability: ReliabilityResult,
    bias_tags: Sequence[BiasTag] = (),
) -> AuditVerdict:
    if completeness.frame != reliability.frame:
        raise FrameMismatch("completeness and reliability were computed over different frames")
    return AuditVerdict(
        complete=completeness.complete,
        uncovered=completeness.uncovered,
        reliable=reliability.reliable,
        epsilon=reliability.epsilon.epsilon,
        fair=completeness.complete and reliability.reliable,
        bias_tags=tuple(bias_tags),
    )


def _eps(value: ChangeRate | float) -> float:
    return value.epsilon if isinstance(value, ChangeRate) else float(value)


def theorem1_check(complete_at_t: bool, eps: ChangeRate | float, pi: float) -> TheoremResult:
    """Given a label set complete at t, classification stays fair at t' > t
    exactly when the change rate is below ``pi``."""
    if not complete_at_t:
        raise HypothesisUnmet("label set must be complete at t")
    e = _eps(eps)
    return TheoremResult(is_reliable(e, pi), pi - e)


def theorem2_check(eps: ChangeRate | float, eps_prime: float, pi: float) -> TheoremResult:
    """A system fair at t with change rate ``eps`` stays fair after a label-set
    change costing ``eps_prime`` unless ``eps + eps_prime > pi``.

    The boundary ``eps + eps_prime == pi`` counts as remaining fair with zero slack.
    """
    e = _eps(eps)
    if not is_reliable(e, pi):
        raise HypothesisUnmet(f"need eps < pi for a fair base case, got eps={e!r}, pi={pi!r}")
    if eps_prime < 0:
        raise OutOfRange("eps_prime must be non-negative")
    spent = e + eps_prime
    return TheoremResult(not spent > pi, pi - spent)


def _tag(kind: str, evidence) -> BiasTag:
    return BiasTag(kind, BIAS_TAXONOMY[kind][0], tuple(evidence))


def tag_biases(
    completeness: CompletenessResult, label_changes: Sequence[LabelChange] = ()
) -> list[BiasTag]:
    """Map audit findings onto bias types.

    An incomplete label set points to label-quality, exclusion and
    time-interval bias; datapoints changing class over time point to
    chronological bias; either one also yields misclassification bias.
    """
    tags = []
    incomplete = [f"{u.id}@t{u.time}: needs {u.label!r}" for u in completeness.uncovered]
    changing = [
        f"{c.id}: {c.from_label!r}@t{c.from_time} -> {c.to_label!r}@t{c.to_time}"
        for c in label_changes
    ]
    if incomplete:
        tags += [_tag(k, incomplete) for k in ("label-quality", "exclusion", "time-interval")]
    if changing:
        tags.append(_tag("chronological", changing))
    if incomplete or changing:
        tags.append(_tag("misclassification", incomplete + changing))
    return sorted(tags, key=lambda t: t.kind)
