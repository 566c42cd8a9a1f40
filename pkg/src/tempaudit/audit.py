"""End-to-end audit of a snapshot series and the report it produces.

Every number in an :class:`AuditReport` comes straight from a library call;
this module only gathers and arranges them.
"""

from __future__ import annotations

import itertools
import json
import logging
import warnings
from dataclasses import asdict, dataclass, field, fields

from . import cl
from .core import Snapshot, accuracy, error_rate
from .errors import DegenerateJoint, DegenerateRowWarning, ZeroMarginal
from .fairness import (
    AuditConfig,
    LabelSetManifest,
    check_completeness,
    check_fairness,
    check_reliability,
    tag_biases,
    theorem1_check,
)
from .temporal import (
    MULTIPLICATIVE_READING_NOTE,
    SnapshotSeries,
    Truth,
    confident_label_changes,
    pairwise_change_rate,
    snapshot_confusion,
    temporal_error_probability,
    temporal_joint_matrix,
)

log = logging.getLogger(__name__)


def _floats(a) -> list:
    return [[float(x) for x in row] for row in a]


def _ints(a) -> list:
    return [[int(x) for x in row] for row in a]


def _nan_to_none(x):
    x = float(x)
    return None if x != x else x


def summarize_snapshot(s: Snapshot) -> tuple[dict, list[str]]:
    """Confident-learning summary of one snapshot, plus any warnings raised."""
    warn = []
    th = cl.compute_thresholds(s)
    cj = cl.confident_joint(s, th)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateRowWarning)
        try:
            q = _floats(cl.estimate_joint(cj, s).q)
        except DegenerateJoint as exc:
            q = None
            warn.append(f"DegenerateJoint: {exc}")
    warn += [f"DegenerateRow: {w.message}" for w in caught if issubclass(w.category, DegenerateRowWarning)]
    issues = cl.find_label_issues(cj, s)
    summary = {
        "time": s.time,
        "n": s.n,
        "thresholds": [_nan_to_none(t) for t in th.t],
        "support": [int(x) for x in th.support],
        "confident_joint": _ints(cj.counts),
        "unassigned": cj.n_unassigned,
        "joint_estimate": q,
        "label_issues": [
            {
                "id": i.id,
                "given": s.classes[i.given],
                "suggested": s.classes[i.suggested],
                "self_confidence": i.self_confidence,
            }
            for i in issues
        ],
    }
    return summary, warn


@dataclass
class AuditReport:
    config: dict
    classes: list
    snapshots: list
    confusion: list
    epsilon_series: list
    epsilon: dict
    completeness: dict
    verdict: dict
    bias_tags: list
    temporal_joint: list
    label_changes: list
    error_probabilities: list
    theorem_checks: dict
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AuditReport":
        return cls(**{f.name: d[f.name] for f in fields(cls)})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AuditReport":
        return cls.from_dict(json.loads(text))

    @property
    def fair(self) -> bool:
        return bool(self.verdict["fair"])


def run_audit(
    series: SnapshotSeries,
    manifest: LabelSetManifest,
    truth: Truth,
    cfg: AuditConfig,
    reference: int | str | None = None,
) -> AuditReport:
    """Run confident learning on every snapshot and the completeness,
    reliability and fairness checks over the whole frame."""
    warn = []
    summaries = []
    for s in series:
        summary, w = summarize_snapshot(s)
        summaries.append(summary)
        warn += w
        log.info("t=%s: %d label issues", s.time, len(summary["label_issues"]))

    confusion = []
    cms = []
    for s in series:
        cm, outside = snapshot_confusion(s, truth)
        cms.append(cm)
        if outside:
            warn.append(f"t={s.time}: {outside} datapoints have a correct label outside {list(s.classes)}")
        confusion.append({
            "time": s.time,
            "counts": _ints(cm.counts),
            "excluded_outside_classes": outside,
            "accuracy": accuracy(cm),
            "error_rate": error_rate(cm),
        })

    steps = [
        pairwise_change_rate(a, b, reference, s.time, t.time)
        for a, b, s, t in zip(cms, cms[1:], series.snapshots, series.snapshots[1:])
    ]

    completeness = check_completeness(manifest, series, truth)
    reliability = check_reliability(series, truth, cfg, reference)
    changes = confident_label_changes(series)
    tags = tag_biases(completeness, changes)
    verdict = check_fairness(completeness, reliability, tags)

    names = series.classes
    probs = []
    for (a, b), step in zip(zip(cms, cms[1:]), steps):
        for i, j in itertools.permutations(range(len(names)), 2):
            try:
                p = temporal_error_probability(b, a, step, i, j, cfg.epsilon_direction)
            except ZeroMarginal as exc:
                warn.append(f"t={step.from_time}->{step.to_time} {names[i]}|{names[j]}: {exc}")
                continue
            if p.clamped:
                warn.append(
                    f"t={step.from_time}->{step.to_time} {names[i]}|{names[j]}: "
                    f"probability {p.raw!r} clamped to 1"
                )
            probs.append({
                "from_time": step.from_time,
                "to_time": step.to_time,
                "wrong": names[i],
                "correct": names[j],
                "epsilon": step.epsilon,
                "direction": p.direction,
                "value": p.value,
                "raw": p.raw,
                "clamped": p.clamped,
            })
    if probs:
        warn.append(MULTIPLICATIVE_READING_NOTE)

    theorem = {}
    if completeness.complete:
        t1 = theorem1_check(True, reliability.epsilon, cfg.pi)
        theorem["theorem1"] = {
            "fair": t1.holds,
            "slack": t1.slack,
            "consistent_with_verdict": t1.holds == verdict.fair,
        }

    eps = reliability.epsilon
    return AuditReport(
        config={
            "pi": cfg.pi,
            "direction": cfg.epsilon_direction,
            "frame": list(cfg.frame),
            "reference": None if reference is None else str(reference),
        },
        classes=list(names),
        snapshots=summaries,
        confusion=confusion,
        epsilon_series=[asdict(c) for c in steps],
        epsilon=asdict(eps),
        completeness={
            "complete": completeness.complete,
            "uncovered": [asdict(u) for u in completeness.uncovered],
            "covered_by_union_only": [asdict(u) for u in completeness.covered_by_union_only],
            "intermediate_only_labels": list(completeness.intermediate_only_labels),
        },
        verdict={
            "complete": verdict.complete,
            "reliable": verdict.reliable,
            "fair": verdict.fair,
            "epsilon": verdict.epsilon,
            "pi": cfg.pi,
        },
        bias_tags=[
            {"kind": t.kind, "family": t.family, "evidence": list(t.evidence)} for t in tags
        ],
        temporal_joint=_ints(temporal_joint_matrix(series)),
        label_changes=[asdict(c) for c in changes],
        error_probabilities=probs,
        theorem_checks=theorem,
        warnings=warn,
    )


def render_text(report: AuditReport) -> str:
    """Human-readable rendering of an audit report."""
    out = []
    v = report.verdict
    out.append(f"classes: {', '.join(report.classes)}")
    out.append(f"frame: {report.config['frame']}  pi={report.config['pi']!r}  "
               f"direction={report.config['direction']}")
    for s, c in zip(report.snapshots, report.confusion):
        out.append(
            f"t={s['time']}: n={s['n']} issues={len(s['label_issues'])} unassigned={s['unassigned']} "
            f"accuracy={c['accuracy']!r} error_rate={c['error_rate']!r}"
        )
    for e in report.epsilon_series:
        out.append(f"eps t={e['from_time']}->{e['to_time']} ({e['basis']}): {e['epsilon']!r}")
    out.append(f"eps over frame ({report.epsilon['basis']}): {report.epsilon['epsilon']!r}")
    for p in report.error_probabilities:
        flag = " (clamped)" if p["clamped"] else ""
        out.append(
            f"p[{p['wrong']} at t={p['to_time']} | {p['correct']} at t={p['from_time']}] "
            f"= {p['value']!r}{flag}"
        )
    comp = report.completeness
    out.append(f"complete: {comp['complete']}")
    for u in comp["uncovered"]:
        out.append(f"  uncovered: {u['id']} at t={u['time']} needs {u['label']!r}")
    out.append(f"reliable: {v['reliable']}")
    out.append(f"fair: {v['fair']}")
    for t in report.bias_tags:
        out.append(f"bias: {t['kind']} ({t['family']}), {len(t['evidence'])} findings")
    for w in report.warnings:
        out.append(f"warning: {w}")
    return "\n".join(out) + "\n"
