"""Confident-learning label error detection and temporal fairness audits."""

from .cl import (
    ConfidentJoint,
    JointEstimate,
    LabelIssue,
    Thresholds,
    compute_thresholds,
    confident_joint,
    estimate_joint,
    find_label_issues,
)
from .core import (
    ClassLabel,
    ConfusionMatrix,
    LabelPartition,
    Snapshot,
    TimeFrame,
    accuracy,
    build_confusion,
    error_rate,
    matrix_diff,
    pair_error_rate,
)
from .driftgen import PRESETS, DriftConfig, generate
from .fairness import (
    AuditConfig,
    AuditVerdict,
    LabelSetManifest,
    check_completeness,
    check_fairness,
    check_reliability,
    tag_biases,
    theorem1_check,
    theorem2_check,
)
from .temporal import (
    ChangeRate,
    SnapshotSeries,
    change_rate,
    series_change_rate,
    temporal_confident_joint_fixed,
    temporal_confident_joint_pair,
    temporal_error_probability,
)

__version__ = "0.1.0"
