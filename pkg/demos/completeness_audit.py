"""A label set that cannot describe everyone is unfair regardless of accuracy.

One person in the ten-person example is annotated "nonbinary", a label the
system never offered. The audit reports them as uncovered and tags the biases
this implies; offering the label at either end of the time frame repairs it.
"""

from tempaudit.audit import run_audit
from tempaudit.fairness import AuditConfig, LabelSetManifest
from tempaudit.toy import toy_series

series, truth, _ = toy_series()
truth = {t: {**labels, "d9": "nonbinary"} for t, labels in truth.items()}
cfg = AuditConfig(0.5, series.frame)

manifests = {
    "binary only": {0: ["male", "female"]},
    "nonbinary from the start": {0: ["male", "female", "nonbinary"]},
    "nonbinary added later": {0: ["male", "female"], 1: ["male", "female", "nonbinary"]},
}
for title, names in manifests.items():
    report = run_audit(series, LabelSetManifest.from_names(names), truth, cfg, reference="male")
    print(f"{title}: complete={report.completeness['complete']}, fair={report.verdict['fair']}")
    for u in report.completeness["uncovered"]:
        print(f"  uncovered: {u['id']} at t={u['time']} needs {u['label']!r}")
    for tag in report.bias_tags:
        print(f"  bias: {tag['kind']} ({tag['family']})")
