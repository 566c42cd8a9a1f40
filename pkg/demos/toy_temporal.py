"""Ten people, two moments in time, one binary gender classifier.

Between the two snapshots the given labels disagree with the truth more
often. We measure how much accuracy moved, what that does to the chance of
confusing one class for another, and whether the change stays under a safety
threshold.
"""

from tempaudit.core import accuracy, error_rate, matrix_diff, pair_error_rate
from tempaudit.fairness import AuditConfig, check_completeness, check_fairness, check_reliability
from tempaudit.temporal import series_change_rate, snapshot_confusion, temporal_error_probability
from tempaudit.toy import toy_series

series, truth, manifest = toy_series()
early, _ = snapshot_confusion(series.snapshots[0], truth)
late, _ = snapshot_confusion(series.snapshots[1], truth)

for name, cm in (("early", early), ("late", late)):
    print(f"{name}: counts {cm.counts.tolist()}, accuracy {accuracy(cm):.1f}, "
          f"error rate {error_rate(cm):.1f}, P(female | male) {pair_error_rate(cm, 'female', 'male'):.1f}")
print("late - early:", matrix_diff(late, early).tolist())

overall = series_change_rate(series, truth)
male = series_change_rate(series, truth, reference="male")
print(f"change rate on overall accuracy: {overall.epsilon:.2f}")
print(f"change rate on the male class:   {male.epsilon:.2f}")

p = temporal_error_probability(late, early, male, "female", "male")
print(f"probability of calling a man female, discounted by the change: {p.value:.3f}")

comp = check_completeness(manifest, series, truth)
for pi in (0.5, 0.3):
    rel = check_reliability(series, truth, AuditConfig(pi, series.frame), reference="male")
    verdict = check_fairness(comp, rel)
    print(f"pi={pi}: complete={verdict.complete}, reliable={verdict.reliable}, fair={verdict.fair}")
