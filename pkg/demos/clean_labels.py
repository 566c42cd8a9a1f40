"""Find mislabeled points in a single snapshot with confident learning.

We generate 500 points over three classes, flip 15% of the given labels, and
let the per-class thresholds decide which labels to distrust.
"""

import numpy as np

from tempaudit import cl
from tempaudit.driftgen import DriftConfig, generate

data = generate(DriftConfig(n_datapoints=500, n_classes=3, timestamps=2, noise_rate=0.15,
                            sharpness=0.8, seed=0))
snap = data.series.snapshots[0]

th = cl.compute_thresholds(snap)
print("per-class thresholds:", np.round(th.t, 3))

cj = cl.confident_joint(snap, th)
print("confident joint (rows given, columns suggested):")
print(cj.counts)

est = cl.estimate_joint(cj, snap)
print("estimated joint of given and true labels:")
print(np.round(est.q, 3))

issues = cl.find_label_issues(cj, snap)
flipped = {d for d, y, t in zip(snap.ids, snap.noisy_labels, snap.true_labels) if y != t}
found = {i.id for i in issues}
print(f"{len(issues)} issues flagged, {len(flipped)} labels were actually flipped")
print(f"precision {len(found & flipped) / len(found):.3f}, recall {len(found & flipped) / len(flipped):.3f}")
print("least confident five:")
for issue in issues[:5]:
    print(f"  {issue.id}: given {snap.classes[issue.given]}, suggest {snap.classes[issue.suggested]}"
          f" (self-confidence {issue.self_confidence:.2f})")
