"""Two synthetic populations audited with the same safety threshold.

"midwest-1950" has a static world: labels given once stay correct apart from
the initial noise. In "berlin-1990" the truth keeps drifting and a third
gender label appears part way through, so labels assigned at the start go
stale.
"""

from tempaudit.audit import render_text, run_audit
from tempaudit.driftgen import PRESETS, generate
from tempaudit.fairness import AuditConfig

for name, cfg in PRESETS.items():
    data = generate(cfg)
    report = run_audit(data.series, data.manifest, data.truth, AuditConfig(0.1, data.series.frame))
    print(f"=== {name} ===")
    print(render_text(report))
    print()
