"""Command-line entry point.

Exit codes: 0 fair (audit) or success, 1 audit failed, 2 input error.
Set ``TEMPAUDIT_LOG`` to a logging level name (e.g. ``INFO``) for verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import cl, io
from .audit import render_text, run_audit
from .driftgen import generate
from .errors import AuditError
from .fairness import AuditConfig

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("tempaudit")


def _emit(text: str, output: str | None):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def cmd_clean(args) -> int:
    s = io.read_snapshot(args.snapshot, time=args.time)
    cj = cl.confident_joint(s, cl.compute_thresholds(s))
    issues = cl.find_label_issues(cj, s)
    rows = [
        {
            "id": i.id,
            "given": s.classes[i.given],
            "suggested": s.classes[i.suggested],
            "self_confidence": i.self_confidence,
        }
        for i in issues
    ]
    if args.format == "structured":
        text = io.dump_json({"time": s.time, "n": s.n, "unassigned": cj.n_unassigned, "label_issues": rows})
    else:
        lines = ["id,given,suggested,self_confidence"]
        lines += [f"{r['id']},{r['given']},{r['suggested']},{r['self_confidence']!r}" for r in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    log.info("%d label issues among %d datapoints", len(rows), s.n)
    return EXIT_OK


def cmd_audit(args) -> int:
    series = io.read_series(args.series_dir)
    manifest = io.read_manifest(args.manifest)
    truth = io.read_annotations(args.annotations)
    cfg = AuditConfig(pi=args.pi, frame=series.frame, epsilon_direction=args.direction)
    report = run_audit(series, manifest, truth, cfg, reference=args.reference_label)
    _emit(report.to_json() if args.format == "structured" else render_text(report), args.output)
    return EXIT_OK if report.fair else EXIT_FAILED


def cmd_simulate(args) -> int:
    cfg = io.read_config(args.config)
    if args.seed is not None:
        cfg = type(cfg).from_dict({**cfg.to_dict(), "seed": args.seed})
    io.write_generated(generate(cfg), args.output_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempaudit",
        description="Label error detection and temporal fairness audits for timestamped datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="list likely label errors in one snapshot file")
    p.add_argument("snapshot")
    p.add_argument("output", nargs="?", default="-", help="output path (default: stdout)")
    p.add_argument("--time", type=int, default=None, help="time index if not in the file name")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("audit", help="audit a snapshot series for completeness, reliability and fairness")
    p.add_argument("series_dir")
    p.add_argument("manifest")
    p.add_argument("annotations")
    p.add_argument("--pi", type=float, required=True, help="safety threshold in (0, 1]")
    p.add_argument("--direction", choices=("shrink", "grow"), default="shrink")
    p.add_argument("--reference-label", default=None,
                   help="compute change rates from this class's accuracy instead of overall accuracy")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("simulate", help="generate a synthetic drifting series")
    p.add_argument("config")
    p.add_argument("output_dir")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("TEMPAUDIT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AuditError, OSError) as exc:
        print(f"tempaudit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
