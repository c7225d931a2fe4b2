"""Command-line front end for run directories.

Subcommands mirror the workflow: init a run from a config, advance the
automated stages, inspect sensitivity/risk artifacts, work the review queue,
emit reports, export geometry, or serve everything over HTTP.

Exit codes: 0 success, 2 configuration or usage error, 3 exhausted set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import ConfigError, ModelError, ParseError, StateError
from .geometry import export_coordinates, export_obj, generate_airfoil
from .pipeline import Run, RunConfig, plan_steps
from .pipeline.runner import TERMINAL_STATUSES
from .risk import risk_report_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EXHAUSTED = 3

EXHAUSTED_STATUSES = ("empty", "risk-exhausted", "exhausted")


def _load_config(path) -> RunConfig:
    if path is None:
        return RunConfig()
    return RunConfig.load(path)


def _open_run(args) -> Run:
    if args.run_dir is None:
        raise ConfigError("--run-dir is required")
    return Run(args.run_dir)


def _echo_summary(summary: dict):
    extra = {k: v for k, v in summary.items() if k not in ("stage", "kind", "out", "status")}
    parts = [f"stage {summary['stage']} ({summary['kind']}): {summary['out']} candidates"]
    for k, v in sorted(extra.items()):
        parts.append(f"{k}={v}")
    print("; ".join(parts))


def cmd_init(args) -> int:
    config = _load_config(args.config)
    if args.run_dir is None:
        raise ConfigError("--run-dir is required")
    run = Run.create(args.run_dir, config)
    print(f"initialized run at {run.dir} (seed {config.seed}, n_initial {config.n_initial})")
    return EXIT_OK


def cmd_advance(args) -> int:
    run = _open_run(args)
    steps = max(1, args.until - run.last_stage()) if args.until else 1
    for _ in range(steps):
        summary = run.advance()
        _echo_summary(summary)
        if run.status() in EXHAUSTED_STATUSES:
            print(f"run halted: {run.status()}")
            return EXIT_EXHAUSTED
        if args.until and run.last_stage() >= args.until:
            break
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    run = _open_run(args)
    if run.last_stage() == 2:
        run.advance()
    report = run.sensitivity_report()
    if report is None:
        raise ConfigError("no sensitivity report yet; advance the run to stage 3 first")
    print(report.to_markdown(), end="")
    return EXIT_OK


def cmd_refine(args) -> int:
    run = _open_run(args)
    report = run.sensitivity_report()
    if report is None:
        raise ConfigError("refinement needs the stage-3 sensitivity report")
    steps = plan_steps(run.config.space, report, run.config.refine)
    print("planned steps:")
    for name, step in steps.items():
        print(f"  {name}: {step:+.6f}")
    nxt = 2 if run.last_stage() == 0 else run.last_stage() + 1
    if nxt not in (4, 5):
        raise ConfigError(f"next stage is {nxt}; refine applies at stages 4 and 5")
    summary = run.advance()
    _echo_summary(summary)
    if run.status() in EXHAUSTED_STATUSES:
        print(f"run halted: {run.status()}")
        return EXIT_EXHAUSTED
    return EXIT_OK


def cmd_risk(args) -> int:
    run = _open_run(args)
    for stage in reversed(run.stage_indices()):
        dset = run.read_set(stage)
        if any("risk" in c.evaluations for c in dset.members):
            csv_text = risk_report_csv(dset)
            if args.out:
                Path(args.out).write_text(csv_text)
                print(f"wrote {args.out}")
            else:
                print(csv_text, end="")
            return EXIT_OK
    raise ConfigError("no risk-annotated stage yet; advance the run to stage 4 first")


def _parse_directive(text: str) -> dict:
    # PARAM:direction[:magnitude], e.g. CST_L3:increase:0.1 or CST1:+
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ConfigError(f"directive {text!r} is not PARAM:DIRECTION[:MAGNITUDE]")
    directive = {"param": parts[0], "direction": parts[1], "magnitude": None}
    if len(parts) == 3:
        directive["magnitude"] = float(parts[2])
    return directive


def cmd_review(args) -> int:
    run = _open_run(args)
    if args.candidate:
        if not args.verdict:
            raise ConfigError("--verdict is required with --candidate")
        decision = {
            "candidate_id": args.candidate,
            "verdict": args.verdict,
            "note": args.note or "",
            "directives": [_parse_directive(d) for d in args.directive or []],
        }
        recorded = run.decide(decision, actor=args.actor)
        print(f"recorded {recorded['verdict']} for {recorded['candidate_id']}")
        return EXIT_OK
    if args.iterate or args.converge:
        result = run.iterate(converge=args.converge, actor=args.actor or "human")
        print(json.dumps(result, sort_keys=True))
        if run.status() in EXHAUSTED_STATUSES:
            return EXIT_EXHAUSTED
        return EXIT_OK
    if run.last_stage() < 6:
        raise ConfigError("review queue opens at stage 6; advance the run first")
    queue = run.read_set(run.last_stage())
    print(f"review queue (stage {run.last_stage()}, {len(queue)} candidates):")
    for c in queue.members:
        assessment = c.evaluations.get("assessment", "")
        print(f"  {c.id} [{c.status}] {assessment}")
    return EXIT_OK


def cmd_report(args) -> int:
    run = _open_run(args)
    run.write_report()
    print((run.dir / "report.md").read_text(), end="")
    return EXIT_OK


def cmd_export(args) -> int:
    run = _open_run(args)
    _, candidate = run.candidate(args.candidate)
    geom = generate_airfoil(candidate.cst, n_points=args.points)
    if args.format == "obj":
        text = export_obj(geom, name=candidate.id)
    else:
        text = export_coordinates(geom, name=candidate.id)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    run_dir = Path(args.run_dir) if args.run_dir else Path.cwd()
    store_root = run_dir.parent if (run_dir / "config.json").exists() else run_dir
    app = create_app(store_root)
    port = args.port or int(os.environ.get("SETFOIL_PORT", "8341"))
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setfoil", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="run configuration JSON file")
        p.add_argument("--run-dir", default=None, help="run directory")
        p.set_defaults(fn=fn)
        return p

    add("init", cmd_init, "create a run directory from a config")

    p = add("advance", cmd_advance, "run the next automated stage")
    p.add_argument("--until", type=int, default=None, help="advance until this stage")

    add("sensitivity", cmd_sensitivity, "print the sensitivity report (computing it if due)")

    add("refine", cmd_refine, "show the refinement plan and run the next refine stage")

    p = add("risk", cmd_risk, "print the latest risk-filter report as CSV")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")

    p = add("review", cmd_review, "list the review queue or record a verdict")
    p.add_argument("--candidate", default=None, help="candidate id to decide on")
    p.add_argument("--verdict", choices=["valid", "invalid"], default=None)
    p.add_argument("--note", default=None)
    p.add_argument(
        "--directive",
        action="append",
        default=None,
        metavar="PARAM:DIRECTION[:MAGNITUDE]",
        help="refinement directive, repeatable",
    )
    p.add_argument("--actor", default=None)
    p.add_argument("--iterate", action="store_true", help="apply pending decisions")
    p.add_argument("--converge", action="store_true", help="finish the run")

    add("report", cmd_report, "write and print the run report")

    p = add("export", cmd_export, "export candidate geometry")
    p.add_argument("--candidate", required=True)
    p.add_argument("--format", choices=["dat", "obj"], default="dat")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", default=None)

    p = add("serve", cmd_serve, "serve the HTTP API for a run store")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ParseError, ModelError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (StateError, KeyError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as err:  # pragma: no cover - unexpected
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
