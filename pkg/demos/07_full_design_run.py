"""
A complete design run, start to converged
=========================================

The run directory is the single source of truth: config, per-stage candidate
snapshots, and an append-only event log.  Stages 2-6 run unattended (sample +
filter, sensitivity, refine + risk filter, refine + rank + pressure curves,
machine review); a human then records verdicts and directives, and each
iterate() spawns a refined generation.  At the end the whole history replays
from the log, byte for byte.
"""

import tempfile
from pathlib import Path

from setfoil import Run, RunConfig, replay

root = Path(tempfile.mkdtemp(prefix="setfoil_run_"))
cfg = RunConfig(seed=42, n_initial=256, stage2_top_k=40, stage3_base_n=64, stage5_top_k=8)
run = Run.create(root / "demo", cfg)
print(f"run directory: {run.dir}")

# -- automated stages ----------------------------------------------------------------
while run.last_stage() < 6:
    summary = run.advance()
    print(f"  stage {summary['stage']} ({summary['kind']}): {summary['out']} candidates")

# -- the review queue ------------------------------------------------------------------
queue = run.read_set(6)
print(f"\nreview queue ({len(queue)} candidates):")
for c in queue.members[:3]:
    print(f"  {c.id} [{c.status}]")
    print(f"    {c.evaluations['assessment']}")

# Record verdicts: keep the best one with a steering directive, reject the rest.
ids = queue.ids()
run.decide(
    {
        "candidate_id": ids[0],
        "verdict": "valid",
        "note": "good tail margin; trade a little camber aft",
        "directives": [{"param": "CST_L4", "direction": "decrease", "magnitude": 0.08}],
    },
    actor="demo-reviewer",
)
for cid in ids[1:]:
    run.decide({"candidate_id": cid, "verdict": "invalid"}, actor="demo-reviewer")

result = run.iterate()
print(f"\niterate -> stage {result['stage']}: valid {result['valid']} invalid {result['invalid']}")

done = run.iterate(converge=True)
print(f"converged with final picks {done['valid']}")

# -- report and replay -----------------------------------------------------------------
report_md = (run.dir / "report.md").read_text()
print("\nreport head:")
print("\n".join(report_md.splitlines()[:8]))

rebuilt = replay(run.dir, root / "rebuilt")
same = all(
    (run.dir / f"stages/stage_{k}.json").read_bytes()
    == (rebuilt.dir / f"stages/stage_{k}.json").read_bytes()
    for k in run.stage_indices()
)
print(f"\nreplayed into {rebuilt.dir}: stage files byte-identical = {same}")
print("event log:", sum(1 for _ in (run.dir / "decisions.jsonl").open()), "events")
