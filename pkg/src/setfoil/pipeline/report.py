"""Run summary artifacts: machine-readable JSON and human-readable Markdown.

Reports are pure functions of persisted run state, so regenerating one is
always byte-identical for the same run directory.
"""

from __future__ import annotations

from ..score import BENCHMARK, utility_combined

SURVIVOR_COLUMNS = ("id", "parent", "cd", "cl", "cm", "u_comb", "tail_mean", "rating", "status")


def _stage_kind(dset) -> str:
    return dset.provenance.get("kind", "unknown")


def _surviving(dset) -> int:
    """Members still in play at this stage (review stages count valid only)."""
    if any(c.status in ("valid", "invalid") for c in dset.members):
        return sum(1 for c in dset.members if c.status == "valid")
    return sum(1 for c in dset.members if c.status != "filtered")


def _candidate_row(c) -> dict:
    coeffs = c.evaluations.get("coefficients", {})
    utility = c.evaluations.get("utility", {})
    risk = c.evaluations.get("risk", {})
    rating = c.evaluations.get("rating", {})
    return {
        "id": c.id,
        "parent": (c.lineage or {}).get("parent"),
        "cd": coeffs.get("cd"),
        "cl": coeffs.get("cl"),
        "cm": coeffs.get("cm"),
        "u_comb": utility.get("u_comb"),
        "tail_mean": risk.get("tail_mean"),
        "rating": rating.get("rating"),
        "status": c.status,
    }


def _decision_summary(event) -> dict:
    payload = event.get("payload", {})
    out = {
        "seq": event["seq"],
        "ts": event["ts"],
        "actor": event["actor"],
        "type": event["type"],
    }
    if event["type"] == "decision":
        out["candidate"] = payload.get("candidate_id")
        out["verdict"] = payload.get("verdict")
    elif event["type"] in ("iterate", "converge"):
        out["stage"] = payload.get("stage")
        out["valid"] = len(payload.get("valid", [])) if "valid" in payload else None
        out["converge"] = event["type"] == "converge"
    return out


def build_report(run) -> dict:
    """Assemble the run summary from persisted stage sets and the event log."""
    bench_u = utility_combined(BENCHMARK, run.config.utility)
    stages = []
    for k in run.stage_indices():
        dset = run.read_set(k)
        stages.append(
            {
                "stage": k,
                "kind": _stage_kind(dset),
                "members": len(dset),
                "surviving": _surviving(dset),
            }
        )
    final_rows = []
    valid_ids = []
    if run.stage_indices():
        last = run.read_set(run.stage_indices()[-1])
        reviewed = any(c.status in ("valid", "invalid") for c in last.members)
        for c in last.members:
            final_rows.append(_candidate_row(c))
            if c.status == ("valid" if reviewed else "active"):
                valid_ids.append(c.id)
    sens = run.sensitivity_report()
    events = run.events()
    return {
        "config": run.config.to_dict(),
        "status": run.status(),
        "stages": stages,
        "benchmark": {
            "cd": BENCHMARK.cd,
            "cl": BENCHMARK.cl,
            "cm": BENCHMARK.cm,
            "u_cl": bench_u.u_cl,
            "u_cd": bench_u.u_cd,
            "u_cm": bench_u.u_cm,
            "u_comb": bench_u.u_comb,
        },
        "final": {"valid_ids": valid_ids, "candidates": final_rows},
        "heuristics": sens.heuristics if sens else [],
        "decisions": [
            _decision_summary(e)
            for e in events
            if e["type"] in ("decision", "iterate", "converge")
        ],
    }


def _fmt(value, spec: str = "{:.4f}") -> str:
    if value is None:
        return "-"
    if isinstance(value, str):
        return value
    return spec.format(value)


def render_markdown(doc: dict) -> str:
    cfg = doc["config"]
    lines = ["# Design run report", ""]
    lines.append(
        "Seed {seed}; flow Ma={ma}, AoA={aoa} deg, Re={re:.3g}; status: {status}.".format(
            seed=cfg["seed"],
            ma=cfg["flow"]["ma"],
            aoa=cfg["flow"]["aoa_deg"],
            re=cfg["flow"]["re"],
            status=doc["status"],
        )
    )
    lines.append("")
    lines.append("## Stage history")
    lines.append("")
    lines.append("| stage | kind | members | surviving |")
    lines.append("| --- | --- | --- | --- |")
    for s in doc["stages"]:
        lines.append(f"| {s['stage']} | {s['kind']} | {s['members']} | {s['surviving']} |")
    bench = doc["benchmark"]
    lines.append("")
    lines.append("## Final candidates")
    lines.append("")
    lines.append("| id | parent | C_D | C_L | C_M | U_comb | tail mean | rating | status |")
    lines.append("| --- | --- | --- | --- | --- | --- | --- | --- | --- |")
    lines.append(
        "| benchmark | - | {cd:.4f} | {cl:.4f} | {cm:.4f} | {u:.4f} | - | 3 | reference |".format(
            cd=bench["cd"], cl=bench["cl"], cm=bench["cm"], u=bench["u_comb"]
        )
    )
    for row in doc["final"]["candidates"]:
        lines.append(
            "| {id} | {parent} | {cd} | {cl} | {cm} | {u} | {tail} | {rating} | {status} |".format(
                id=row["id"],
                parent=row["parent"] or "-",
                cd=_fmt(row["cd"]),
                cl=_fmt(row["cl"]),
                cm=_fmt(row["cm"]),
                u=_fmt(row["u_comb"]),
                tail=_fmt(row["tail_mean"]),
                rating=row["rating"] if row["rating"] is not None else "-",
                status=row["status"],
            )
        )
    lines.append("")
    lines.append(f"Valid at last review: {', '.join(doc['final']['valid_ids']) or 'none'}.")
    if doc["heuristics"]:
        lines.append("")
        lines.append("## Sensitivity heuristics")
        for rule in doc["heuristics"]:
            lines.append(f"- {rule}")
    if doc["decisions"]:
        lines.append("")
        lines.append("## Decision log")
        for d in doc["decisions"]:
            if d["type"] == "decision":
                lines.append(
                    f"- [{d['seq']}] {d['ts']} {d['actor']}: {d['candidate']} -> {d['verdict']}"
                )
            else:
                tag = "converge" if d.get("converge") else "iterate"
                lines.append(f"- [{d['seq']}] {d['ts']} {d['actor']}: {tag} (stage {d.get('stage')})")
    return "\n".join(lines) + "\n"
