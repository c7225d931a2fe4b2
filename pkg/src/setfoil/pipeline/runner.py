"""Persisted, resumable orchestration of the staged set-narrowing workflow.

A run lives in a directory: config.json, stages/stage_k.json snapshots,
sensitivity artifacts, pca.json, report.{json,md}, and decisions.jsonl, the
append-only event log.  Every mutation appends exactly one event; replaying a
log (with its recorded timestamps) rebuilds an identical run directory.  All
mutations happen under an advisory file lock, one writer per run.
"""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from filelock import FileLock

from ..errors import ConfigError, StateError
from ..evaluate import (
    CpCurve,
    make_cp_evaluator,
    make_evaluator,
    make_prob_evaluator,
)
from ..geometry import CstParams
from ..risk import assess, design_seed, risk_filter
from ..sampling import DesignCandidate, DesignSet, sample
from ..score import rank_by_utility, score_candidate, utility_filter
from ..sensitivity import SensitivityReport, analyze
from .config import RunConfig, canonical_param, directive_direction
from .pca import project_pca2
from .rating import benchmark_curve, build_assessment, rate_cp, review_verdict
from .refine import refine
from .report import build_report, render_markdown

FINAL_AUTO_STAGE = 6
TERMINAL_STATUSES = ("empty", "risk-exhausted", "exhausted", "converged")


def default_clock() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def _json_default(o):
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


def dumps(obj, indent=None) -> str:
    return json.dumps(obj, sort_keys=True, indent=indent, allow_nan=False, default=_json_default)


def write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def write_json(path: Path, obj, indent=None) -> None:
    write_text(path, dumps(obj, indent=indent) + "\n")


class Run:
    """One persisted design run rooted at ``run_dir``."""

    def __init__(self, run_dir, clock=None):
        self.dir = Path(run_dir)
        config_path = self.dir / "config.json"
        if not config_path.exists():
            raise StateError(f"{self.dir} is not an initialized run directory")
        self.clock = clock or default_clock
        with open(config_path) as fh:
            self.config = RunConfig.from_dict(json.load(fh))
        with open(self.dir / "state.json") as fh:
            self._state = json.load(fh)
        self._bind_evaluators()

    @classmethod
    def create(cls, run_dir, config: RunConfig, clock=None) -> "Run":
        path = Path(run_dir)
        if (path / "config.json").exists():
            raise StateError(f"{path} already holds a run")
        (path / "stages").mkdir(parents=True, exist_ok=True)
        write_json(path / "config.json", config.to_dict(), indent=1)
        write_json(
            path / "state.json",
            {"status": "active", "last_stage": 0, "next_id": 1, "pending": [], "stages": [], "seq": 0},
            indent=1,
        )
        run = cls(run_dir, clock=clock)
        run._append_event("run_init", "engine", {"config": config.to_dict()})
        return run

    def _bind_evaluators(self):
        self._evaluator = make_evaluator(self.config.evaluator)
        self._prob_evaluator = make_prob_evaluator(self.config.prob_evaluator)
        self._cp_evaluator = make_cp_evaluator(self.config.cp_evaluator)

    # -- persistence ------------------------------------------------------

    def _lock(self, timeout: float = 60.0) -> FileLock:
        return FileLock(str(self.dir / ".lock"), timeout=timeout)

    def _reload_state(self):
        # another Run instance (CLI, service worker) may have written since load
        with open(self.dir / "state.json") as fh:
            self._state = json.load(fh)

    def _save_state(self):
        write_json(self.dir / "state.json", self._state, indent=1)

    def _append_event(self, etype: str, actor: str, payload: dict) -> dict:
        self._state["seq"] += 1
        event = {
            "seq": self._state["seq"],
            "ts": self.clock(),
            "actor": actor,
            "type": etype,
            "payload": payload,
        }
        with open(self.dir / "decisions.jsonl", "a") as fh:
            fh.write(dumps(event) + "\n")
        self._save_state()
        return event

    def _stage_path(self, k: int) -> Path:
        return self.dir / "stages" / f"stage_{k}.json"

    def _write_set(self, k: int, dset: DesignSet):
        write_json(self._stage_path(k), dset.to_dict())
        if k not in self._state["stages"]:
            self._state["stages"].append(k)

    def read_set(self, k: int) -> DesignSet:
        path = self._stage_path(k)
        if not path.exists():
            raise KeyError(f"stage {k} not recorded")
        with open(path) as fh:
            return DesignSet.from_dict(json.load(fh))

    def stage_indices(self) -> list:
        return list(self._state["stages"])

    def status(self) -> str:
        return self._state["status"]

    def last_stage(self) -> int:
        return self._state["last_stage"]

    def events(self) -> list:
        path = self.dir / "decisions.jsonl"
        if not path.exists():
            return []
        with open(path) as fh:
            return [json.loads(line) for line in fh if line.strip()]

    def pending_decisions(self) -> list:
        return list(self._state["pending"])

    def sensitivity_report(self) -> SensitivityReport | None:
        path = self.dir / "sensitivity.json"
        if not path.exists():
            return None
        with open(path) as fh:
            return SensitivityReport.from_dict(json.load(fh))

    def pca(self) -> dict:
        path = self.dir / "pca.json"
        if not path.exists():
            return {"stages": {}, "explained_variance": [0.0, 0.0]}
        with open(path) as fh:
            return json.load(fh)

    def _write_pca(self):
        sets = [self.read_set(k) for k in self._state["stages"]]
        write_json(self.dir / "pca.json", project_pca2(sets))

    def state_summary(self) -> dict:
        entries = []
        for k in self._state["stages"]:
            dset = self.read_set(k)
            reviewed = any(c.status in ("valid", "invalid") for c in dset.members)
            surviving = sum(
                1 for c in dset.members if c.status == ("valid" if reviewed else "active")
            )
            entries.append(
                {
                    "stage": k,
                    "kind": dset.provenance.get("kind", "unknown"),
                    "members": len(dset),
                    "surviving": surviving,
                }
            )
        return {
            "status": self._state["status"],
            "last_stage": self._state["last_stage"],
            "stages": entries,
            "pending_decisions": len(self._state["pending"]),
            "seed": self.config.seed,
        }

    # -- evaluation helpers ------------------------------------------------

    def _evaluate_point(self, dset: DesignSet):
        for c in dset.members:
            pred = self._evaluator(c.cst, c.flow)
            c.evaluations["coefficients"] = pred.as_dict()
            score_candidate(c, self.config.utility)

    def _evaluate_probabilistic(self, dset: DesignSet, with_risk: bool = True):
        risk_cfg = self.config.risk_config()
        for c in dset.members:
            dist = self._prob_evaluator(c.cst, c.flow)
            c.evaluations["distribution"] = dist.as_dict()
            c.evaluations["coefficients"] = dist.mean_prediction().as_dict()
            score_candidate(c, self.config.utility)
            if with_risk:
                result = assess(dist.cl, risk_cfg, design_seed(risk_cfg.seed, c.id))
                c.evaluations["risk"] = result.as_dict()

    def _attach_cp(self, dset: DesignSet):
        for c in dset.members:
            curve = self._cp_evaluator(c.cst, c.flow, self.config.cp_points)
            c.evaluations["cp"] = curve.to_dict()

    def _benchmark_curve(self) -> CpCurve:
        return benchmark_curve(
            self.config.flow, self.config.cp_points, self.config.benchmark_cp_file
        )

    def _review(self, dset: DesignSet):
        """Rubric rating + machine verdict + assessment for every member."""
        bench = self._benchmark_curve()
        cfg = self.config
        valid, invalid = [], []
        for c in dset.members:
            curve = CpCurve.from_dict(c.evaluations["cp"])
            rating = rate_cp(curve, bench, cfg.prominence_low, cfg.prominence_high)
            u_comb = c.evaluations["utility"]["u_comb"]
            verdict = review_verdict(u_comb, rating.rating, cfg.stage6_u_min, cfg.stage6_rating_min)
            c.status = verdict
            c.evaluations["rating"] = rating.as_dict()
            c.evaluations["assessment"] = build_assessment(
                c, rating, verdict, cfg.stage4_var_target_cl
            )
            (valid if verdict == "valid" else invalid).append(c.id)
        return valid, invalid

    # -- stage machine ------------------------------------------------------

    def advance(self, lock_timeout: float = 60.0) -> dict:
        """Run the next automated stage (2..6). Returns a stage summary."""
        with self._lock(lock_timeout):
            self._reload_state()
            if self._state["status"] in TERMINAL_STATUSES:
                raise StateError(f"run is {self._state['status']}")
            nxt = 2 if self._state["last_stage"] == 0 else self._state["last_stage"] + 1
            if nxt > FINAL_AUTO_STAGE:
                raise StateError("automated stages complete; submit decisions and iterate")
            stage_fn = {
                2: self._stage2,
                3: self._stage3,
                4: self._stage4,
                5: self._stage5,
                6: self._stage6,
            }[nxt]
            return stage_fn()

    def _finish_stage(self, kind: str, dset: DesignSet, extra: dict | None = None) -> dict:
        self._state["last_stage"] = dset.stage
        self._write_pca()
        summary = {
            "stage": dset.stage,
            "kind": kind,
            "out": len(dset),
            "status": self._state["status"],
        }
        if extra:
            summary.update(extra)
        self._append_event("stage", "engine", summary)
        return summary

    def _stage2(self) -> dict:
        cfg = self.config
        s1 = sample(cfg.space, cfg.n_initial, cfg.strategy, cfg.flow, seed=cfg.seed, stage=1)
        self._evaluate_point(s1)
        filtered = utility_filter(s1, cfg.utility, cfg.stage2_threshold, cfg.stage2_top_k)
        s2 = DesignSet(stage=2, members=filtered.members, provenance=filtered.provenance)
        kept = set(s2.ids())
        for c in s1.members:
            if c.id not in kept:
                c.status = "filtered"
        self._write_set(1, s1)
        self._write_set(2, s2)
        self._state["next_id"] = cfg.n_initial + 1
        if not s2.members:
            self._state["status"] = "empty"
        return self._finish_stage("generate_filter", s2, {"in": len(s1)})

    def _stage3(self) -> dict:
        cfg = self.config
        s2 = self.read_set(2)

        def row_eval(rows):
            out = {"CL": [], "CD": [], "CM": []}
            for row in rows:
                pred = self._evaluator(CstParams.from_vector(row), cfg.flow)
                out["CL"].append(pred.cl)
                out["CD"].append(pred.cd)
                out["CM"].append(pred.cm)
            return out

        report = analyze(
            cfg.space,
            row_eval,
            base_n=cfg.stage3_base_n,
            seed=cfg.seed,
            top_k=cfg.report_top_k,
        )
        write_json(self.dir / "sensitivity.json", report.to_dict(), indent=1)
        write_text(self.dir / "sensitivity.md", report.to_markdown())
        write_text(self.dir / "sensitivity.csv", report.to_csv())
        s3 = DesignSet(
            stage=3,
            members=s2.members,
            provenance={"kind": "sensitivity", "base_n": cfg.stage3_base_n, "rows": report.total_rows},
        )
        self._write_set(3, s3)
        return self._finish_stage("sensitivity", s3, {"rows": report.total_rows})

    def _require_report(self) -> SensitivityReport:
        report = self.sensitivity_report()
        if report is None:
            raise StateError("sensitivity report missing; run stage 3 first")
        return report

    def _refine_set(self, parents: DesignSet, stage: int, policy=None) -> DesignSet:
        report = self._require_report()
        cfg = self.config
        children = refine(
            parents,
            report,
            policy or cfg.refine,
            space=cfg.space,
            id_start=self._state["next_id"],
            stage=stage,
        )
        self._state["next_id"] += len(children)
        return children

    def _stage4(self) -> dict:
        cfg = self.config
        s3 = self.read_set(3)
        children = self._refine_set(s3, stage=4)
        self._evaluate_point(children)
        s4 = risk_filter(children, self._prob_evaluator, cfg.risk_config())
        s4.provenance["refine_steps"] = children.provenance["steps"]
        self._write_set(4, s4)
        if not s4.members:
            self._state["status"] = "risk-exhausted"
        return self._finish_stage("refine_risk", s4, {"in": len(children)})

    def _stage5(self) -> dict:
        cfg = self.config
        s4 = self.read_set(4)
        children = self._refine_set(s4, stage=5)
        self._evaluate_probabilistic(children)
        ranked = rank_by_utility(children)[: cfg.stage5_top_k]
        s5 = DesignSet(
            stage=5,
            members=ranked,
            provenance={
                "kind": "refine_rank_cp",
                "top_k": cfg.stage5_top_k,
                "input_size": len(children),
                "steps": children.provenance["steps"],
            },
        )
        self._attach_cp(s5)
        self._write_set(5, s5)
        return self._finish_stage("refine_rank_cp", s5, {"in": len(children)})

    def _stage6(self) -> dict:
        s5 = self.read_set(5)  # fresh objects; stage-5 snapshot stays untouched
        s6 = DesignSet(stage=6, members=s5.members, provenance={"kind": "review"})
        valid, invalid = self._review(s6)
        s6.provenance["valid"] = valid
        s6.provenance["invalid"] = invalid
        self._write_set(6, s6)
        return self._finish_stage(
            "review", s6, {"valid": valid, "invalid": invalid, "queue": len(s6)}
        )

    # -- human review loop ---------------------------------------------------

    def decide(self, decision: dict, actor: str | None = None, lock_timeout: float = 60.0) -> dict:
        """Record a human verdict (and optional directives) for one candidate."""
        with self._lock(lock_timeout):
            self._reload_state()
            if self._state["last_stage"] < FINAL_AUTO_STAGE:
                raise StateError("review queue not open until stage 6")
            if self._state["status"] in TERMINAL_STATUSES:
                raise StateError(f"run is {self._state['status']}")
            queue = self.read_set(self._state["last_stage"])
            cid = decision.get("candidate_id")
            if cid not in queue.ids():
                raise KeyError(f"unknown candidate {cid!r}")
            verdict = decision.get("verdict")
            if verdict not in ("valid", "invalid"):
                raise ValueError(f"verdict must be valid or invalid, got {verdict!r}")
            directives = []
            for d in decision.get("directives") or []:
                directives.append(
                    {
                        "param": canonical_param(d["param"], self.config.space),
                        "direction": directive_direction(d["direction"]),
                        "magnitude": None if d.get("magnitude") is None else float(d["magnitude"]),
                    }
                )
            normalized = {
                "candidate_id": cid,
                "verdict": verdict,
                "note": decision.get("note", ""),
                "directives": directives,
                "actor": actor or decision.get("actor", "human"),
            }
            member = queue.get(cid)
            member.status = verdict
            member.evaluations["human_verdict"] = {
                "verdict": verdict,
                "actor": normalized["actor"],
                "note": normalized["note"],
            }
            self._write_set(self._state["last_stage"], queue)
            self._state["pending"].append(normalized)
            self._append_event("decision", normalized["actor"], normalized)
            return dict(normalized)

    def iterate(self, converge: bool = False, actor: str = "human", lock_timeout: float = 60.0) -> dict:
        """Apply pending verdicts: refine the retained set, or converge the run."""
        with self._lock(lock_timeout):
            self._reload_state()
            if self._state["last_stage"] < FINAL_AUTO_STAGE:
                raise StateError("nothing to iterate before stage 6")
            if self._state["status"] in TERMINAL_STATUSES:
                raise StateError(f"run is {self._state['status']}")
            queue = self.read_set(self._state["last_stage"])
            pending = list(self._state["pending"])
            applied = [d["candidate_id"] for d in pending]
            if converge:
                valid = [c.id for c in queue.members if c.status == "valid"]
                self._state["status"] = "converged"
                self._state["pending"] = []
                self._append_event(
                    "converge",
                    actor,
                    {"stage": self._state["last_stage"], "valid": valid, "decisions_applied": applied},
                )
                self.write_report()
                return {
                    "status": "converged",
                    "stage": self._state["last_stage"],
                    "changed": True,
                    "valid": valid,
                }
            if not pending:
                self._append_event("iterate", actor, {"stage": self._state["last_stage"], "noop": True})
                return {
                    "status": self._state["status"],
                    "stage": self._state["last_stage"],
                    "changed": False,
                }
            retained = DesignSet(
                stage=queue.stage,
                members=[c for c in queue.members if c.status == "valid"],
                provenance={"kind": "retained"},
            )
            if not retained.members:
                self._state["status"] = "exhausted"
                self._state["pending"] = []
                self._append_event(
                    "iterate",
                    actor,
                    {"stage": self._state["last_stage"], "decisions_applied": applied, "valid": [], "invalid": []},
                )
                return {
                    "status": "exhausted",
                    "stage": self._state["last_stage"],
                    "changed": True,
                    "valid": [],
                    "invalid": [],
                }
            directives = []
            for d in pending:
                directives.extend(d["directives"])
            policy = self.config.refine.with_directives(directives) if directives else self.config.refine
            nxt = self._state["last_stage"] + 1
            children = self._refine_set(retained, stage=nxt, policy=policy)
            self._evaluate_probabilistic(children)
            self._attach_cp(children)
            valid, invalid = self._review(children)
            children.provenance.update(
                {"kind": "iterate", "valid": valid, "invalid": invalid, "decisions_applied": applied}
            )
            self._write_set(nxt, children)
            self._state["pending"] = []
            self._state["last_stage"] = nxt
            self._write_pca()
            self._append_event(
                "iterate",
                actor,
                {"stage": nxt, "decisions_applied": applied, "valid": valid, "invalid": invalid},
            )
            return {
                "status": self._state["status"],
                "stage": nxt,
                "changed": True,
                "valid": valid,
                "invalid": invalid,
            }

    # -- artifacts ------------------------------------------------------------

    def report_doc(self) -> dict:
        return build_report(self)

    def write_report(self) -> dict:
        doc = self.report_doc()
        write_json(self.dir / "report.json", doc, indent=1)
        write_text(self.dir / "report.md", render_markdown(doc))
        return doc

    def cp_for(self, candidate) -> CpCurve:
        """Stored Cp curve for a candidate, computing it when not yet attached."""
        if "cp" in candidate.evaluations:
            return CpCurve.from_dict(candidate.evaluations["cp"])
        return self._cp_evaluator(candidate.cst, candidate.flow, self.config.cp_points)

    def candidate(self, cid: str):
        """(stage, candidate) for the most recent record of ``cid``."""
        for k in reversed(self._state["stages"]):
            dset = self.read_set(k)
            try:
                return k, dset.get(cid)
            except KeyError:
                continue
        raise KeyError(f"unknown candidate {cid!r}")


def replay(source_dir, dest_dir) -> Run:
    """Re-execute a run's event log into a fresh directory.

    Timestamps are replayed from the log, so artifacts (including the event
    log itself) come out byte-identical to the source run's.
    """
    source = Path(source_dir)
    with open(source / "decisions.jsonl") as fh:
        events = [json.loads(line) for line in fh if line.strip()]
    if not events or events[0]["type"] != "run_init":
        raise StateError("event log does not start with run_init")
    timestamps = iter([e["ts"] for e in events])
    clock = lambda: next(timestamps)  # noqa: E731
    config = RunConfig.from_dict(events[0]["payload"]["config"])
    run = Run.create(dest_dir, config, clock=clock)
    for event in events[1:]:
        etype = event["type"]
        if etype == "stage":
            run.advance()
        elif etype == "decision":
            run.decide(event["payload"], actor=event["actor"])
        elif etype == "iterate":
            run.iterate(actor=event["actor"])
        elif etype == "converge":
            run.iterate(converge=True, actor=event["actor"])
        else:
            raise StateError(f"unknown event type {etype!r}")
    return run
