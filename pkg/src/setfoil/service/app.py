"""HTTP/JSON interface over the run store: the review UI's backend.

Every endpoint speaks plain JSON (or text for the geometry downloads); all
plot data goes out as raw numeric arrays and rendering is the client's job.
Mutations are serialized per run: a second mutation while one is in flight
gets 409 immediately.  Stage advancement runs on a worker thread so the
handler returns at once; clients poll GET /runs/{id}/state.
"""

from __future__ import annotations

import threading

from fastapi import Body, FastAPI, HTTPException, Query, Response

from ..errors import ConfigError, ModelError, ParseError, StateError
from ..evaluate import CpCurve
from ..geometry import export_coordinates, export_obj, generate_airfoil
from ..pipeline import Run, RunConfig, benchmark_curve
from ..pipeline.runner import FINAL_AUTO_STAGE, TERMINAL_STATUSES
from .store import BusyError, RunHandle, RunStore

INVALID_BODY = (ConfigError, ParseError, ModelError, ValueError, TypeError)


def _candidate_summary(c) -> dict:
    coeffs = c.evaluations.get("coefficients") or {}
    utility = c.evaluations.get("utility") or {}
    risk = c.evaluations.get("risk") or {}
    rating = c.evaluations.get("rating") or {}
    return {
        "id": c.id,
        "status": c.status,
        "in_bounds": c.in_bounds,
        "parent": (c.lineage or {}).get("parent"),
        "cd": coeffs.get("cd"),
        "cl": coeffs.get("cl"),
        "cm": coeffs.get("cm"),
        "u_comb": utility.get("u_comb"),
        "tail_mean": risk.get("tail_mean"),
        "rating": rating.get("rating"),
    }


def create_app(store_root) -> FastAPI:
    store = RunStore(store_root)
    app = FastAPI(title="setfoil run service", version="1")
    app.state.store = store

    def get_run(run_id: str) -> Run:
        try:
            return store.open(run_id)
        except KeyError as err:
            raise HTTPException(404, str(err)) from err

    def get_handle(run_id: str) -> RunHandle:
        try:
            return store.handle(run_id)
        except KeyError as err:
            raise HTTPException(404, str(err)) from err

    def begin(handle: RunHandle, op: str):
        try:
            handle.begin(op)
        except BusyError as err:
            raise HTTPException(409, str(err)) from err

    @app.get("/runs")
    def list_runs() -> dict:
        rows = []
        for run_id in store.run_ids():
            run = store.open(run_id)
            rows.append(
                {
                    "run_id": run_id,
                    "status": run.status(),
                    "last_stage": run.last_stage(),
                    "pending_decisions": len(run.pending_decisions()),
                }
            )
        return {"runs": rows}

    @app.post("/runs", status_code=201)
    def create_run(body: dict = Body(default={})) -> dict:
        try:
            config = RunConfig.from_dict(body or {})
            run_id = store.create(config)
        except INVALID_BODY as err:
            raise HTTPException(422, str(err)) from err
        return {"run_id": run_id, "status": "active", "last_stage": 0}

    @app.get("/runs/{run_id}/state")
    def run_state(run_id: str) -> dict:
        run = get_run(run_id)
        handle = get_handle(run_id)
        summary = run.state_summary()
        summary.update(
            {
                "run_id": run_id,
                "busy": handle.busy,
                "busy_op": handle.busy_op,
                "last_summary": handle.last_summary,
                "last_error": handle.last_error,
            }
        )
        return summary

    @app.post("/runs/{run_id}/advance", status_code=202)
    def advance_run(run_id: str, response: Response, wait: bool = Query(default=False)) -> dict:
        run = get_run(run_id)
        handle = get_handle(run_id)
        begin(handle, "advance")
        # preflight under the busy flag so failures release it with a clean code
        if run.status() in TERMINAL_STATUSES:
            handle.finish()
            raise HTTPException(409, f"run is {run.status()}")
        nxt = 2 if run.last_stage() == 0 else run.last_stage() + 1
        if nxt > FINAL_AUTO_STAGE:
            handle.finish()
            raise HTTPException(409, "automated stages complete; submit decisions and iterate")

        if wait:
            try:
                summary = run.advance()
            except StateError as err:
                handle.finish(error=str(err))
                raise HTTPException(409, str(err)) from err
            except Exception as err:
                handle.finish(error=f"{type(err).__name__}: {err}")
                raise HTTPException(500, f"{type(err).__name__}: {err}") from err
            handle.finish(summary=summary)
            response.status_code = 200
            return {"run_id": run_id, "state": "done", "stage": nxt, "summary": summary}

        def work():
            try:
                summary = run.advance()
            except Exception as err:  # keep the handle consistent on any failure
                handle.finish(error=f"{type(err).__name__}: {err}")
            else:
                handle.finish(summary=summary)

        threading.Thread(target=work, daemon=True).start()
        return {"run_id": run_id, "state": "running", "stage": nxt, "summary": None}

    @app.get("/runs/{run_id}/candidates")
    def list_candidates(run_id: str, stage: int | None = Query(default=None)) -> dict:
        run = get_run(run_id)
        k = run.last_stage() if stage is None else stage
        try:
            dset = run.read_set(k)
        except KeyError as err:
            raise HTTPException(404, str(err)) from err
        return {
            "run_id": run_id,
            "stage": k,
            "candidates": [_candidate_summary(c) for c in dset.members],
        }

    @app.get("/runs/{run_id}/candidates/{cid}")
    def candidate_detail(run_id: str, cid: str) -> dict:
        run = get_run(run_id)
        try:
            stage, c = run.candidate(cid)
        except KeyError as err:
            raise HTTPException(404, str(err)) from err
        geom = generate_airfoil(c.cst)
        cp = run.cp_for(c).to_dict()
        bench = benchmark_curve(
            run.config.flow, run.config.cp_points, run.config.benchmark_cp_file
        )
        pca_coords = run.pca()["stages"].get(str(stage), {}).get(cid)
        return {
            "run_id": run_id,
            "id": c.id,
            "stage": stage,
            "status": c.status,
            "in_bounds": c.in_bounds,
            "flow": {"ma": c.flow.ma, "aoa_deg": c.flow.aoa_deg, "re": c.flow.re},
            "cst": list(c.cst.as_vector()),
            "geometry": {
                "upper": geom.upper.tolist(),
                "lower": geom.lower.tolist(),
                "loop": geom.loop.tolist(),
            },
            "cp": cp,
            "benchmark_cp": bench.to_dict(),
            "coefficients": c.evaluations.get("coefficients"),
            "utility": c.evaluations.get("utility"),
            "risk": c.evaluations.get("risk"),
            "rating": c.evaluations.get("rating"),
            "assessment": c.evaluations.get("assessment"),
            "human_verdict": c.evaluations.get("human_verdict"),
            "lineage": c.lineage,
            "pca": pca_coords,
        }

    @app.get("/runs/{run_id}/candidates/{cid}/geometry.dat")
    def candidate_dat(run_id: str, cid: str) -> Response:
        run = get_run(run_id)
        try:
            _, c = run.candidate(cid)
        except KeyError as err:
            raise HTTPException(404, str(err)) from err
        if c.status == "filtered":
            raise HTTPException(404, f"candidate {cid} was filtered out")
        text = export_coordinates(generate_airfoil(c.cst), name=cid)
        return Response(text, media_type="text/plain")

    @app.get("/runs/{run_id}/candidates/{cid}/geometry.obj")
    def candidate_obj(run_id: str, cid: str) -> Response:
        run = get_run(run_id)
        try:
            _, c = run.candidate(cid)
        except KeyError as err:
            raise HTTPException(404, str(err)) from err
        if c.status == "filtered":
            raise HTTPException(404, f"candidate {cid} was filtered out")
        text = export_obj(generate_airfoil(c.cst), name=cid)
        return Response(text, media_type="model/obj")

    @app.post("/runs/{run_id}/decisions", status_code=201)
    def post_decision(run_id: str, body: dict = Body(...)) -> dict:
        run = get_run(run_id)
        handle = get_handle(run_id)
        begin(handle, "decision")
        try:
            recorded = run.decide(body, actor=body.get("actor"))
        except KeyError as err:
            raise HTTPException(404, str(err)) from err
        except StateError as err:
            raise HTTPException(409, str(err)) from err
        except INVALID_BODY as err:
            raise HTTPException(422, str(err)) from err
        finally:
            handle.finish()
        recorded["run_id"] = run_id
        return recorded

    @app.post("/runs/{run_id}/iterate")
    def iterate_run(run_id: str, body: dict = Body(default={})) -> dict:
        run = get_run(run_id)
        handle = get_handle(run_id)
        begin(handle, "iterate")
        try:
            result = run.iterate(
                converge=bool((body or {}).get("converge", False)),
                actor=(body or {}).get("actor", "human"),
            )
        except StateError as err:
            raise HTTPException(409, str(err)) from err
        except INVALID_BODY as err:
            raise HTTPException(422, str(err)) from err
        finally:
            handle.finish()
        result["run_id"] = run_id
        return result

    @app.get("/runs/{run_id}/report")
    def run_report(run_id: str, format: str = Query(default="json")) -> Response:
        run = get_run(run_id)
        doc = run.report_doc()
        if format == "md":
            from ..pipeline import render_markdown

            return Response(render_markdown(doc), media_type="text/markdown")
        from ..pipeline.runner import dumps

        return Response(dumps(doc, indent=1), media_type="application/json")

    @app.get("/runs/{run_id}/sensitivity")
    def run_sensitivity(run_id: str) -> dict:
        run = get_run(run_id)
        report = run.sensitivity_report()
        if report is None:
            raise HTTPException(404, "sensitivity analysis not yet computed")
        doc = report.to_dict()
        doc["run_id"] = run_id
        return doc

    @app.get("/runs/{run_id}/pca")
    def run_pca(run_id: str) -> dict:
        run = get_run(run_id)
        doc = run.pca()
        doc["run_id"] = run_id
        return doc

    return app
