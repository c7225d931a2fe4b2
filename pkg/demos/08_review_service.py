"""
Driving a run over HTTP
=======================

Everything the library does locally is also exposed as a JSON API for review
tooling (`setfoil serve --run-dir ...` binds it to a port; here we mount the
app in-process).  Mutations are serialized per run - a second writer gets an
immediate 409 - and long stages run on a worker thread you poll.
"""

import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from setfoil.service import create_app

store = Path(tempfile.mkdtemp(prefix="setfoil_store_"))
client = TestClient(create_app(store))

# -- create and advance ------------------------------------------------------------
config = {"seed": 7, "n_initial": 96, "stage2": {"top_k": 16}, "stage3": {"base_n": 16}, "stage5": {"top_k": 4}}
run_id = client.post("/runs", json=config).json()["run_id"]
print("created", run_id, "->", client.get("/runs").json())

# Fire-and-poll: the POST returns 202 immediately, state shows busy until the
# worker lands the stage.
resp = client.post(f"/runs/{run_id}/advance")
print("advance:", resp.status_code, resp.json()["state"])
while client.get(f"/runs/{run_id}/state").json()["busy"]:
    time.sleep(0.02)
print("after poll: last_stage =", client.get(f"/runs/{run_id}/state").json()["last_stage"])

# Or block for the result when you don't mind waiting.
for _ in range(4):
    body = client.post(f"/runs/{run_id}/advance?wait=true").json()
    print(f"  stage {body['stage']}: {body['summary']['out']} candidates")

# -- inspect candidates --------------------------------------------------------------
listing = client.get(f"/runs/{run_id}/candidates").json()
cid = listing["candidates"][0]["id"]
print(f"stage {listing['stage']} queue:",
      [(c["id"], c["rating"], round(c["u_comb"], 3)) for c in listing["candidates"]])

detail = client.get(f"/runs/{run_id}/candidates/{cid}").json()
print(f"{cid}: {len(detail['geometry']['loop'])} outline points, "
      f"{len(detail['cp']['x'])} Cp stations, pca {['%.3f' % v for v in detail['pca']]}")
print("assessment:", detail["assessment"])

dat = client.get(f"/runs/{run_id}/candidates/{cid}/geometry.dat")
print("geometry.dat first line:", dat.text.splitlines()[0])

# -- decide, iterate, report -----------------------------------------------------------
decision = client.post(
    f"/runs/{run_id}/decisions",
    json={"candidate_id": cid, "verdict": "valid", "actor": "demo",
          "directives": [{"param": "CST_U2", "direction": "increase", "magnitude": 0.05}]},
)
print("decision:", decision.status_code, decision.json()["verdict"])
for other in [c["id"] for c in listing["candidates"] if c["id"] != cid]:
    client.post(f"/runs/{run_id}/decisions", json={"candidate_id": other, "verdict": "invalid"})

print("iterate:", client.post(f"/runs/{run_id}/iterate", json={"actor": "demo"}).json())
print("converge:", client.post(f"/runs/{run_id}/iterate", json={"converge": True}).json()["status"])

report = client.get(f"/runs/{run_id}/report", params={"format": "md"})
print("\nreport head:")
print("\n".join(report.text.splitlines()[:6]))
