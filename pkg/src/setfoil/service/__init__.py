"""HTTP service exposing runs, candidates, plot data, and the review loop."""

from pathlib import Path

from .app import create_app
from .store import BusyError, RunStore

SCHEMA_DIR = Path(__file__).parent / "schemas"


def load_schema(name: str) -> dict:
    """Published response schema by name, e.g. load_schema("candidate_detail")."""
    import json

    path = SCHEMA_DIR / f"{name}.schema.json"
    with open(path) as fh:
        return json.load(fh)


__all__ = ["BusyError", "RunStore", "SCHEMA_DIR", "create_app", "load_schema"]
