"""Filesystem-backed run store with per-run busy tracking.

The directory tree is the registry: every child of the store root that holds a
config.json is a run, addressed by its directory name.  Mutations go through a
handle that owns the run's busy flag, so a second mutation attempt fails fast
instead of queueing behind the advisory file lock.
"""

from __future__ import annotations

import re
import threading
from pathlib import Path

from ..pipeline import Run, RunConfig

_RUN_NAME = re.compile(r"^run-(\d+)$")


class BusyError(RuntimeError):
    """Another mutation is already in flight for this run."""


class RunHandle:
    """Busy flag + last-result bookkeeping for one run."""

    def __init__(self, run_dir: Path):
        self.dir = run_dir
        self._mutex = threading.Lock()
        self.busy_op = None
        self.last_summary = None
        self.last_error = None

    def begin(self, op: str):
        with self._mutex:
            if self.busy_op is not None:
                raise BusyError(f"{self.busy_op} already in progress")
            self.busy_op = op

    def finish(self, summary=None, error=None):
        with self._mutex:
            self.busy_op = None
            if summary is not None:
                self.last_summary = summary
            if error is not None:
                self.last_error = error
            elif summary is not None:
                self.last_error = None

    @property
    def busy(self) -> bool:
        return self.busy_op is not None


class RunStore:
    """All runs under one root directory."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._handles: dict[str, RunHandle] = {}
        self._lock = threading.Lock()

    def run_ids(self) -> list:
        ids = [p.name for p in self.root.iterdir() if (p / "config.json").exists()]
        return sorted(ids)

    def exists(self, run_id: str) -> bool:
        return (self.root / run_id / "config.json").exists()

    def open(self, run_id: str) -> Run:
        if not self.exists(run_id):
            raise KeyError(f"unknown run {run_id!r}")
        return Run(self.root / run_id)

    def handle(self, run_id: str) -> RunHandle:
        if not self.exists(run_id):
            raise KeyError(f"unknown run {run_id!r}")
        with self._lock:
            if run_id not in self._handles:
                self._handles[run_id] = RunHandle(self.root / run_id)
            return self._handles[run_id]

    def create(self, config: RunConfig) -> str:
        with self._lock:
            taken = [
                int(m.group(1))
                for p in self.root.iterdir()
                if (m := _RUN_NAME.match(p.name))
            ]
            run_id = f"run-{(max(taken) + 1 if taken else 1):04d}"
            Run.create(self.root / run_id, config)
            self._handles[run_id] = RunHandle(self.root / run_id)
        return run_id
