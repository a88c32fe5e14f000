"""In-memory job store and the single FIFO execution worker.

A job is one submission: a problem, an ordered tool selection, and the
results that accumulate as the worker gets to them.  The store hands out
whole-job snapshots under a lock, so pollers always see a consistent
view and a completed job renders identically on every poll.

The worker drains a queue of (job id, tool index) items on one thread.
Combined with the engine's own execution lock this serializes tool
processes across all jobs, not just within one.
"""

from __future__ import annotations

import logging
import queue
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable

from .engine import RunResult, TimeoutPolicy, ToolRunner
from .problems import FormatCategory, Problem
from .registry import ToolSpec

log = logging.getLogger(__name__)

DEFAULT_CAPACITY = 500
DEFAULT_TTL_S = 24 * 3600.0


class JobState(str, Enum):
    QUEUED = "QUEUED"
    RUNNING = "RUNNING"
    DONE = "DONE"


@dataclass(frozen=True)
class ProblemSource:
    kind: str  # "inline" | "upload" | "database"
    filename: str | None = None
    number: int | None = None

    def to_dict(self) -> dict:
        data: dict = {"kind": self.kind}
        if self.filename is not None:
            data["filename"] = self.filename
        if self.number is not None:
            data["number"] = self.number
        return data


@dataclass
class Job:
    id: str
    source: ProblemSource
    problem: Problem
    category: FormatCategory
    warnings: list[str]
    specs: list[ToolSpec]
    policy: TimeoutPolicy
    created_at: float
    state: JobState = JobState.QUEUED
    current_tool_index: int | None = None
    results: list[RunResult] = field(default_factory=list)

    @property
    def tool_ids(self) -> list[str]:
        return [spec.id for spec in self.specs]


def _iso(epoch: float) -> str:
    return (
        datetime.fromtimestamp(epoch, tz=timezone.utc)
        .isoformat(timespec="seconds")
        .replace("+00:00", "Z")
    )


class JobStore:
    """Bounded in-memory job map with oldest-done eviction.

    Jobs are dropped once the store holds more than ``capacity`` of them
    or once they are older than ``ttl_s``, whichever comes first; jobs
    that are still queued or running are never evicted.
    """

    def __init__(
        self,
        capacity: int = DEFAULT_CAPACITY,
        ttl_s: float = DEFAULT_TTL_S,
        clock: Callable[[], float] = time.time,
    ):
        self._capacity = capacity
        self._ttl_s = ttl_s
        self._clock = clock
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def create(self, job: Job) -> None:
        with self._lock:
            self._evict_locked()
            self._jobs[job.id] = job

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def mark_running(self, job_id: str, tool_index: int) -> None:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is not None:
                job.state = JobState.RUNNING
                job.current_tool_index = tool_index

    def append_result(self, job_id: str, result: RunResult) -> None:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return
            job.results.append(result)
            if len(job.results) == len(job.specs):
                job.state = JobState.DONE
                job.current_tool_index = None

    def view(self, job_id: str) -> dict | None:
        """Snapshot a job as a JSON-ready document, atomically."""
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return None
            document = {
                "id": job.id,
                "state": job.state.value,
                "current_tool_index": job.current_tool_index,
                "problem_source": job.source.to_dict(),
                "category": job.category.value,
                "warnings": list(job.warnings),
                "selected_tools": job.tool_ids,
                "results": [result.as_dict() for result in job.results],
                "created_at": _iso(job.created_at),
            }
        return document

    def _evict_locked(self) -> None:
        now = self._clock()
        expired = [
            job_id
            for job_id, job in self._jobs.items()
            if job.state == JobState.DONE and now - job.created_at > self._ttl_s
        ]
        for job_id in expired:
            del self._jobs[job_id]
        while len(self._jobs) >= self._capacity:
            oldest = None
            for job_id, job in self._jobs.items():  # insertion order
                if job.state == JobState.DONE:
                    oldest = job_id
                    break
            if oldest is None:
                break
            del self._jobs[oldest]

    def __len__(self) -> int:
        with self._lock:
            return len(self._jobs)


class ExecutionWorker:
    """Single thread draining a FIFO queue of (job id, tool index) items.

    Submissions enqueue one item per selected tool, contiguously, so a
    job's tools run in selection order and jobs never interleave.  Items
    for evicted jobs are skipped.
    """

    _STOP = (None, -1)

    def __init__(self, store: JobStore, runner: ToolRunner):
        self._store = store
        self._runner = runner
        self._queue: "queue.Queue[tuple[str | None, int]]" = queue.Queue()
        self._submit_lock = threading.Lock()
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(
            target=self._loop, name="confbench-worker", daemon=True
        )
        self._thread.start()

    def stop(self, timeout: float | None = 30.0) -> None:
        if self._thread is None:
            return
        self._queue.put(self._STOP)
        self._thread.join(timeout=timeout)
        self._thread = None

    def submit(self, job: Job) -> None:
        with self._submit_lock:
            for index in range(len(job.specs)):
                self._queue.put((job.id, index))

    def _loop(self) -> None:
        while True:
            job_id, index = self._queue.get()
            if job_id is None:
                break
            try:
                self._run_item(job_id, index)
            except Exception:
                log.exception("tool run failed for job %s item %d", job_id, index)

    def _run_item(self, job_id: str, index: int) -> None:
        job = self._store.get(job_id)
        if job is None:
            return
        self._store.mark_running(job_id, index)
        result = self._runner.run_tool(job.specs[index], job.problem, job.policy)
        self._store.append_result(job_id, result)
