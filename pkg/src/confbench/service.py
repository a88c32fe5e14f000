"""HTTP surface: registry browsing, job submission, polling, and reload.

Submission is asynchronous: POST /api/jobs enqueues and returns at once
with the job id, the inferred problem category, and any advisory
tool-compatibility warnings; clients poll GET /api/jobs/{id} to watch
results stream in tool by tool.  The web UI is plain static files served
from the root path.
"""

from __future__ import annotations

import secrets
import threading
import time
from contextlib import asynccontextmanager
from typing import Literal, Union

from fastapi import FastAPI, Header, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import Settings
from .cops import CopsClient, CopsFetchError
from .engine import TimeoutPolicy, ToolRunner
from .jobs import ExecutionWorker, Job, JobStore, ProblemSource
from .problems import (
    ParseError,
    Problem,
    infer_category,
    parse_problem,
    validate_selection,
)
from .registry import (
    RegistryError,
    RegistryTree,
    ScanResult,
    UnknownToolError,
    resolve_tools,
    scan_registry,
)

# How far the graceful/kill deadlines may exceed the soft-timeout cap; the
# default policy (59, 61, 63) sits exactly on these bounds.
TERM_MARGIN_S = 2.0
KILL_MARGIN_S = 4.0


class InlineSource(BaseModel):
    kind: Literal["inline"]
    text: str


class UploadSource(BaseModel):
    kind: Literal["upload"]
    filename: str
    text: str


class DatabaseSource(BaseModel):
    kind: Literal["database"]
    number: int


class PolicyPayload(BaseModel):
    soft_s: float
    term_s: float
    kill_s: float


class JobRequest(BaseModel):
    problem_source: Union[InlineSource, UploadSource, DatabaseSource] = Field(
        discriminator="kind"
    )
    tool_ids: list[str]
    timeout_policy: PolicyPayload | None = None


class _RegistryHolder:
    """Current registry tree; swapped atomically on reload."""

    def __init__(self, scan: ScanResult):
        self._scan = scan
        self._lock = threading.Lock()

    def get(self) -> ScanResult:
        with self._lock:
            return self._scan

    def replace(self, scan: ScanResult) -> None:
        with self._lock:
            self._scan = scan


def build_policy(payload: PolicyPayload | None, max_soft: float) -> TimeoutPolicy:
    """Validate a per-job policy against the server-side maximum.

    Without a payload, the standard defaults apply (clamped if the
    operator configured a lower maximum).
    """
    if payload is None:
        default = TimeoutPolicy()
        if default.soft_s <= max_soft:
            return default
        return TimeoutPolicy(max_soft, max_soft + TERM_MARGIN_S, max_soft + KILL_MARGIN_S)
    try:
        policy = TimeoutPolicy(payload.soft_s, payload.term_s, payload.kill_s)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    if policy.soft_s > max_soft:
        raise HTTPException(
            status_code=400,
            detail=f"soft timeout {policy.soft_s} exceeds server maximum {max_soft}",
        )
    if policy.term_s > max_soft + TERM_MARGIN_S or policy.kill_s > max_soft + KILL_MARGIN_S:
        raise HTTPException(
            status_code=400,
            detail=(
                f"term/kill deadlines may exceed the soft-timeout cap by at most "
                f"{TERM_MARGIN_S}/{KILL_MARGIN_S} seconds"
            ),
        )
    return policy


def resolve_problem_text(
    source: InlineSource | UploadSource | DatabaseSource,
    cops_client: CopsClient,
    max_upload_bytes: int,
) -> tuple[str, ProblemSource]:
    if isinstance(source, DatabaseSource):
        if source.number < 1:
            raise HTTPException(status_code=400, detail="problem number must be >= 1")
        try:
            text = cops_client.fetch(source.number)
        except CopsFetchError as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        return text, ProblemSource(kind="database", number=source.number)
    if len(source.text.encode("utf-8")) > max_upload_bytes:
        raise HTTPException(
            status_code=400,
            detail=f"problem text exceeds the {max_upload_bytes} byte limit",
        )
    if isinstance(source, UploadSource):
        return source.text, ProblemSource(kind="upload", filename=source.filename)
    return source.text, ProblemSource(kind="inline")


def problem_for_text(text: str) -> Problem:
    # Parsing is advisory; tools always receive the submitted bytes, so
    # unparseable input still executes.
    try:
        return parse_problem(text)
    except ParseError:
        return Problem.from_raw(text)


def create_app(settings: Settings) -> FastAPI:
    registry = _RegistryHolder(scan_registry(settings.config_root))
    store = JobStore(capacity=settings.job_capacity, ttl_s=settings.job_ttl_s)
    runner = ToolRunner(
        bin_root=settings.bin_root,
        scratch_dir=settings.scratch_dir,
        max_output_bytes=settings.max_output_bytes,
    )
    worker = ExecutionWorker(store, runner)
    cops_client = CopsClient(settings.cops_base_url, settings.cops_path_template)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        worker.start()
        try:
            yield
        finally:
            worker.stop()

    app = FastAPI(title="confbench", lifespan=lifespan)
    app.state.registry = registry
    app.state.store = store
    app.state.worker = worker

    @app.exception_handler(RequestValidationError)
    async def malformed_request(_: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/api/registry")
    def get_registry() -> dict:
        return registry.get().tree.to_dict()

    @app.post("/api/jobs")
    def submit_job(request: JobRequest) -> dict:
        if not request.tool_ids:
            raise HTTPException(status_code=400, detail="no tools selected")
        tree: RegistryTree = registry.get().tree
        try:
            specs = resolve_tools(request.tool_ids, tree)
        except UnknownToolError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        text, source = resolve_problem_text(
            request.problem_source, cops_client, settings.max_upload_bytes
        )
        policy = build_policy(request.timeout_policy, settings.max_soft_timeout)
        category = infer_category(text)
        warnings = [w.message for w in validate_selection(category, specs)]
        job = Job(
            id=secrets.token_urlsafe(16),
            source=source,
            problem=problem_for_text(text),
            category=category,
            warnings=warnings,
            specs=specs,
            policy=policy,
            created_at=time.time(),
        )
        store.create(job)
        worker.submit(job)
        return {"id": job.id, "category": category.value, "warnings": warnings}

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str) -> dict:
        view = store.view(job_id)
        if view is None:
            raise HTTPException(status_code=404, detail="unknown job id")
        return view

    @app.post("/api/registry/reload")
    def reload_registry(x_reload_secret: str | None = Header(default=None)) -> dict:
        if not settings.reload_secret or x_reload_secret != settings.reload_secret:
            raise HTTPException(status_code=401, detail="reload not authorized")
        try:
            scan = scan_registry(settings.config_root)
        except RegistryError as exc:
            # Old tree stays in service.
            raise HTTPException(status_code=500, detail=str(exc))
        registry.replace(scan)
        return {"tools": scan.tree.tool_count(), "warnings": list(scan.warnings)}

    if settings.static_dir is not None and settings.static_dir.is_dir():
        app.mount(
            "/", StaticFiles(directory=settings.static_dir, html=True), name="webui"
        )

    return app
