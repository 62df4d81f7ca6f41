"""HTTP service wrapping the toolkit for the web UI and remote control.

Thin adapter: every behavior lives in the underlying modules; endpoints
only map JSON to calls and errors to status codes. Single tenant, no
auth, binds loopback by default. Error bodies always carry a machine
code plus a human message: {"code": ..., "message": ...}.
"""

from __future__ import annotations

import json
import logging
import os
import socket
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from tablecorpus import __version__, stats as stats_mod
from tablecorpus.config import JobConfig, job_from_dict, job_to_dict
from tablecorpus.controller import (
    PHASE_CRAWLING,
    PHASE_FINISHED,
    PHASE_LISTING,
    PHASE_PAUSED,
    JobHandle,
    JobState,
)
from tablecorpus.errors import (
    ConfigError,
    CorpusError,
    SnapshotMismatch,
    ToolkitError,
    ValidationError,
)
from tablecorpus.models import TableId
from tablecorpus.store import CorpusStore

log = logging.getLogger(__name__)

UI_DIR_ENV = "TABLECORPUS_UI_DIR"
BIND_ENV = "TABLECORPUS_BIND"
STATE_DIR_ENV = "TABLECORPUS_STATE_DIR"


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"code": code, "message": message}, status_code=status)


class JobRegistry:
    """In-memory job table persisted to state_dir/jobs.json.

    After a restart, handles are gone but configs survive; a job that was
    running is reported paused (the checkpoint makes that true in effect)
    and can be resumed, which rebuilds its handle.
    """

    def __init__(self, state_dir: Path):
        self.state_dir = state_dir
        self.path = state_dir / "jobs.json"
        self._lock = threading.Lock()
        self._configs: dict[str, JobConfig] = {}
        self._phases: dict[str, str] = {}
        self._handles: dict[str, JobHandle] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        try:
            raw = json.loads(self.path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorpusError(f"corrupted state dir: cannot read {self.path}: {exc}")
        for job_id, entry in raw.items():
            self._configs[job_id] = job_from_dict(entry["config"])
            phase = entry.get("phase", PHASE_PAUSED)
            if phase in (PHASE_CRAWLING, PHASE_LISTING):
                phase = PHASE_PAUSED
            self._phases[job_id] = phase

    def _persist(self) -> None:
        self.state_dir.mkdir(parents=True, exist_ok=True)
        data = {
            job_id: {"config": job_to_dict(cfg), "phase": self.phase(job_id)}
            for job_id, cfg in self._configs.items()
        }
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        os.replace(tmp, self.path)

    def phase(self, job_id: str) -> str:
        handle = self._handles.get(job_id)
        if handle is not None:
            return handle.state().phase
        return self._phases.get(job_id, PHASE_PAUSED)

    def state(self, job_id: str) -> JobState:
        handle = self._handles.get(job_id)
        if handle is not None:
            return handle.state()
        # restored job without a live handle
        return JobState(
            phase=self.phase(job_id), pages_total=None, pages_done=0,
            avg_page_seconds=None, started_at="", updated_at="",
        )

    def create(self, cfg: JobConfig) -> str:
        with self._lock:
            for job_id, other in self._configs.items():
                if str(Path(other.corpus_root)) == str(Path(cfg.corpus_root)):
                    if self.phase(job_id) != PHASE_FINISHED:
                        raise JobConflict(job_id)
            job_id = uuid.uuid4().hex[:12]
            handle = JobHandle(cfg).start()
            self._configs[job_id] = cfg
            self._handles[job_id] = handle
            self._phases[job_id] = handle.state().phase
            self._persist()
            return job_id

    def get(self, job_id: str) -> JobConfig | None:
        return self._configs.get(job_id)

    def handle(self, job_id: str) -> JobHandle | None:
        return self._handles.get(job_id)

    def attach_handle(self, job_id: str) -> JobHandle:
        with self._lock:
            handle = self._handles.get(job_id)
            if handle is None:
                handle = JobHandle(self._configs[job_id])
                self._handles[job_id] = handle
            return handle

    def checkpoint_phase(self, job_id: str) -> None:
        with self._lock:
            self._phases[job_id] = self.phase(job_id)
            self._persist()

    def job_ids(self) -> list[str]:
        return sorted(self._configs)

    def sole_corpus_root(self) -> str | None:
        roots = {str(cfg.corpus_root) for cfg in self._configs.values()}
        if len(roots) == 1:
            return roots.pop()
        return None


class JobConflict(Exception):
    def __init__(self, job_id: str):
        super().__init__(f"corpus already has active job {job_id}")
        self.job_id = job_id


def create_app(state_dir: str | Path) -> FastAPI:
    state_dir = Path(state_dir)
    registry = JobRegistry(state_dir)
    app = FastAPI(title="tablecorpus", version=__version__)
    app.state.registry = registry

    def job_resource(job_id: str) -> dict:
        cfg = registry.get(job_id)
        return {
            "job_id": job_id,
            "config": job_to_dict(cfg),
            "state": registry.state(job_id).to_json_dict(),
        }

    def resolve_root(root: str | None):
        root = root or registry.sole_corpus_root()
        if root is None:
            return None, _error(
                400, "corpus_root_required",
                "pass ?root=... (several corpora are known to this service)",
            )
        for job_id, cfg in registry._configs.items():
            if str(Path(cfg.corpus_root)) == str(Path(root)):
                if registry.phase(job_id) in (PHASE_CRAWLING, PHASE_LISTING):
                    return None, _error(
                        409, "corpus_busy",
                        f"corpus {root} has an active job; pause it first",
                    )
        return root, None

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/jobs", status_code=201)
    async def create_job(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "bad_json", "request body must be a JSON object")
        try:
            cfg = job_from_dict(body)
        except ConfigError as exc:
            return _error(400, "invalid_config", str(exc))
        try:
            job_id = registry.create(cfg)
        except JobConflict as exc:
            return _error(409, "job_conflict", str(exc))
        except (SnapshotMismatch, CorpusError, ConfigError) as exc:
            return _error(409, "corpus_mismatch", str(exc))
        return job_resource(job_id)

    @app.get("/jobs")
    def list_jobs():
        return {"jobs": [job_resource(job_id) for job_id in registry.job_ids()]}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        if registry.get(job_id) is None:
            return _error(404, "job_not_found", f"no job {job_id}")
        return job_resource(job_id)

    @app.get("/jobs/{job_id}/progress")
    def job_progress(job_id: str):
        if registry.get(job_id) is None:
            return _error(404, "job_not_found", f"no job {job_id}")
        return registry.state(job_id).to_json_dict()

    @app.post("/jobs/{job_id}/pause")
    def pause_job(job_id: str):
        handle = registry.handle(job_id)
        if handle is None and registry.get(job_id) is None:
            return _error(404, "job_not_found", f"no job {job_id}")
        if handle is not None:
            handle.pause()
        registry.checkpoint_phase(job_id)
        return job_resource(job_id)

    @app.post("/jobs/{job_id}/resume")
    def resume_job(job_id: str):
        if registry.get(job_id) is None:
            return _error(404, "job_not_found", f"no job {job_id}")
        try:
            handle = registry.attach_handle(job_id)
            handle.resume()
        except (SnapshotMismatch, CorpusError, ConfigError) as exc:
            return _error(409, "corpus_mismatch", str(exc))
        registry.checkpoint_phase(job_id)
        return job_resource(job_id)

    @app.get("/corpus/stats")
    def corpus_stats(root: str | None = None):
        root, err = resolve_root(root)
        if err:
            return err
        try:
            stats = stats_mod.compute_stats(root)
        except CorpusError as exc:
            return _error(404, "corpus_not_found", str(exc))
        return stats.to_json_dict()

    @app.get("/corpus/search")
    def corpus_search(
        root: str | None = None,
        title_substring: str | None = None,
        caption_substring: str | None = None,
        min_rows: int | None = None,
        max_rows: int | None = None,
        min_cols: int | None = None,
        max_cols: int | None = None,
        has_numeric_column: bool | None = None,
        limit: int = 50,
        offset: int = 0,
    ):
        root, err = resolve_root(root)
        if err:
            return err
        q = stats_mod.QuerySpec(
            title_substring=title_substring,
            caption_substring=caption_substring,
            min_rows=min_rows, max_rows=max_rows,
            min_cols=min_cols, max_cols=max_cols,
            has_numeric_column=has_numeric_column,
            limit=limit, offset=offset,
        )
        try:
            result = stats_mod.search(root, q)
        except ValidationError as exc:
            return _error(400, "invalid_query", str(exc))
        except CorpusError as exc:
            return _error(404, "corpus_not_found", str(exc))
        return {
            "items": [m.to_json_dict() for m in result.items],
            "total_matches": result.total_matches,
            "limit": result.limit,
            "offset": result.offset,
        }

    @app.get("/corpus/tables/{page_id}/{offset}")
    def corpus_table(page_id: int, offset: int, root: str | None = None):
        root, err = resolve_root(root)
        if err:
            return err
        try:
            texts, meta = CorpusStore(root).read_table(TableId(page_id, offset))
        except (CorpusError, ValueError) as exc:
            return _error(404, "table_not_found", str(exc))
        return {"metadata": meta.to_json_dict(), "grid": texts}

    @app.get("/corpus/tables/{page_id}/{offset}/csv")
    def corpus_table_csv(page_id: int, offset: int, root: str | None = None):
        root, err = resolve_root(root)
        if err:
            return err
        try:
            csv_path, _ = CorpusStore(root).table_paths(TableId(page_id, offset))
        except ValueError as exc:
            return _error(404, "table_not_found", str(exc))
        if not csv_path.exists():
            return _error(404, "table_not_found", f"no table {page_id}_{offset}")
        return FileResponse(csv_path, media_type="text/csv", filename=csv_path.name)

    @app.exception_handler(ToolkitError)
    def toolkit_error(_request, exc: ToolkitError):
        return _error(500, "internal_error", str(exc))

    ui_dir = os.environ.get(UI_DIR_ENV) or (Path.cwd() / "frontend" / "dist")
    if Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(bind_address: str, state_dir: str | Path) -> None:
    """Run the service until interrupted; fails fast when the port is taken."""
    import uvicorn

    host, _, port_text = bind_address.partition(":")
    host = host or "127.0.0.1"
    port = int(port_text or "8734")
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise ConfigError(f"cannot bind {host}:{port}: {exc}") from exc
    finally:
        probe.close()
    app = create_app(state_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
