"""Job orchestration: listing, chunked crawling, pause/resume, progress.

A job runs in a background thread feeding a bounded worker pool. The
checkpoint log is the single source of truth for completed pages, which
makes pause durable: pausing simply drains in-flight pages and stops;
resuming (or rerunning after a crash) re-plans from the checkpoint and
continues. Pages are processed fetch -> extract -> filter -> store,
with the page's checkpoint record appended only after every table file
of that page is durable.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterator

from tablecorpus import __version__, dumps
from tablecorpus.config import FilterConfig, JobConfig
from tablecorpus.errors import (
    ConfigError,
    CorpusError,
    PageMissing,
    PageParseError,
    SnapshotMismatch,
    ToolkitError,
)
from tablecorpus.extract import extract_tables
from tablecorpus.filters import apply_filters
from tablecorpus.mediawiki import MediaWikiClient, utc_now_iso
from tablecorpus.models import PageRef, RawPage, TableMetadata
from tablecorpus.store import (
    STATUS_DONE,
    STATUS_MISSING,
    STATUS_PARSE_ERROR,
    CorpusStore,
)

log = logging.getLogger(__name__)

EMA_ALPHA = 0.05

PHASE_LISTING = "listing"
PHASE_CRAWLING = "crawling"
PHASE_PAUSED = "paused"
PHASE_FINISHED = "finished"
PHASE_FAILED = "failed"

Hook = Callable[..., None]


@dataclass(frozen=True)
class JobState:
    phase: str
    pages_total: int | None
    pages_done: int
    avg_page_seconds: float | None
    started_at: str
    updated_at: str
    error: str | None = None

    @property
    def pages_left(self) -> int | None:
        if self.pages_total is None:
            return None
        return self.pages_total - self.pages_done

    @property
    def eta_seconds(self) -> float | None:
        if self.pages_left is None or self.avg_page_seconds is None:
            return None
        return self.pages_left * self.avg_page_seconds

    def to_json_dict(self) -> dict:
        data = asdict(self)
        data["pages_left"] = self.pages_left
        data["eta_seconds"] = self.eta_seconds
        return data


def plan_chunks(refs: list[PageRef], chunk_count: int, chunk_index: int) -> list[PageRef]:
    """Contiguous near-equal slice: sizes differ by at most one, the
    slices are pairwise disjoint, and their union is the whole list."""
    if chunk_count < 1 or not 0 <= chunk_index < chunk_count:
        raise ConfigError(
            f"chunk_index {chunk_index} out of range for chunk_count {chunk_count}"
        )
    n = len(refs)
    base, extra = divmod(n, chunk_count)
    start = chunk_index * base + min(chunk_index, extra)
    size = base + (1 if chunk_index < extra else 0)
    return refs[start : start + size]


def filters_key(filters: FilterConfig) -> str:
    blob = json.dumps(asdict(filters), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def build_manifest(cfg: JobConfig) -> dict:
    return {
        "format_version": 1,
        "toolkit_version": __version__,
        "snapshot_date": cfg.snapshot_date,
        "filters": asdict(cfg.filters),
        "chunk_count": cfg.chunk_count,
        "source_kind": "dump" if cfg.source.dump_path else "api",
        "created_at": utc_now_iso(),
    }


def check_manifest_matches(manifest: dict, cfg: JobConfig) -> None:
    problems = []
    if manifest.get("snapshot_date") != cfg.snapshot_date:
        problems.append(
            f"snapshot_date {manifest.get('snapshot_date')!r} != {cfg.snapshot_date!r}"
        )
    if manifest.get("filters") != asdict(cfg.filters):
        problems.append("filter configuration differs")
    if manifest.get("chunk_count") != cfg.chunk_count:
        problems.append(
            f"chunk_count {manifest.get('chunk_count')} != {cfg.chunk_count}"
        )
    if problems:
        raise SnapshotMismatch(
            "existing corpus does not match this job config: " + "; ".join(problems)
        )


class JobHandle:
    """Control surface for one running (or resumable) job."""

    def __init__(self, cfg: JobConfig, hooks: Hook | None = None,
                 clock: Callable[[], float] = time.monotonic):
        cfg.validate()
        self.cfg = cfg
        self._hooks = hooks or (lambda event, **data: None)
        self._clock = clock
        self._lock = threading.Lock()
        self._pause_requested = threading.Event()
        self._thread: threading.Thread | None = None
        self._phase = PHASE_LISTING
        self._pages_total: int | None = None
        self._pages_done = 0
        self._ema: float | None = None
        self._last_completion: float | None = None
        self._started_at = utc_now_iso()
        self._updated_at = self._started_at
        self._error: str | None = None
        self._crawl_start: float | None = None

    # -- public API -------------------------------------------------------

    def start(self) -> "JobHandle":
        preflight(self.cfg)
        self._pause_requested.clear()
        with self._lock:
            self._phase = PHASE_LISTING
            self._error = None
        self._thread = threading.Thread(target=self._run, name="crawl-job", daemon=True)
        self._thread.start()
        return self

    def state(self) -> JobState:
        with self._lock:
            return JobState(
                phase=self._phase,
                pages_total=self._pages_total,
                pages_done=self._pages_done,
                avg_page_seconds=self._ema,
                started_at=self._started_at,
                updated_at=self._updated_at,
                error=self._error,
            )

    def pause(self) -> JobState:
        """Stop issuing new pages, drain in-flight work, phase=paused.

        No-op on finished/failed jobs. Pause is durable: the checkpoint
        already holds every drained page, so a process restart stays
        paused until resumed.
        """
        thread = self._thread
        if thread is None or not thread.is_alive():
            return self.state()
        self._pause_requested.set()
        thread.join()
        return self.state()

    def resume(self) -> JobState:
        """Continue from the checkpoint; on a fresh job behaves like start.

        Resuming a failed job retries it (the checkpoint state is intact);
        resuming a finished job is a no-op.
        """
        if self._thread is not None and self._thread.is_alive():
            return self.state()
        if self.state().phase == PHASE_FINISHED:
            return self.state()
        self.start()
        return self.state()

    def join(self, timeout: float | None = None) -> JobState:
        if self._thread is not None:
            self._thread.join(timeout)
        return self.state()

    def is_active(self) -> bool:
        return self._thread is not None and self._thread.is_alive()

    # -- internals ----------------------------------------------------------

    def _set(self, **fields) -> None:
        with self._lock:
            for name, value in fields.items():
                setattr(self, f"_{name}", value)
            self._updated_at = utc_now_iso()

    def _record_completion(self) -> None:
        now = self._clock()
        with self._lock:
            self._pages_done += 1
            if self._last_completion is not None:
                sample = now - self._last_completion
                if self._ema is None:
                    self._ema = sample
                else:
                    self._ema = EMA_ALPHA * sample + (1 - EMA_ALPHA) * self._ema
            elif self._crawl_start is not None:
                self._ema = now - self._crawl_start
            self._last_completion = now
            self._updated_at = utc_now_iso()

    def _run(self) -> None:
        store = CorpusStore(self.cfg.corpus_root)
        try:
            todo, total = self._prepare(store)
            self._set(pages_total=total, pages_done=total - len(todo))
            self._crawl(store, todo)
        except ToolkitError as exc:
            log.error("job failed: %s", exc)
            self._set(phase=PHASE_FAILED, error=str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            log.exception("job crashed")
            self._set(phase=PHASE_FAILED, error=f"internal error: {exc}")
        finally:
            store.close()

    def _prepare(self, store: CorpusStore) -> tuple[list[PageRef], int]:
        cfg = self.cfg
        if store.exists():
            check_manifest_matches(store.read_manifest(), cfg)
        else:
            store.write_manifest(build_manifest(cfg))
        for snapshot, chunk_count, _index, fkey in store.checkpoint_headers():
            if snapshot != cfg.snapshot_date:
                raise SnapshotMismatch(
                    f"checkpoint belongs to snapshot {snapshot!r}, "
                    f"job wants {cfg.snapshot_date!r}"
                )
            if chunk_count != cfg.chunk_count or fkey != filters_key(cfg.filters):
                raise SnapshotMismatch(
                    "checkpoint was written with different chunking or filters"
                )

        if store.titles_path.exists():
            refs = store.read_titles()
        else:
            self._set(phase=PHASE_LISTING)
            self._hooks("listing_started")
            if cfg.source.dump_path:
                refs = sorted(dumps.list_refs(cfg.source.dump_path),
                              key=lambda r: r.page_id)
            else:
                refs = list(self._client().list_page_titles())
            store.write_titles(refs)
            self._hooks("listing_done", count=len(refs))

        chunk = plan_chunks(refs, cfg.chunk_count, cfg.chunk_index)
        completed = set(store.load_checkpoint(expect_snapshot=cfg.snapshot_date))
        todo = [r for r in chunk if r.page_id not in completed]
        store.cleanup_temp_files()
        store.append_header(
            cfg.snapshot_date, cfg.chunk_count, cfg.chunk_index,
            filters_key(cfg.filters),
        )
        return todo, len(chunk)

    def _client(self) -> MediaWikiClient:
        return MediaWikiClient(self.cfg.source)

    def _work_items(self, todo: list[PageRef]) -> Iterator[PageRef | RawPage]:
        if self.cfg.source.dump_path:
            wanted = {r.page_id for r in todo}
            for page in dumps.read_dump(self.cfg.source):
                if page.ref.page_id in wanted:
                    yield page
        else:
            yield from todo

    def _crawl(self, store: CorpusStore, todo: list[PageRef]) -> None:
        cfg = self.cfg
        self._set(phase=PHASE_CRAWLING)
        self._crawl_start = self._clock()
        client = None if cfg.source.dump_path else self._client()
        failure: list[Exception] = []

        def process(item: PageRef | RawPage) -> None:
            if isinstance(item, RawPage):
                ref, page = item.ref, item
                self._hooks("page_start", page_id=ref.page_id)
            else:
                ref = item
                self._hooks("page_start", page_id=ref.page_id)
                try:
                    page = client.fetch_page(ref)
                except PageMissing:
                    store.checkpoint_page(ref.page_id, 0, STATUS_MISSING)
                    self._record_completion()
                    self._hooks("page_done", page_id=ref.page_id, status=STATUS_MISSING)
                    return
            self._hooks("page_fetched", page_id=ref.page_id)
            try:
                tables = extract_tables(page, page_url=cfg.source.page_url(ref.title))
            except PageParseError as exc:
                log.warning("page %s: %s", ref.page_id, exc)
                store.checkpoint_page(ref.page_id, 0, STATUS_PARSE_ERROR)
                self._record_completion()
                self._hooks("page_done", page_id=ref.page_id, status=STATUS_PARSE_ERROR)
                return
            written = 0
            for table in tables:
                kept = apply_filters(table, cfg.filters)
                if kept is None:
                    continue
                meta = TableMetadata.for_table(kept, utc_now_iso(), cfg.snapshot_date)
                store.write_table(kept, meta, overwrite=True)
                written += 1
                self._hooks("table_written", table_id=str(kept.table_id))
            self._hooks("tables_written", page_id=ref.page_id, count=written)
            store.checkpoint_page(ref.page_id, written, STATUS_DONE)
            self._record_completion()
            self._hooks("page_done", page_id=ref.page_id, status=STATUS_DONE)

        pending: set = set()

        def harvest(block: bool) -> None:
            nonlocal pending
            if not pending:
                return
            done, pending = wait(
                pending, timeout=None if block else 0,
                return_when=FIRST_COMPLETED,
            )
            for fut in done:
                exc = fut.exception()
                if exc is not None:
                    failure.append(exc)

        paused = False
        with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
            for item in self._work_items(todo):
                if self._pause_requested.is_set():
                    paused = True
                    break
                if failure:
                    break
                while len(pending) >= cfg.worker_count and not failure:
                    harvest(block=True)
                harvest(block=False)
                pending.add(pool.submit(process, item))
            while pending:  # drain in-flight pages to checkpoint
                harvest(block=True)

        if failure:
            raise failure[0] if isinstance(failure[0], ToolkitError) else ToolkitError(
                f"worker failed: {failure[0]}"
            )
        if paused or self._pause_requested.is_set():
            self._set(phase=PHASE_PAUSED)
            self._hooks("paused")
        else:
            self._set(phase=PHASE_FINISHED)
            self._hooks("finished")


def preflight(cfg: JobConfig) -> None:
    """Cheap synchronous checks so callers get refusals before any write."""
    cfg.validate()
    root = Path(cfg.corpus_root)
    store = CorpusStore(root)
    if store.exists():
        check_manifest_matches(store.read_manifest(), cfg)
    elif store.checkpoint_path.exists():
        raise CorpusError(
            f"{root} has a checkpoint log but no manifest; refusing to touch it"
        )
    parent = root if root.exists() else root.parent
    if parent.exists() and not os.access(parent, os.W_OK):
        raise ConfigError(f"corpus_root {root} is not writable")


def run_job(cfg: JobConfig, hooks: Hook | None = None,
            clock: Callable[[], float] = time.monotonic) -> JobHandle:
    """Start a corpus-construction job; returns its control handle."""
    return JobHandle(cfg, hooks=hooks, clock=clock).start()


def refilter(
    src_root: str | Path, dest_root: str | Path, filters: FilterConfig
) -> dict:
    """Derive a filtered corpus from a stored one, offline.

    Keeps ids, titles, and checkpoint statuses; tables dropped by the new
    filters simply do not appear in the derived corpus.
    """
    filters.validate()
    src = CorpusStore(src_root)
    dest = CorpusStore(dest_root)
    manifest = src.read_manifest()
    if dest.exists():
        raise CorpusError(f"destination {dest_root} already exists")
    out_manifest = dict(manifest)
    out_manifest["filters"] = asdict(filters)
    out_manifest["derived_from"] = str(src_root)
    out_manifest["created_at"] = utc_now_iso()
    dest.write_manifest(out_manifest)
    dest.write_titles(src.read_titles())

    kept_per_page: dict[int, int] = {}
    seen = dropped = 0
    for table_id in src.iter_table_ids():
        seen += 1
        table = src.reconstruct_table(table_id)
        kept = apply_filters(table, filters)
        if kept is None:
            dropped += 1
            continue
        _, meta = src.read_table(table_id)
        new_meta = TableMetadata.for_table(kept, utc_now_iso(), meta.snapshot_date)
        dest.write_table(kept, new_meta)
        kept_per_page[table_id.page_id] = kept_per_page.get(table_id.page_id, 0) + 1

    snapshot = manifest.get("snapshot_date", "")
    dest.append_header(snapshot, 1, 0, filters_key(filters))
    for page_id, record in sorted(src.load_checkpoint().items()):
        count = kept_per_page.get(page_id, 0) if record.status == STATUS_DONE else 0
        dest.checkpoint_page(page_id, count, record.status)
    dest.close()
    return {"tables_seen": seen, "tables_kept": seen - dropped, "tables_dropped": dropped}
