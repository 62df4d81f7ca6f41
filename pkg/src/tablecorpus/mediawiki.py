"""MediaWiki API client: title listing with continuation, page fetches,
shared rate limiting, and exponential backoff with jitter.

The title listing is memory-bounded even for multi-million-page wikis:
batches are spilled to sorted run files and merged, so the stream always
comes out in ascending page_id order without holding the whole listing.
"""

from __future__ import annotations

import heapq
import json
import logging
import random
import tempfile
import threading
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Iterator

import requests

from tablecorpus.config import SourceConfig
from tablecorpus.errors import (
    ApiResponseError,
    FetchFailed,
    ListingInterrupted,
    PageMissing,
)
from tablecorpus.models import SOURCE_API, PageRef, RawPage

log = logging.getLogger(__name__)

LIST_BATCH = 500  # aplimit per listing request
_SORT_RUN_SIZE = 100_000  # refs held in memory before spilling a run


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


class RateLimiter:
    """Process-wide pacing shared by all in-flight requests of a client.

    Guarantees at most ``max_concurrent`` requests in flight and at least
    ``min_interval`` seconds between request starts.
    """

    def __init__(
        self,
        max_concurrent: int,
        min_interval: float,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self._semaphore = threading.BoundedSemaphore(max_concurrent)
        self._interval = min_interval
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_start = 0.0

    def __enter__(self):
        self._semaphore.acquire()
        with self._lock:
            now = self._clock()
            start_at = max(now, self._next_start)
            self._next_start = start_at + self._interval
        delay = start_at - now
        if delay > 0:
            self._sleep(delay)
        return self

    def __exit__(self, *exc):
        self._semaphore.release()
        return False


class MediaWikiClient:
    """Thin client over the standard MediaWiki action API."""

    def __init__(
        self,
        cfg: SourceConfig,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
        timeout: float = 60.0,
    ):
        if not cfg.api_base_url:
            raise ValueError("SourceConfig.api_base_url required for API access")
        self.cfg = cfg
        self.session = session or requests.Session()
        self.session.headers["User-Agent"] = cfg.user_agent
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._timeout = timeout
        self.limiter = RateLimiter(
            cfg.max_concurrent_requests, cfg.min_request_interval / 1000.0,
            sleep=sleep,
        )
        self.backoff_delays: list[float] = []  # observed delays, for tests

    # -- low level --------------------------------------------------------

    def _request(self, params: dict) -> dict:
        """GET with retries; raises the last error after max_retries."""
        query = {"format": "json", "formatversion": "2", **params}
        last_exc: Exception | None = None
        for attempt in range(self.cfg.max_retries + 1):
            if attempt > 0:
                delay = (self.cfg.backoff_base / 1000.0) * (2 ** (attempt - 1))
                delay *= self._rng.uniform(0.8, 1.2)
                self.backoff_delays.append(delay)
                self._sleep(delay)
            try:
                with self.limiter:
                    resp = self.session.get(
                        self.cfg.api_base_url, params=query, timeout=self._timeout
                    )
                if resp.status_code >= 500:
                    last_exc = FetchFailed(f"HTTP {resp.status_code} from API")
                    continue
                resp.raise_for_status()
                try:
                    return resp.json()
                except json.JSONDecodeError as exc:
                    raise ApiResponseError(
                        f"malformed API response: {exc}; payload starts: "
                        f"{resp.text[:200]!r}"
                    ) from exc
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_exc = exc
                continue
            except requests.HTTPError as exc:
                raise FetchFailed(f"HTTP error from API: {exc}") from exc
        raise FetchFailed(
            f"request failed after {self.cfg.max_retries + 1} attempts: {last_exc}"
        ) from last_exc

    # -- listing ----------------------------------------------------------

    def _list_batches(self, resume_token: str | None) -> Iterator[list[PageRef]]:
        token = resume_token
        while True:
            params = {
                "action": "query",
                "list": "allpages",
                "apnamespace": "0",
                "apfilterredir": "nonredirects",
                "aplimit": str(LIST_BATCH),
            }
            if token:
                params["apcontinue"] = token
            try:
                data = self._request(params)
            except FetchFailed as exc:
                raise ListingInterrupted(str(exc), token) from exc
            try:
                pages = data["query"]["allpages"]
                batch = [
                    PageRef(p["pageid"], p["title"], p.get("ns", 0)) for p in pages
                ]
            except (KeyError, TypeError) as exc:
                raise ApiResponseError(
                    f"unexpected allpages payload: {json.dumps(data)[:200]}"
                ) from exc
            yield batch
            cont = data.get("continue", {})
            token = cont.get("apcontinue")
            if not token:
                return

    def list_page_titles(self, resume_token: str | None = None) -> Iterator[PageRef]:
        """Every content-namespace page exactly once, ascending page_id.

        The API serves titles in title order; refs are spilled to sorted
        run files and merged so memory stays constant regardless of wiki
        size. On persistent failure raises ListingInterrupted carrying
        the last continuation token.
        """

        def flat() -> Iterator[PageRef]:
            for batch in self._list_batches(resume_token):
                yield from batch

        total = 0
        for ref in _merge_sorted_by_page_id(flat()):
            total += 1
            yield ref
        log.info("title listing complete: %d pages", total)

    # -- page fetch ---------------------------------------------------------

    def fetch_page(self, ref: PageRef) -> RawPage:
        """Rendered HTML of the page's current revision."""
        data = self._request(
            {"action": "parse", "pageid": str(ref.page_id), "prop": "text"}
        )
        if "error" in data:
            code = data["error"].get("code", "")
            if code in ("nosuchpageid", "missingtitle", "pagecannotexist"):
                raise PageMissing(ref.page_id, ref.title)
            raise ApiResponseError(f"API error for page {ref.page_id}: {data['error']}")
        try:
            text = data["parse"]["text"]
            if isinstance(text, dict):  # formatversion=1 fallback
                text = text.get("*", "")
        except (KeyError, TypeError) as exc:
            raise ApiResponseError(
                f"unexpected parse payload for page {ref.page_id}: "
                f"{json.dumps(data)[:200]}"
            ) from exc
        return RawPage(ref=ref, html=text, fetched_at=utc_now_iso(), source=SOURCE_API)


def _merge_sorted_by_page_id(
    refs: Iterable[PageRef], run_size: int = _SORT_RUN_SIZE
) -> Iterator[PageRef]:
    """External sort by page_id with duplicate suppression."""
    buf: list[PageRef] = []
    run_paths: list[Path] = []
    tmpdir: tempfile.TemporaryDirectory | None = None

    def spill():
        nonlocal tmpdir
        if tmpdir is None:
            tmpdir = tempfile.TemporaryDirectory(prefix="tablecorpus-listing-")
        buf.sort(key=lambda r: r.page_id)
        path = Path(tmpdir.name) / f"run{len(run_paths):05d}.tsv"
        with open(path, "w", encoding="utf-8") as fh:
            for r in buf:
                fh.write(f"{r.page_id}\t{r.namespace}\t{r.title}\n")
        run_paths.append(path)
        buf.clear()

    for ref in refs:
        buf.append(ref)
        if len(buf) >= run_size:
            spill()

    last_id = None
    if not run_paths:
        buf.sort(key=lambda r: r.page_id)
        for ref in buf:
            if ref.page_id != last_id:
                last_id = ref.page_id
                yield ref
        return

    if buf:
        spill()

    def read_run(path: Path) -> Iterator[tuple[int, int, str]]:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                page_id, ns, title = line.rstrip("\n").split("\t", 2)
                yield (int(page_id), int(ns), title)

    try:
        for page_id, ns, title in heapq.merge(
            *(read_run(p) for p in run_paths), key=lambda t: t[0]
        ):
            if page_id != last_id:
                last_id = page_id
                yield PageRef(page_id, title, ns)
    finally:
        if tmpdir is not None:
            tmpdir.cleanup()
