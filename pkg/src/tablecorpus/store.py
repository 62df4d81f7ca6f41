"""On-disk corpus layout and the crash-safe checkpoint log.

Layout (stable contract):

    corpus_root/
      manifest.json                     corpus-level manifest
      titles.tsv                        page_id <tab> title, ascending page_id
      checkpoint.log                    append-only page-completion log
      tables/<NNN>/<page_id>_<offset>.csv    RFC 4180, UTF-8, no BOM
      tables/<NNN>/<page_id>_<offset>.json   sidecar metadata
      reports/                          statistics output (stats module)

NNN is page_id mod 1000, zero padded, keeping directories small at
million-table scale. Table files are committed by write-temp-then-rename
with the JSON sidecar renamed last; the checkpoint record for a page is
appended and fsynced only after all of its table files are durable, so
a resume never trusts a half-written page.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import threading
import zlib
from dataclasses import dataclass
from pathlib import Path

from tablecorpus.errors import (
    CheckpointCorrupt,
    CorpusError,
    DuplicateTableError,
    SnapshotMismatch,
)
from tablecorpus.models import Cell, CellGrid, ExtractedTable, PageRef, TableId, TableMetadata

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
TITLES_NAME = "titles.tsv"
CHECKPOINT_NAME = "checkpoint.log"
TABLES_DIR = "tables"
REPORTS_DIR = "reports"

STATUS_DONE = "done"
STATUS_MISSING = "missing"
STATUS_PARSE_ERROR = "parse_error"
_STATUSES = (STATUS_DONE, STATUS_MISSING, STATUS_PARSE_ERROR)


@dataclass(frozen=True)
class CheckpointRecord:
    page_id: int
    table_count: int
    status: str


def _crc(payload: str) -> str:
    return f"{zlib.crc32(payload.encode('utf-8')) & 0xFFFFFFFF:08x}"


def grid_to_csv_bytes(texts: list[list[str]]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    for row in texts:
        if len(row) == 1 and row[0] == "":
            # a lone empty field would serialize to a blank line, which
            # csv.reader cannot round-trip; quote it explicitly
            buf.write('""\r\n')
        else:
            writer.writerow(row)
    return buf.getvalue().encode("utf-8")


def csv_bytes_to_grid(data: bytes) -> list[list[str]]:
    reader = csv.reader(io.StringIO(data.decode("utf-8"), newline=""))
    return [row for row in reader]


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


class CorpusStore:
    """Reader/writer for one corpus directory.

    write_table may be called concurrently for different pages; the
    checkpoint appender is serialized through a single lock.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._ckpt_lock = threading.Lock()
        self._ckpt_fh: io.BufferedWriter | None = None

    # -- paths ----------------------------------------------------------

    def shard_dir(self, page_id: int) -> Path:
        return self.root / TABLES_DIR / f"{page_id % 1000:03d}"

    def table_paths(self, table_id: TableId) -> tuple[Path, Path]:
        base = self.shard_dir(table_id.page_id) / str(table_id)
        return base.with_suffix(".csv"), base.with_suffix(".json")

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST_NAME

    @property
    def titles_path(self) -> Path:
        return self.root / TITLES_NAME

    @property
    def checkpoint_path(self) -> Path:
        return self.root / CHECKPOINT_NAME

    @property
    def reports_dir(self) -> Path:
        return self.root / REPORTS_DIR

    def exists(self) -> bool:
        return self.manifest_path.exists()

    # -- manifest ---------------------------------------------------------

    def write_manifest(self, manifest: dict) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        self._atomic_write(self.manifest_path, _json_bytes(manifest))

    def read_manifest(self) -> dict:
        try:
            return json.loads(self.manifest_path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise CorpusError(f"no manifest at {self.manifest_path}; not a corpus?")
        except (OSError, json.JSONDecodeError) as exc:
            raise CorpusError(f"unreadable manifest {self.manifest_path}: {exc}")

    # -- title listing ----------------------------------------------------

    def write_titles(self, refs: list[PageRef]) -> None:
        lines = "".join(f"{r.page_id}\t{r.title}\n" for r in refs)
        self._atomic_write(self.titles_path, lines.encode("utf-8"))

    def read_titles(self) -> list[PageRef]:
        try:
            raw = self.titles_path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise CorpusError(f"no title listing at {self.titles_path}")
        refs = []
        for line in raw.splitlines():
            if not line:
                continue
            page_id, _, title = line.partition("\t")
            refs.append(PageRef(int(page_id), title))
        return refs

    def page_count(self) -> int:
        return len(self.read_titles())

    # -- tables ----------------------------------------------------------

    def write_table(
        self, table: ExtractedTable, meta: TableMetadata, overwrite: bool = False
    ) -> tuple[Path, Path]:
        """Atomically persist one table's CSV and JSON sidecar.

        ``overwrite`` is for re-processing a page after a crash or
        re-fetch; a fresh write to an existing id is corpus corruption.
        """
        if meta.n_rows != table.grid.n_rows or meta.n_cols != table.grid.n_cols:
            raise CorpusError(f"metadata dimensions disagree with grid for {meta.table_id}")
        csv_path, json_path = self.table_paths(meta.table_id)
        if not overwrite and (csv_path.exists() or json_path.exists()):
            raise DuplicateTableError(f"table {meta.table_id} already stored")
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        try:
            self._stage_and_commit(csv_path, grid_to_csv_bytes(table.grid.texts()))
            self._stage_and_commit(json_path, _json_bytes(meta.to_json_dict()))
        except OSError:
            for p in (csv_path, json_path):
                tmp = p.with_name(p.name + ".tmp")
                tmp.unlink(missing_ok=True)
            raise
        return csv_path, json_path

    def read_metadata(self, table_id: TableId) -> TableMetadata:
        _, json_path = self.table_paths(table_id)
        try:
            return TableMetadata.from_json_dict(
                json.loads(json_path.read_text(encoding="utf-8"))
            )
        except FileNotFoundError:
            raise CorpusError(f"table {table_id} not found in corpus")
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise CorpusError(f"metadata for {table_id} unreadable: {exc}")

    def read_table(self, table_id: TableId) -> tuple[list[list[str]], TableMetadata]:
        csv_path, json_path = self.table_paths(table_id)
        try:
            meta = TableMetadata.from_json_dict(
                json.loads(json_path.read_text(encoding="utf-8"))
            )
            texts = csv_bytes_to_grid(csv_path.read_bytes())
        except FileNotFoundError:
            raise CorpusError(f"table {table_id} not found in corpus")
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise CorpusError(f"table {table_id} unreadable: {exc}")
        return texts, meta

    def iter_table_ids(self) -> list[TableId]:
        """All stored table ids, ascending (page_id, offset)."""
        tables_root = self.root / TABLES_DIR
        ids = []
        if not tables_root.is_dir():
            return ids
        for shard in tables_root.iterdir():
            if not shard.is_dir():
                continue
            for path in shard.glob("*.json"):
                page_id, _, offset = path.stem.partition("_")
                try:
                    ids.append(TableId(int(page_id), int(offset)))
                except ValueError:
                    continue
        ids.sort(key=TableId.sort_key)
        return ids

    def reconstruct_table(self, table_id: TableId) -> ExtractedTable:
        """Rebuild an ExtractedTable from stored files (for re-filtering).

        Cell origin flags are not stored in CSV; cells come back as
        ``real`` with headers inferred from the recorded header_rows.
        """
        texts, meta = self.read_table(table_id)
        rows = tuple(
            tuple(Cell(t, i < meta.header_rows, "real") for t in row)
            for i, row in enumerate(texts)
        )
        grid = CellGrid(rows)
        return ExtractedTable(
            table_id=table_id,
            grid=grid,
            header_rows=meta.header_rows,
            caption=meta.caption,
            context_before=meta.context_before,
            context_after=meta.context_after,
            page_title=meta.page_title,
            url=meta.url,
            column_numeric=meta.column_numeric,
        )

    # -- checkpoint log ----------------------------------------------------

    def append_header(
        self, snapshot_date: str, chunk_count: int, chunk_index: int, filters_key: str
    ) -> None:
        payload = f"H\t{snapshot_date}\t{chunk_count}\t{chunk_index}\t{filters_key}"
        self._append_line(payload)

    def checkpoint_page(self, page_id: int, table_count: int, status: str) -> None:
        """Durably record page completion; returns only after fsync."""
        if status not in _STATUSES:
            raise ValueError(f"bad status {status!r}")
        self._append_line(f"D\t{page_id}\t{status}\t{table_count}")

    def _repair_torn_tail(self) -> None:
        """Fix up a half-written final record before appending new ones.

        A complete record missing only its newline gets the newline; an
        unparseable tail is truncated away (its page was never counted
        as done, so it will simply be reprocessed).
        """
        try:
            raw = self.checkpoint_path.read_bytes()
        except FileNotFoundError:
            return
        if not raw or raw.endswith(b"\n"):
            return
        nl = raw.rfind(b"\n")
        tail = raw[nl + 1 :]
        if self._parse_line(tail) is not None:
            with open(self.checkpoint_path, "ab") as fh:
                fh.write(b"\n")
        else:
            log.warning("%s: truncating torn final record", self.checkpoint_path)
            with open(self.checkpoint_path, "r+b") as fh:
                fh.truncate(nl + 1 if nl >= 0 else 0)

    def _append_line(self, payload: str) -> None:
        line = f"{payload}\t{_crc(payload)}\n".encode("utf-8")
        with self._ckpt_lock:
            if self._ckpt_fh is None:
                self.root.mkdir(parents=True, exist_ok=True)
                self._repair_torn_tail()
                self._ckpt_fh = open(self.checkpoint_path, "ab")
            self._ckpt_fh.write(line)
            self._ckpt_fh.flush()
            os.fsync(self._ckpt_fh.fileno())

    def close(self) -> None:
        with self._ckpt_lock:
            if self._ckpt_fh is not None:
                self._ckpt_fh.close()
                self._ckpt_fh = None

    def load_checkpoint(
        self, expect_snapshot: str | None = None
    ) -> dict[int, CheckpointRecord]:
        """Parse the log; a torn final record is discarded, anything else
        malformed is fatal. Duplicate records collapse (last wins)."""
        records: dict[int, CheckpointRecord] = {}
        try:
            raw = self.checkpoint_path.read_bytes()
        except FileNotFoundError:
            return records
        lines = raw.split(b"\n")
        torn = lines[-1]  # empty when the file ends with a newline
        for idx, line in enumerate(lines[:-1]):
            parsed = self._parse_line(line)
            if parsed is None:
                raise CheckpointCorrupt(
                    f"{self.checkpoint_path}: corrupt record on line {idx + 1}; "
                    "re-verify the corpus"
                )
            self._apply_record(parsed, records, expect_snapshot)
        if torn:
            parsed = self._parse_line(torn)
            if parsed is None:
                log.warning("%s: discarding torn final record", self.checkpoint_path)
            else:
                # complete record missing only its newline
                self._apply_record(parsed, records, expect_snapshot)
        return records

    def completed_page_ids(self, expect_snapshot: str | None = None) -> set[int]:
        return set(self.load_checkpoint(expect_snapshot))

    def checkpoint_headers(self) -> list[tuple[str, int, int, str]]:
        headers = []
        try:
            raw = self.checkpoint_path.read_bytes()
        except FileNotFoundError:
            return headers
        for line in raw.split(b"\n")[:-1]:
            parsed = self._parse_line(line)
            if parsed and parsed[0] == "H":
                _, snapshot, count, index, key = parsed
                headers.append((snapshot, int(count), int(index), key))
        return headers

    def _parse_line(self, line: bytes):
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError:
            return None
        fields = text.split("\t")
        if len(fields) < 2:
            return None
        payload, crc = "\t".join(fields[:-1]), fields[-1]
        if len(crc) != 8 or _crc(payload) != crc:
            return None
        if fields[0] == "D" and len(fields) == 5:
            try:
                int(fields[1]), int(fields[3])
            except ValueError:
                return None
            if fields[2] not in _STATUSES:
                return None
            return tuple(fields[:-1])
        if fields[0] == "H" and len(fields) == 6:
            try:
                int(fields[2]), int(fields[3])
            except ValueError:
                return None
            return tuple(fields[:-1])
        return None

    def _apply_record(self, parsed, records, expect_snapshot):
        if parsed[0] == "H":
            if expect_snapshot is not None and parsed[1] != expect_snapshot:
                raise SnapshotMismatch(
                    f"checkpoint is for snapshot {parsed[1]}, expected {expect_snapshot}"
                )
            return
        _, page_id, status, table_count = parsed
        records[int(page_id)] = CheckpointRecord(int(page_id), int(table_count), status)

    # -- low-level write helpers -------------------------------------------

    def _stage_and_commit(self, final: Path, data: bytes) -> None:
        tmp = final.with_name(final.name + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, final)

    def _atomic_write(self, path: Path, data: bytes) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        self._stage_and_commit(path, data)

    def cleanup_temp_files(self) -> int:
        """Remove stray .tmp files left by a crash; returns count removed."""
        removed = 0
        tables_root = self.root / TABLES_DIR
        candidates = [self.root]
        if tables_root.is_dir():
            candidates.extend(p for p in tables_root.iterdir() if p.is_dir())
        for directory in candidates:
            for tmp in directory.glob("*.tmp"):
                tmp.unlink(missing_ok=True)
                removed += 1
        return removed
