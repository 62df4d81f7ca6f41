"""Offline dump input: rendered-HTML page archives with a manifest.

A dump is either a directory or a tar archive (.tar, .tar.gz, .tgz)
containing per-page HTML files plus ``manifest.tsv``, one record per
line: page_id <tab> title <tab> relative path. In a tar archive the
manifest must be the first member so the archive can be streamed.

Classic wikitext XML dumps are rejected: the extractor consumes rendered
HTML only.
"""

from __future__ import annotations

import logging
import tarfile
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterator

from tablecorpus.config import SourceConfig
from tablecorpus.errors import DumpError, DumpTruncated
from tablecorpus.models import SOURCE_DUMP, PageRef, RawPage

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.tsv"
_TAR_SUFFIXES = (".tar", ".tar.gz", ".tgz")


def _mtime_iso(epoch: float) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).isoformat()


def parse_manifest(data: bytes) -> list[tuple[int, str, str]]:
    """Parse manifest bytes; DumpError carries the byte offset on failure."""
    records = []
    offset = 0
    for line in data.split(b"\n"):
        if line:
            try:
                text = line.decode("utf-8")
                page_id, title, relpath = text.split("\t")
                records.append((int(page_id), title, relpath))
            except (UnicodeDecodeError, ValueError) as exc:
                raise DumpError(f"malformed manifest record: {exc}", offset=offset)
        offset += len(line) + 1
    return records


def _reject_wikitext(path: Path) -> None:
    name = path.name.lower()
    if name.endswith((".xml", ".xml.bz2", ".xml.gz")):
        raise DumpError(
            f"{path} looks like a wikitext XML dump; this toolkit consumes "
            "rendered-HTML dumps (directory or tar with manifest.tsv)"
        )


class _CountingReader:
    """File wrapper that tracks the byte offset for error reporting."""

    def __init__(self, fh: IO[bytes]):
        self._fh = fh
        self.offset = 0

    def read(self, n: int = -1) -> bytes:
        data = self._fh.read(n)
        self.offset += len(data)
        return data

    def close(self):
        self._fh.close()


def list_refs(dump_path: str | Path) -> list[PageRef]:
    """Page refs from the dump manifest, in manifest order."""
    return [PageRef(pid, title) for pid, title, _ in _manifest_records(Path(dump_path))]


def _manifest_records(path: Path) -> list[tuple[int, str, str]]:
    _reject_wikitext(path)
    if path.is_dir():
        manifest = path / MANIFEST_NAME
        if not manifest.is_file():
            raise DumpError(f"dump directory {path} has no {MANIFEST_NAME}")
        return parse_manifest(manifest.read_bytes())
    if not path.exists():
        raise DumpError(f"dump {path} does not exist")
    # tar: manifest must be the first member
    try:
        with tarfile.open(path, mode="r:*") as tar:
            member = tar.next()
            if member is None or Path(member.name).name != MANIFEST_NAME:
                raise DumpError(f"first member of {path} must be {MANIFEST_NAME}")
            fh = tar.extractfile(member)
            if fh is None:
                raise DumpError(f"cannot read {MANIFEST_NAME} from {path}")
            return parse_manifest(fh.read())
    except tarfile.ReadError as exc:
        raise DumpError(f"unreadable dump {path}: {exc}", offset=0)


def read_dump(cfg: SourceConfig) -> Iterator[RawPage]:
    """Stream pages from the dump without loading it into memory.

    Complete pages are yielded in file order; a truncated archive raises
    DumpTruncated (with byte offset) after the last complete page.
    """
    if not cfg.dump_path:
        raise DumpError("SourceConfig.dump_path not set")
    path = Path(cfg.dump_path)
    _reject_wikitext(path)
    if path.is_dir():
        yield from _read_dir(path)
    elif path.exists():
        yield from _read_tar(path)
    else:
        raise DumpError(f"dump {path} does not exist")


def _read_dir(path: Path) -> Iterator[RawPage]:
    for page_id, title, relpath in _manifest_records(path):
        file_path = path / relpath
        try:
            html = file_path.read_text(encoding="utf-8")
            fetched = _mtime_iso(file_path.stat().st_mtime)
        except FileNotFoundError:
            raise DumpError(f"dump file missing: {file_path}")
        except OSError as exc:
            raise DumpError(f"dump file unreadable: {file_path}: {exc}")
        yield RawPage(PageRef(page_id, title), html, fetched, SOURCE_DUMP)


def _read_tar(path: Path) -> Iterator[RawPage]:
    compression = "r|gz" if path.name.endswith((".gz", ".tgz")) else "r|"
    counter = _CountingReader(open(path, "rb"))
    by_path: dict[str, tuple[int, str]] = {}
    manifest_seen = False
    try:
        try:
            tar = tarfile.open(fileobj=counter, mode=compression)  # type: ignore[arg-type]
        except tarfile.ReadError as exc:
            raise DumpError(f"unreadable dump {path}: {exc}", offset=counter.offset)
        while True:
            try:
                member = tar.next()
                if member is None:
                    break
                if not member.isfile():
                    continue
                fh = tar.extractfile(member)
                data = fh.read() if fh else b""
                if fh and len(data) != member.size:
                    raise EOFError("short read")
            except (tarfile.ReadError, EOFError, OSError) as exc:
                raise DumpTruncated(
                    f"dump {path} truncated: {exc}", offset=counter.offset
                )
            name = Path(member.name).name
            if not manifest_seen:
                if name != MANIFEST_NAME:
                    raise DumpError(
                        f"first member of {path} must be {MANIFEST_NAME}",
                        offset=counter.offset,
                    )
                by_path = {
                    rel: (pid, title) for pid, title, rel in parse_manifest(data)
                }
                manifest_seen = True
                continue
            entry = by_path.get(member.name) or by_path.get(name)
            if entry is None:
                log.debug("dump member %s not in manifest; skipped", member.name)
                continue
            page_id, title = entry
            yield RawPage(
                PageRef(page_id, title),
                data.decode("utf-8"),
                _mtime_iso(member.mtime),
                SOURCE_DUMP,
            )
    finally:
        counter.close()


def write_dump(
    dest: str | Path, pages: list[tuple[int, str, str]], fmt: str = "dir"
) -> Path:
    """Build a dump from (page_id, title, html) triples.

    ``fmt``: "dir", "tar", or "tar.gz". Page files are named
    ``pages/<page_id>.html``.
    """
    dest = Path(dest)
    manifest_lines = []
    files = []
    for page_id, title, html in pages:
        relpath = f"pages/{page_id}.html"
        manifest_lines.append(f"{page_id}\t{title}\t{relpath}\n")
        files.append((relpath, html.encode("utf-8")))
    manifest_bytes = "".join(manifest_lines).encode("utf-8")

    if fmt == "dir":
        dest.mkdir(parents=True, exist_ok=True)
        (dest / MANIFEST_NAME).write_bytes(manifest_bytes)
        for relpath, data in files:
            target = dest / relpath
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(data)
        return dest

    if fmt not in ("tar", "tar.gz"):
        raise ValueError(f"unsupported dump format {fmt!r}")
    mode = "w:gz" if fmt == "tar.gz" else "w"
    import io

    with tarfile.open(dest, mode=mode) as tar:
        def add(name: str, data: bytes):
            info = tarfile.TarInfo(name)
            info.size = len(data)
            info.mtime = 0
            tar.addfile(info, io.BytesIO(data))

        add(MANIFEST_NAME, manifest_bytes)
        for relpath, data in files:
            add(relpath, data)
    return dest
