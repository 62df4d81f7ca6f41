"""Domain value types shared across the pipeline.

Everything here is immutable after construction and safe to hand
between worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

CellOrigin = Literal["real", "span_copy", "pad"]

# Sentinel used for RawPage.source
SOURCE_API = "api"
SOURCE_DUMP = "dump"


@dataclass(frozen=True)
class PageRef:
    """Identity of one wiki page; page_id is the stable key across snapshots."""

    page_id: int
    title: str
    namespace: int = 0

    def __post_init__(self):
        if self.page_id <= 0:
            raise ValueError("page_id must be > 0")
        if not self.title:
            raise ValueError("title must be non-empty")


@dataclass(frozen=True)
class RawPage:
    """Rendered HTML of one page, from the API or a dump."""

    ref: PageRef
    html: str
    fetched_at: str  # ISO-8601 UTC
    source: str  # "api" | "dump"


@dataclass(frozen=True)
class TableId:
    """Surrogate table identity: page plus document-order offset.

    ``offset`` counts every table element in the page in document order
    of opening tags, including tables that later fail to parse, so ids
    stay stable regardless of which tables survive.
    """

    page_id: int
    offset: int

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError("offset must be >= 0")

    def __str__(self) -> str:
        return f"{self.page_id}_{self.offset}"

    def sort_key(self) -> tuple[int, int]:
        return (self.page_id, self.offset)


@dataclass(frozen=True)
class Cell:
    """One grid cell after span expansion.

    ``span_copy`` cells repeat the text of the origin cell they were
    expanded from; ``pad`` cells fill ragged rows with empty text.
    """

    text: str
    is_header: bool = False
    origin: CellOrigin = "real"


@dataclass(frozen=True)
class CellGrid:
    """Rectangular cell grid; every row has exactly n_cols cells."""

    rows: tuple[tuple[Cell, ...], ...]

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("grid must have at least one row and one column")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("grid rows must all have the same width")

    def texts(self) -> list[list[str]]:
        return [[c.text for c in row] for row in self.rows]

    def column(self, i: int) -> list[Cell]:
        return [row[i] for row in self.rows]


@dataclass(frozen=True)
class ExtractedTable:
    """One normalized table with its caption and context windows."""

    table_id: TableId
    grid: CellGrid
    header_rows: int
    caption: str | None
    context_before: tuple[str, ...]
    context_after: tuple[str, ...]
    page_title: str
    url: str
    column_numeric: tuple[bool, ...]

    def __post_init__(self):
        if len(self.context_before) > 200 or len(self.context_after) > 200:
            raise ValueError("context windows are capped at 200 words")
        if not 0 <= self.header_rows <= self.grid.n_rows:
            raise ValueError("header_rows out of range")
        if len(self.column_numeric) != self.grid.n_cols:
            raise ValueError("column_numeric must have one entry per column")


@dataclass(frozen=True)
class TableMetadata:
    """The per-table metadata record stored as a JSON sidecar."""

    table_id: TableId
    url: str
    page_title: str
    caption: str | None
    context_before: tuple[str, ...]
    context_after: tuple[str, ...]
    n_rows: int
    n_cols: int
    column_numeric: tuple[bool, ...]
    header_rows: int
    extracted_at: str  # ISO-8601 UTC
    snapshot_date: str

    def to_json_dict(self) -> dict:
        return {
            "page_id": self.table_id.page_id,
            "offset": self.table_id.offset,
            "url": self.url,
            "page_title": self.page_title,
            "caption": self.caption,
            "context_before": list(self.context_before),
            "context_after": list(self.context_after),
            "n_rows": self.n_rows,
            "n_cols": self.n_cols,
            "column_numeric": list(self.column_numeric),
            "header_rows": self.header_rows,
            "extracted_at": self.extracted_at,
            "snapshot_date": self.snapshot_date,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TableMetadata":
        return cls(
            table_id=TableId(data["page_id"], data["offset"]),
            url=data["url"],
            page_title=data["page_title"],
            caption=data["caption"],
            context_before=tuple(data["context_before"]),
            context_after=tuple(data["context_after"]),
            n_rows=data["n_rows"],
            n_cols=data["n_cols"],
            column_numeric=tuple(data["column_numeric"]),
            header_rows=data["header_rows"],
            extracted_at=data["extracted_at"],
            snapshot_date=data["snapshot_date"],
        )

    @classmethod
    def for_table(
        cls, table: ExtractedTable, extracted_at: str, snapshot_date: str
    ) -> "TableMetadata":
        return cls(
            table_id=table.table_id,
            url=table.url,
            page_title=table.page_title,
            caption=table.caption,
            context_before=table.context_before,
            context_after=table.context_after,
            n_rows=table.grid.n_rows,
            n_cols=table.grid.n_cols,
            column_numeric=table.column_numeric,
            header_rows=table.header_rows,
            extracted_at=extracted_at,
            snapshot_date=snapshot_date,
        )
