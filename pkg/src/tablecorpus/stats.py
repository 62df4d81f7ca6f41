"""Corpus statistics, rankings, and offline metadata queries.

All null/numeric/character-class decisions are imported from the filter
module, so reported percentages can never drift from filter behavior.
Definitions used throughout (documented here once):

  * row "mostly NULL": more than ``null_threshold`` (default 0.7) of the
    row's cells are null; evaluated for every stored row.
  * column predicates (mostly NULL / Cyrillic-only / Latin-only /
    numeric-only): evaluated over data cells only, i.e. header rows are
    excluded, matching how the filters judge columns. The *-only
    predicates require at least one non-null data cell.
  * non-string cell: at least one digit or non-alphabetic non-whitespace
    character.
  * character counts (chars / Cyrillic / Latin per cell) count the
    stored cell text including spaces.
"""

from __future__ import annotations

import json
import logging
import unicodedata
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path

from tablecorpus import filters
from tablecorpus.config import FilterConfig
from tablecorpus.errors import CorpusError, ValidationError
from tablecorpus.models import TableId, TableMetadata
from tablecorpus.store import REPORTS_DIR, CorpusStore

log = logging.getLogger(__name__)

DEFAULT_NULL_THRESHOLD = 0.7


@dataclass(frozen=True)
class CorpusStats:
    """Every corpus-level metric, stored full-precision."""

    pages_total: int = 0
    tables_total: int = 0
    rows_total: int = 0
    columns_total: int = 0
    cells_total: int = 0
    avg_cells_per_table: float = 0.0
    avg_tables_per_page: float = 0.0
    avg_cells_per_row: float = 0.0
    avg_cells_per_column: float = 0.0
    avg_chars_per_cell: float = 0.0
    avg_cyrillic_per_cell: float = 0.0
    avg_latin_per_cell: float = 0.0
    pct_nonstring_cells: float = 0.0
    pct_mostly_null_rows: float = 0.0
    pct_mostly_null_columns: float = 0.0
    pct_cyrillic_only_columns: float = 0.0
    pct_latin_only_columns: float = 0.0
    pct_numeric_only_columns: float = 0.0
    empty: bool = False
    unreadable_tables: int = 0

    def to_json_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class QuerySpec:
    """Conjunctive metadata search over the stored corpus (offline)."""

    title_substring: str | None = None
    caption_substring: str | None = None
    min_rows: int | None = None
    max_rows: int | None = None
    min_cols: int | None = None
    max_cols: int | None = None
    has_numeric_column: bool | None = None
    limit: int = 50
    offset: int = 0

    def validate(self) -> None:
        bad = []
        if self.limit < 1:
            bad.append("limit")
        if self.offset < 0:
            bad.append("offset")
        if (
            self.min_rows is not None
            and self.max_rows is not None
            and self.min_rows > self.max_rows
        ):
            bad.extend(["min_rows", "max_rows"])
        if (
            self.min_cols is not None
            and self.max_cols is not None
            and self.min_cols > self.max_cols
        ):
            bad.extend(["min_cols", "max_cols"])
        if bad:
            raise ValidationError(
                f"invalid query: check {', '.join(bad)}", fields=bad
            )


@dataclass(frozen=True)
class SearchResult:
    items: list[TableMetadata]
    total_matches: int
    limit: int
    offset: int


@dataclass
class _TableView:
    """One stored table as the scanners see it (possibly re-filtered)."""

    table_id: TableId
    page_title: str
    caption: str | None
    texts: list[list[str]]
    header_rows: int

    @property
    def n_rows(self) -> int:
        return len(self.texts)

    @property
    def n_cols(self) -> int:
        return len(self.texts[0]) if self.texts else 0


def _scan(corpus_root, cfg: FilterConfig | None):
    """Yield table views; unreadable tables are tallied, not fatal."""
    store = CorpusStore(corpus_root)
    store.read_manifest()  # raises CorpusError when absent
    errors = 0
    views = []
    for table_id in store.iter_table_ids():
        try:
            texts, meta = store.read_table(table_id)
        except CorpusError as exc:
            log.warning("skipping unreadable table %s: %s", table_id, exc)
            errors += 1
            continue
        header_rows = meta.header_rows
        if cfg is not None:
            table = store.reconstruct_table(table_id)
            kept = filters.apply_filters(table, cfg)
            if kept is None:
                continue
            texts = kept.grid.texts()
            header_rows = kept.header_rows
        views.append(_TableView(table_id, meta.page_title, meta.caption, texts, header_rows))
    return views, errors


def compute_stats(corpus_root, cfg: FilterConfig | None = None) -> CorpusStats:
    """Single pass over all metadata and CSVs.

    ``pages_total`` comes from the persisted title listing, so pages
    without tables keep the tables-per-page average honest.
    """
    store = CorpusStore(corpus_root)
    store.read_manifest()
    pages_total = store.page_count()
    threshold = cfg.null_threshold if cfg is not None else DEFAULT_NULL_THRESHOLD

    views, errors = _scan(corpus_root, cfg)
    tables = rows = cols = cells = 0
    chars = cyr = lat = 0
    nonstring = null_rows = 0
    null_cols = cyr_cols = lat_cols = num_cols = 0

    for view in views:
        tables += 1
        rows += view.n_rows
        cols += view.n_cols
        cells += view.n_rows * view.n_cols
        for row in view.texts:
            if filters.row_null_fraction(row) > threshold:
                null_rows += 1
            for text in row:
                profile = filters.classify_chars(text)
                chars += profile.total
                cyr += profile.cyrillic
                lat += profile.latin
                if profile.digits >= 1 or profile.non_alpha_non_ws >= 1:
                    nonstring += 1
        for i in range(view.n_cols):
            data = [row[i] for row in view.texts[view.header_rows :]]
            if filters.column_is_mostly_null(data, threshold):
                null_cols += 1
            if filters.column_is_cyrillic_only(data):
                cyr_cols += 1
            if filters.column_is_latin_only(data):
                lat_cols += 1
            if filters.column_is_numeric_only(data):
                num_cols += 1

    def ratio(a: int, b: int) -> float:
        return a / b if b else 0.0

    return CorpusStats(
        pages_total=pages_total,
        tables_total=tables,
        rows_total=rows,
        columns_total=cols,
        cells_total=cells,
        avg_cells_per_table=ratio(cells, tables),
        avg_tables_per_page=ratio(tables, pages_total),
        avg_cells_per_row=ratio(cells, rows),
        avg_cells_per_column=ratio(cells, cols),
        avg_chars_per_cell=ratio(chars, cells),
        avg_cyrillic_per_cell=ratio(cyr, cells),
        avg_latin_per_cell=ratio(lat, cells),
        pct_nonstring_cells=100.0 * ratio(nonstring, cells),
        pct_mostly_null_rows=100.0 * ratio(null_rows, rows),
        pct_mostly_null_columns=100.0 * ratio(null_cols, cols),
        pct_cyrillic_only_columns=100.0 * ratio(cyr_cols, cols),
        pct_latin_only_columns=100.0 * ratio(lat_cols, cols),
        pct_numeric_only_columns=100.0 * ratio(num_cols, cols),
        empty=(tables == 0),
        unreadable_tables=errors,
    )


def size_histogram(
    corpus_root, top_n: int, cfg: FilterConfig | None = None
) -> list[tuple[str, int]]:
    """Most frequent table sizes as "CxR" (columns x rows) keys.

    Ties rank by ascending (columns, rows).
    """
    counter: Counter[tuple[int, int]] = Counter()
    views, _ = _scan(corpus_root, cfg)
    for view in views:
        counter[(view.n_cols, view.n_rows)] += 1
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(f"{c}x{r}", n) for (c, r), n in ranked[: max(top_n, 0)]]


def row_column_marginals(
    corpus_root, cfg: FilterConfig | None = None
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Full (value, frequency) distributions of row and column counts."""
    row_counter: Counter[int] = Counter()
    col_counter: Counter[int] = Counter()
    views, _ = _scan(corpus_root, cfg)
    for view in views:
        row_counter[view.n_rows] += 1
        col_counter[view.n_cols] += 1
    return sorted(row_counter.items()), sorted(col_counter.items())


def header_frequency(
    corpus_root, top_n: int, filter_trivial: bool = False,
    cfg: FilterConfig | None = None,
) -> list[tuple[str, int]]:
    """Most common header-cell texts across all header rows.

    Every non-empty cell occurrence in a header row counts once. With
    ``filter_trivial``, headers that are pure digit strings ("0", "17")
    are excluded. Ties rank lexicographically.
    """
    counter: Counter[str] = Counter()
    views, _ = _scan(corpus_root, cfg)
    for view in views:
        for row in view.texts[: view.header_rows]:
            for text in row:
                if text:
                    counter[text] += 1
    items = counter.items()
    if filter_trivial:
        items = [(t, n) for t, n in items if not t.isdigit()]
    ranked = sorted(items, key=lambda kv: (-kv[1], kv[0]))
    return ranked[: max(top_n, 0)]


def table_rich_pages(
    corpus_root, top_n: int, min_rows: int = 0, min_cols: int = 0,
    cfg: FilterConfig | None = None,
) -> list[tuple[str, int]]:
    """Pages with the most tables of at least (min_rows, min_cols)."""
    counter: Counter[str] = Counter()
    views, _ = _scan(corpus_root, cfg)
    for view in views:
        if view.n_rows >= min_rows and view.n_cols >= min_cols:
            counter[view.page_title] += 1
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[: max(top_n, 0)]


def superlatives(corpus_root, cfg: FilterConfig | None = None) -> dict:
    """Extreme tables: widest, most cells (two aliases), most characters.

    Ties go to the smallest table id.
    """
    views, _ = _scan(corpus_root, cfg)
    best: dict[str, tuple[int, _TableView] | None] = {
        "widest": None, "longest_cells": None, "most_characters": None,
        "most_cells": None,
    }

    def consider(key: str, value: int, view: _TableView) -> None:
        cur = best[key]
        if cur is None or value > cur[0] or (
            value == cur[0] and view.table_id.sort_key() < cur[1].table_id.sort_key()
        ):
            best[key] = (value, view)

    for view in views:
        cell_count = view.n_rows * view.n_cols
        consider("widest", view.n_cols, view)
        consider("longest_cells", cell_count, view)
        consider("most_cells", cell_count, view)
        consider("most_characters", sum(len(t) for row in view.texts for t in row), view)

    out = {}
    for key, entry in best.items():
        if entry is None:
            out[key] = None
        else:
            value, view = entry
            out[key] = {
                "page_id": view.table_id.page_id,
                "offset": view.table_id.offset,
                "page_title": view.page_title,
                "value": value,
            }
    return out


def _fold(text: str) -> str:
    return unicodedata.normalize("NFC", text).casefold()


def search(corpus_root, q: QuerySpec) -> SearchResult:
    """Metadata-only search; never touches CSVs or the network."""
    q.validate()
    store = CorpusStore(corpus_root)
    store.read_manifest()

    def matches(meta: TableMetadata) -> bool:
        if q.title_substring is not None:
            if _fold(q.title_substring) not in _fold(meta.page_title):
                return False
        if q.caption_substring is not None:
            if meta.caption is None:
                return False
            if _fold(q.caption_substring) not in _fold(meta.caption):
                return False
        if q.min_rows is not None and meta.n_rows < q.min_rows:
            return False
        if q.max_rows is not None and meta.n_rows > q.max_rows:
            return False
        if q.min_cols is not None and meta.n_cols < q.min_cols:
            return False
        if q.max_cols is not None and meta.n_cols > q.max_cols:
            return False
        if q.has_numeric_column is not None:
            if any(meta.column_numeric) != q.has_numeric_column:
                return False
        return True

    found = []
    for table_id in store.iter_table_ids():
        try:
            meta = store.read_metadata(table_id)
        except CorpusError:
            continue
        if matches(meta):
            found.append(meta)
    page = found[q.offset : q.offset + q.limit]
    return SearchResult(items=page, total_matches=len(found), limit=q.limit, offset=q.offset)


# -- report files -----------------------------------------------------------


def render_stats_lines(stats: CorpusStats) -> list[str]:
    """Human-readable rendering; shares display precision with the CLI
    (2 decimals for averages, whole percent for shares)."""

    def f2(x: float) -> str:
        return f"{x:.2f}"

    def pct(x: float) -> str:
        return f"{round(x)}%"

    return [
        f"Total number of pages: {stats.pages_total}",
        f"Total number of tables: {stats.tables_total}",
        f"Total number of rows: {stats.rows_total}",
        f"Total number of columns: {stats.columns_total}",
        f"Total number of cells: {stats.cells_total}",
        f"Avg number of cells per table: {f2(stats.avg_cells_per_table)}",
        f"Avg number of tables per page: {f2(stats.avg_tables_per_page)}",
        f"Avg number of cells per row: {f2(stats.avg_cells_per_row)}",
        f"Avg number of cells per column: {f2(stats.avg_cells_per_column)}",
        f"Avg number of characters per cell: {f2(stats.avg_chars_per_cell)}",
        f"Avg number of Cyrillic characters per cell: {f2(stats.avg_cyrillic_per_cell)}",
        f"Avg number of Latin characters per cell: {f2(stats.avg_latin_per_cell)}",
        f"Cells with non-string data: {pct(stats.pct_nonstring_cells)}",
        f"Rows that are mostly NULL: {pct(stats.pct_mostly_null_rows)}",
        f"Columns that are mostly NULL: {pct(stats.pct_mostly_null_columns)}",
        f"Columns with only Cyrillic characters: {pct(stats.pct_cyrillic_only_columns)}",
        f"Columns with only Latin characters: {pct(stats.pct_latin_only_columns)}",
        f"Columns with only numeric data: {pct(stats.pct_numeric_only_columns)}",
    ]


def write_reports(corpus_root, top_n: int = 10, cfg: FilterConfig | None = None) -> Path:
    """Write the stats document and ranking/distribution files under
    corpus_root/reports/; returns the reports directory."""
    root = Path(corpus_root)
    reports = root / REPORTS_DIR
    reports.mkdir(parents=True, exist_ok=True)

    stats = compute_stats(root, cfg)
    (reports / "stats.json").write_text(
        json.dumps(stats.to_json_dict(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )

    def tsv(name: str, rows) -> None:
        lines = "".join(f"{a}\t{b}\n" for a, b in rows)
        (reports / name).write_text(lines, encoding="utf-8")

    tsv("size_histogram.tsv", size_histogram(root, top_n, cfg))
    row_dist, col_dist = row_column_marginals(root, cfg)
    tsv("row_distribution.tsv", row_dist)
    tsv("column_distribution.tsv", col_dist)
    tsv("header_frequency.tsv", header_frequency(root, top_n, True, cfg))
    tsv("header_frequency_raw.tsv", header_frequency(root, top_n, False, cfg))
    tsv("table_rich_pages.tsv", table_rich_pages(root, top_n, 0, 0, cfg))
    tsv("table_rich_pages_filtered.tsv", table_rich_pages(root, top_n, 3, 5, cfg))
    (reports / "superlatives.json").write_text(
        json.dumps(superlatives(root, cfg), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
    return reports
