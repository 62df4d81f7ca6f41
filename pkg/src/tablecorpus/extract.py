"""Extract normalized tables and their context from one page's HTML.

Pure transformation: identical input bytes always produce identical
output, so pages can be processed in parallel and re-processed
idempotently after a crash.
"""

from __future__ import annotations

import logging
import re

from tablecorpus import filters, htmldom
from tablecorpus.errors import PageParseError
from tablecorpus.htmldom import Element, parse_html, visible_text, walk
from tablecorpus.models import Cell, CellGrid, ExtractedTable, RawPage, TableId

log = logging.getLogger(__name__)

MAX_SPAN = 1000
CONTEXT_WORDS = 200

_FOOTNOTE_RE = re.compile(r"\[\d+\]")
_CONTROL_RE = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f\x7f]")
_WS_RE = re.compile(r"\s+")

# flow-event kinds for context extraction
_WORD, _HEADING, _TABLE = 0, 1, 2


class TableSkipped(Exception):
    """Raised internally when a table element yields no usable grid."""


def normalize_text(raw: str) -> str:
    """Cell/caption text normalization: strip digit footnote markers like
    [12], collapse whitespace runs, drop control characters."""
    t = _FOOTNOTE_RE.sub("", raw)
    t = _CONTROL_RE.sub("", t)
    return _WS_RE.sub(" ", t).strip()


def _cell_text(cell_el: Element) -> str:
    # Nested tables get their own offsets; exclude their text here so
    # character statistics stay additive across the corpus.
    return normalize_text(visible_text(cell_el, skip_tags=frozenset(("table",))))


def _parse_span(cell_el: Element, attr: str, table_id: TableId) -> int:
    raw = cell_el.get(attr)
    if raw is None:
        return 1
    try:
        value = int(raw.strip().rstrip(";"))
    except ValueError:
        return 1
    if value < 1 or value > MAX_SPAN:
        log.warning("table %s: clamping %s=%r to 1", table_id, attr, raw)
        return 1
    return value


def _own_rows(table_el: Element) -> list[Element]:
    """tr elements belonging to this table (not to a nested one)."""
    rows = []
    for el in table_el.iter():
        if el.tag == "tr" and htmldom.nearest_ancestor(el, "table") is table_el:
            rows.append(el)
    return rows


def normalize_grid(table_el: Element, table_id: TableId) -> CellGrid:
    """Expand rowspan/colspan into a rectangular grid.

    Placement follows the standard first-free-slot rule: each cell lands
    at the leftmost unoccupied column at or after the previous cell's
    end, then claims its full rowspan x colspan rectangle. Where
    rectangles overlap, the cell placed first (document order) owns the
    slot. Ragged rows are right-padded.
    """
    row_els = _own_rows(table_el)
    if not row_els:
        raise TableSkipped("no rows")

    placed: list[dict[int, Cell]] = []
    # col -> rowspan claims in placement order: (last covered row, cell)
    claims: dict[int, list[tuple[int, Cell]]] = {}

    for r, row_el in enumerate(row_els):
        row: dict[int, Cell] = {}
        for col, pending in claims.items():
            pending[:] = [(last, src) for last, src in pending if last >= r]
            for last, src in pending:
                row[col] = Cell(src.text, src.is_header, "span_copy")
                break
        cursor = 0
        for cell_el in row_el.child_elements():
            if cell_el.tag not in ("td", "th"):
                continue
            rowspan = _parse_span(cell_el, "rowspan", table_id)
            colspan = _parse_span(cell_el, "colspan", table_id)
            while cursor in row:
                cursor += 1
            cell = Cell(_cell_text(cell_el), cell_el.tag == "th", "real")
            for j in range(colspan):
                col = cursor + j
                if col not in row:
                    row[col] = (
                        cell if j == 0 else Cell(cell.text, cell.is_header, "span_copy")
                    )
                if rowspan > 1:
                    # the rectangle claims later rows even where this row's
                    # slot was already owned by an earlier cell
                    claims.setdefault(col, []).append((r + rowspan - 1, cell))
            cursor += colspan
        placed.append(row)

    n_cols = max((max(r) + 1 for r in placed if r), default=0)
    if n_cols == 0:
        raise TableSkipped("no cells")
    pad = Cell("", False, "pad")
    rows = tuple(
        tuple(r.get(c, pad) for c in range(n_cols)) for r in placed
    )
    return CellGrid(rows)


def detect_header(grid: CellGrid) -> int:
    """Length of the leading run of rows made entirely of header cells.

    Pad cells are neutral; a row counts when every non-pad cell is a
    header cell and at least one non-pad cell exists.
    """
    count = 0
    for row in grid.rows:
        real = [c for c in row if c.origin != "pad"]
        if real and all(c.is_header for c in real):
            count += 1
        else:
            break
    return count


def _caption(table_el: Element) -> str | None:
    for el in table_el.iter():
        if el.tag == "caption" and htmldom.nearest_ancestor(el, "table") is table_el:
            text = normalize_text(visible_text(el, skip_tags=frozenset(("table",))))
            return text or None
    return None


class PageFlow:
    """Linearized page text for context windows.

    The page becomes a stream of word / section-heading / table events;
    all table-internal text is excluded, and each table is an atomic
    marker at its opening tag. A table's context is the words between it
    and the nearest section heading on either side.
    """

    def __init__(self, root: Element):
        self.events: list[tuple[int, str | int]] = []
        self.table_positions: list[int] = []
        buf: list[str] = []
        table_depth = 0
        heading_depth = 0
        invisible_depth = 0

        def flush():
            if buf:
                for word in "".join(buf).split():
                    self.events.append((_WORD, word))
                buf.clear()

        for kind, node in walk(root):
            if kind == "enter":
                tag = node.tag
                if tag in htmldom.INVISIBLE_TAGS:
                    invisible_depth += 1
                elif tag == "table":
                    flush()
                    self.table_positions.append(len(self.events))
                    self.events.append((_TABLE, len(self.table_positions) - 1))
                    table_depth += 1
                elif tag in htmldom.HEADING_TAGS and table_depth == 0:
                    flush()
                    self.events.append((_HEADING, ""))
                    heading_depth += 1
                elif tag in htmldom.BLOCK_TAGS:
                    flush()
            elif kind == "text":
                if table_depth == 0 and heading_depth == 0 and invisible_depth == 0:
                    buf.append(node.text)
            else:
                tag = node.tag
                if tag in htmldom.INVISIBLE_TAGS:
                    invisible_depth -= 1
                elif tag == "table":
                    table_depth -= 1
                elif tag in htmldom.HEADING_TAGS and heading_depth > 0 and table_depth == 0:
                    heading_depth -= 1
                elif tag in htmldom.BLOCK_TAGS:
                    flush()
        flush()

    def context(self, table_index: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
        pos = self.table_positions[table_index]
        before: list[str] = []
        for i in range(pos - 1, -1, -1):
            kind, value = self.events[i]
            if kind == _HEADING:
                break
            if kind == _WORD:
                before.append(value)
                if len(before) == CONTEXT_WORDS:
                    break
        before.reverse()
        after: list[str] = []
        for i in range(pos + 1, len(self.events)):
            kind, value = self.events[i]
            if kind == _HEADING:
                break
            if kind == _WORD:
                after.append(value)
                if len(after) == CONTEXT_WORDS:
                    break
        return tuple(before), tuple(after)


def extract_context(root: Element, table_index: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Context windows for the table at ``table_index`` (document order)."""
    return PageFlow(root).context(table_index)


def extract_tables(page: RawPage, page_url: str = "") -> list[ExtractedTable]:
    """All tables of a page in document order, offsets consecutive from 0.

    Tables that fail normalization are skipped with a warning but still
    consume their offset, keeping ids stable across parser fixes.
    """
    try:
        root = parse_html(page.html)
    except Exception as exc:  # html.parser is lenient; be explicit anyway
        raise PageParseError(f"page {page.ref.page_id}: {exc}") from exc

    table_els = [el for el in root.iter() if el.tag == "table"]
    if not table_els:
        return []

    flow = PageFlow(root)
    out: list[ExtractedTable] = []
    for offset, table_el in enumerate(table_els):
        table_id = TableId(page.ref.page_id, offset)
        try:
            grid = normalize_grid(table_el, table_id)
        except TableSkipped as exc:
            log.warning("table %s skipped: %s", table_id, exc)
            continue
        header_rows = detect_header(grid)
        before, after = flow.context(offset)
        out.append(
            ExtractedTable(
                table_id=table_id,
                grid=grid,
                header_rows=header_rows,
                caption=_caption(table_el),
                context_before=before,
                context_after=after,
                page_title=page.ref.title,
                url=page_url,
                column_numeric=filters.column_numeric_flags(grid, header_rows),
            )
        )
    return out
