"""Language-customization filters and the cell predicates behind them.

The character-class and null/numeric definitions here are normative for
the whole toolkit: the statistics module imports these exact predicates
so reported percentages can never diverge from filter behavior.

Character classes:
  cyrillic          code points U+0400-U+04FF and U+0500-U+052F
  latin             A-Z and a-z only
  digits            0-9 only
  alphabetic_other  any other Unicode letter
  whitespace        Unicode whitespace
  non_alpha_non_ws  everything else (punctuation, symbols, ...)
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, replace

from tablecorpus.config import FilterConfig
from tablecorpus.models import Cell, CellGrid, ExtractedTable

# Optional sign, digit groups separated by single space-like characters,
# one optional fractional part after '.' or ',', optional trailing '%'.
_NUMERIC_RE = re.compile(
    r"[+\-−]?[0-9]+(?:[    ][0-9]+)*(?:[.,][0-9]+)?%?\Z"
)

_NULL_DASHES = frozenset("-–—")  # - – —


@dataclass(frozen=True)
class CharClassProfile:
    """Per-class character counts for one piece of text."""

    total: int = 0
    cyrillic: int = 0
    latin: int = 0
    digits: int = 0
    alphabetic_other: int = 0
    non_alpha_non_ws: int = 0
    whitespace: int = 0

    def __add__(self, other: "CharClassProfile") -> "CharClassProfile":
        return CharClassProfile(
            self.total + other.total,
            self.cyrillic + other.cyrillic,
            self.latin + other.latin,
            self.digits + other.digits,
            self.alphabetic_other + other.alphabetic_other,
            self.non_alpha_non_ws + other.non_alpha_non_ws,
            self.whitespace + other.whitespace,
        )


def classify_chars(text: str) -> CharClassProfile:
    """Count characters of ``text`` per the class definitions above."""
    cyr = lat = dig = alpha_other = other = ws = 0
    for ch in text:
        cp = ord(ch)
        if 0x0400 <= cp <= 0x04FF or 0x0500 <= cp <= 0x052F:
            cyr += 1
        elif ("A" <= ch <= "Z") or ("a" <= ch <= "z"):
            lat += 1
        elif "0" <= ch <= "9":
            dig += 1
        elif ch.isspace():
            ws += 1
        elif unicodedata.category(ch).startswith("L"):
            alpha_other += 1
        else:
            other += 1
    return CharClassProfile(len(text), cyr, lat, dig, alpha_other, other, ws)


def is_numeric_cell(text: str) -> bool:
    """True iff the trimmed text is a number per the grammar above.

    Empty text is null, not numeric.
    """
    return bool(_NUMERIC_RE.fullmatch(text.strip()))


def is_null_cell(text: str) -> bool:
    """True for empty text and dash-like / n-a placeholders."""
    t = text.strip()
    if not t:
        return True
    if t.lower() == "n/a":
        return True
    return all(ch in _NULL_DASHES for ch in t)


def row_null_fraction(texts: list[str]) -> float:
    if not texts:
        return 0.0
    return sum(1 for t in texts if is_null_cell(t)) / len(texts)


def column_is_mostly_null(data_texts: list[str], threshold: float) -> bool:
    """Strictly more than ``threshold`` of the data cells are null."""
    if not data_texts:
        return False
    return row_null_fraction(data_texts) > threshold


def _only_class(data_texts: list[str], keep: str) -> bool:
    """Every non-null data cell has keep-class chars and no other letters."""
    non_null = [t for t in data_texts if not is_null_cell(t)]
    if not non_null:
        return False
    for t in non_null:
        p = classify_chars(t)
        counts = {
            "cyrillic": p.cyrillic,
            "latin": p.latin,
            "alphabetic_other": p.alphabetic_other,
        }
        if counts.pop(keep) == 0 or any(v > 0 for v in counts.values()):
            return False
    return True


def column_is_latin_only(data_texts: list[str]) -> bool:
    return _only_class(data_texts, "latin")


def column_is_cyrillic_only(data_texts: list[str]) -> bool:
    return _only_class(data_texts, "cyrillic")


def column_is_numeric_only(data_texts: list[str]) -> bool:
    """Every non-null data cell is numeric; at least one non-null cell."""
    non_null = [t for t in data_texts if not is_null_cell(t)]
    return bool(non_null) and all(is_numeric_cell(t) for t in non_null)


def is_nonstring_cell(text: str) -> bool:
    """Cell with at least one digit or non-alphabetic non-space character."""
    p = classify_chars(text)
    return p.digits >= 1 or p.non_alpha_non_ws >= 1


def cyrillic_ratio(profile: CharClassProfile) -> float:
    """Cyrillic share among letter/digit characters (whitespace and
    punctuation excluded from the denominator); 0.0 when no such chars."""
    denom = profile.cyrillic + profile.latin + profile.digits + profile.alphabetic_other
    if denom == 0:
        return 0.0
    return profile.cyrillic / denom


def column_numeric_flags(grid: CellGrid, header_rows: int) -> tuple[bool, ...]:
    """Per-column numeric-only flags, evaluated over data rows."""
    flags = []
    for i in range(grid.n_cols):
        data = [row[i].text for row in grid.rows[header_rows:]]
        flags.append(column_is_numeric_only(data))
    return tuple(flags)


def apply_filters(table: ExtractedTable, cfg: FilterConfig) -> ExtractedTable | None:
    """Apply the language filters to one table; None when it is dropped.

    Fixed order (order matters: dropping a null column changes row null
    fractions, so rows are always judged against the original grid):
      1. drop mostly-NULL rows (header rows exempt)
      2. drop mostly-NULL columns
      3. drop Latin-only columns
      4. drop numeric-only columns
      5. drop the whole table when its Cyrillic ratio or surviving
         dimensions fall below the configured minimums
    """
    rows = [list(r) for r in table.grid.rows]
    header_rows = table.header_rows

    if cfg.drop_mostly_null_rows:
        kept = []
        for i, row in enumerate(rows):
            if i < header_rows:
                kept.append(row)
                continue
            if row_null_fraction([c.text for c in row]) > cfg.null_threshold:
                continue
            kept.append(row)
        rows = kept
    if not rows:
        return None

    n_cols = len(rows[0])
    drop_cols: set[int] = set()
    for i in range(n_cols):
        data = [row[i].text for row in rows[header_rows:]]
        if cfg.drop_mostly_null_columns and column_is_mostly_null(data, cfg.null_threshold):
            drop_cols.add(i)
        elif cfg.drop_latin_only_columns and column_is_latin_only(data):
            drop_cols.add(i)
        elif cfg.drop_numeric_only_columns and column_is_numeric_only(data):
            drop_cols.add(i)
    if drop_cols:
        rows = [[c for j, c in enumerate(row) if j not in drop_cols] for row in rows]
        if not rows[0]:
            return None

    profile = CharClassProfile()
    for row in rows:
        for cell in row:
            profile = profile + classify_chars(cell.text)
    if cyrillic_ratio(profile) < cfg.min_cyrillic_ratio:
        return None
    if len(rows) < cfg.min_rows or len(rows[0]) < cfg.min_cols:
        return None

    grid = CellGrid(tuple(tuple(row) for row in rows))
    return replace(
        table,
        grid=grid,
        header_rows=min(header_rows, grid.n_rows),
        column_numeric=column_numeric_flags(grid, min(header_rows, grid.n_rows)),
    )
