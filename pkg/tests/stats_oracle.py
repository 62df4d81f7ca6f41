"""Naive, independent corpus statistics used to cross-check the real
implementation. Reads the corpus files directly and re-implements every
definition from scratch (no imports from the package under test):

  - char classes: Cyrillic U+0400..U+052F, ASCII letters, ASCII digits,
    Unicode whitespace, other Unicode letters, everything else
  - null cell: blank, dashes only, or n/a (case-insensitive)
  - numeric cell: sign? digit-groups (space-separated) fraction? percent?
  - mostly-NULL row: > threshold of the row's cells null (every row)
  - column predicates over data rows only (header rows excluded)
  - non-string cell: any ASCII digit or other non-letter non-space char
"""

from __future__ import annotations

import csv
import json
import os
import unicodedata
from pathlib import Path

THRESHOLD = 0.7
SPACE_SEPARATORS = "    "


def classify(text: str) -> dict:
    counts = {"total": len(text), "cyr": 0, "lat": 0, "dig": 0,
              "other_letter": 0, "punct": 0, "ws": 0}
    for ch in text:
        if 0x0400 <= ord(ch) <= 0x052F:
            counts["cyr"] += 1
        elif ch.isascii() and ch.isalpha():
            counts["lat"] += 1
        elif ch.isascii() and ch.isdigit():
            counts["dig"] += 1
        elif ch.isspace():
            counts["ws"] += 1
        elif unicodedata.category(ch)[0] == "L":
            counts["other_letter"] += 1
        else:
            counts["punct"] += 1
    return counts


def is_null(text: str) -> bool:
    t = text.strip()
    if t == "":
        return True
    if t.lower() == "n/a":
        return True
    return set(t) <= set("-–—")


def is_numeric(text: str) -> bool:
    t = text.strip()
    i = 0
    if i < len(t) and t[i] in "+-−":
        i += 1
    if i >= len(t) or not t[i].isascii() or not t[i].isdigit():
        return False
    saw_fraction = False
    saw_percent = False
    need_digit = True
    while i < len(t):
        ch = t[i]
        if saw_percent:
            return False
        if ch.isascii() and ch.isdigit():
            need_digit = False
            i += 1
        elif need_digit:
            return False
        elif ch in SPACE_SEPARATORS and not saw_fraction:
            need_digit = True
            i += 1
        elif ch in ".," and not saw_fraction:
            saw_fraction = True
            need_digit = True
            i += 1
        elif ch == "%":
            saw_percent = True
            i += 1
        else:
            return False
    return not need_digit


def is_nonstring(text: str) -> bool:
    c = classify(text)
    return c["dig"] >= 1 or c["punct"] >= 1


def load_tables(root: str | Path) -> list[dict]:
    root = Path(root)
    tables = []
    tables_dir = root / "tables"
    if not tables_dir.is_dir():
        return tables
    for shard in sorted(os.listdir(tables_dir)):
        shard_dir = tables_dir / shard
        if not shard_dir.is_dir():
            continue
        for name in sorted(os.listdir(shard_dir)):
            if not name.endswith(".json"):
                continue
            meta = json.loads((shard_dir / name).read_text(encoding="utf-8"))
            with open(shard_dir / (name[:-5] + ".csv"), newline="", encoding="utf-8") as fh:
                grid = [row for row in csv.reader(fh)]
            tables.append({"meta": meta, "grid": grid})
    tables.sort(key=lambda t: (t["meta"]["page_id"], t["meta"]["offset"]))
    return tables


def compute(root: str | Path) -> dict:
    root = Path(root)
    pages_total = sum(
        1 for line in (root / "titles.tsv").read_text(encoding="utf-8").splitlines()
        if line
    )
    tables = load_tables(root)

    n_tables = len(tables)
    rows_total = cols_total = cells_total = 0
    chars = cyr = lat = nonstring = 0
    null_rows = null_cols = cyr_cols = lat_cols = num_cols = 0

    for table in tables:
        grid = table["grid"]
        header_rows = table["meta"]["header_rows"]
        n_rows = len(grid)
        n_cols = len(grid[0]) if grid else 0
        rows_total += n_rows
        cols_total += n_cols
        cells_total += n_rows * n_cols
        for row in grid:
            nulls = sum(1 for cell in row if is_null(cell))
            if n_cols and nulls / n_cols > THRESHOLD:
                null_rows += 1
            for cell in row:
                c = classify(cell)
                chars += c["total"]
                cyr += c["cyr"]
                lat += c["lat"]
                if is_nonstring(cell):
                    nonstring += 1
        for j in range(n_cols):
            data = [row[j] for row in grid[header_rows:]]
            non_null = [t for t in data if not is_null(t)]
            if data and sum(1 for t in data if is_null(t)) / len(data) > THRESHOLD:
                null_cols += 1
            if non_null:
                profiles = [classify(t) for t in non_null]
                if all(p["cyr"] > 0 and p["lat"] == 0 and p["other_letter"] == 0
                       for p in profiles):
                    cyr_cols += 1
                if all(p["lat"] > 0 and p["cyr"] == 0 and p["other_letter"] == 0
                       for p in profiles):
                    lat_cols += 1
                if all(is_numeric(t) for t in non_null):
                    num_cols += 1

    def div(a, b):
        return a / b if b else 0.0

    return {
        "pages_total": pages_total,
        "tables_total": n_tables,
        "rows_total": rows_total,
        "columns_total": cols_total,
        "cells_total": cells_total,
        "avg_cells_per_table": div(cells_total, n_tables),
        "avg_tables_per_page": div(n_tables, pages_total),
        "avg_cells_per_row": div(cells_total, rows_total),
        "avg_cells_per_column": div(cells_total, cols_total),
        "avg_chars_per_cell": div(chars, cells_total),
        "avg_cyrillic_per_cell": div(cyr, cells_total),
        "avg_latin_per_cell": div(lat, cells_total),
        "pct_nonstring_cells": 100.0 * div(nonstring, cells_total),
        "pct_mostly_null_rows": 100.0 * div(null_rows, rows_total),
        "pct_mostly_null_columns": 100.0 * div(null_cols, cols_total),
        "pct_cyrillic_only_columns": 100.0 * div(cyr_cols, cols_total),
        "pct_latin_only_columns": 100.0 * div(lat_cols, cols_total),
        "pct_numeric_only_columns": 100.0 * div(num_cols, cols_total),
    }
