"""Deterministic fixture wikis and random span tables for tests.

The fixture wiki plants a known table distribution so corpus-level
numbers (tables per page, qualifying tables, Cyrillic-only columns) are
exact by construction. Page ids are deliberately NOT in title order to
prove the listing is re-sorted by id.
"""

from __future__ import annotations

import random

# tables per page, repeating pattern; sums to 4 per 10 pages -> avg 0.4
TABLE_PATTERN = [0, 0, 0, 1, 0, 2, 0, 0, 1, 0]

CYR_WORDS = ["год", "место", "название", "команда", "сезон", "игры", "роль"]
LAT_WORDS = ["alpha", "beta", "gamma", "delta"]


def fixture_page_ids(n: int) -> list[int]:
    """Deterministic unique ids whose order differs from title order."""
    rng = random.Random(0xC0FFEE)
    return rng.sample(range(1000, 1000 + 10 * n), n) if n else []


def make_table_html(page_index: int, table_index: int) -> str:
    n_rows = 2 + (page_index + table_index) % 3  # data rows
    n_cols = 2 + (page_index * 3 + table_index) % 3
    parts = [f"<table><caption>Таблица {page_index}-{table_index}</caption>"]
    parts.append("<tr>" + "".join(
        f"<th>{CYR_WORDS[(c + page_index) % len(CYR_WORDS)].capitalize()}</th>"
        for c in range(n_cols)
    ) + "</tr>")
    for r in range(n_rows):
        cells = []
        for c in range(n_cols):
            if c == 0:
                cells.append(f"<td>{1990 + (r + page_index) % 30}</td>")
            elif (c + r) % 5 == 4:
                cells.append("<td></td>")
            elif c % 3 == 2:
                cells.append(f"<td>{LAT_WORDS[(r + c) % len(LAT_WORDS)]}</td>")
            else:
                word = CYR_WORDS[(r * n_cols + c) % len(CYR_WORDS)]
                cells.append(f"<td>{word} {r}{c}</td>")
        parts.append("<tr>" + "".join(cells) + "</tr>")
    parts.append("</table>")
    return "".join(parts)


def make_page_html(page_index: int, table_count: int) -> str:
    words = " ".join(f"слово{page_index}w{k}" for k in range(12))
    parts = [f"<h1>Статья {page_index:04d}</h1><p>{words}</p>"]
    for t in range(table_count):
        parts.append(f"<h2>Раздел {t}</h2><p>перед таблицей {t} текст</p>")
        parts.append(make_table_html(page_index, t))
        parts.append(f"<p>после таблицы {t} текст</p>")
    return "".join(parts)


def make_fixture_pages(n: int) -> dict[int, tuple[str, str]]:
    """page_id -> (title, html) with the planted table distribution."""
    ids = fixture_page_ids(n)
    pages = {}
    for i in range(n):
        count = TABLE_PATTERN[i % len(TABLE_PATTERN)]
        pages[ids[i]] = (f"Статья {i:04d}", make_page_html(i, count))
    return pages


def planted_table_count(n: int) -> int:
    return sum(TABLE_PATTERN[i % len(TABLE_PATTERN)] for i in range(n))


def pages_as_dump_triples(pages: dict[int, tuple[str, str]]) -> list[tuple[int, str, str]]:
    return [(pid, title, html) for pid, (title, html) in sorted(pages.items())]


# -- random span tables for the grid property test ---------------------------


def random_span_table(rng: random.Random):
    """Abstract table: rows of (text, is_header, rowspan, colspan)."""
    n_rows = rng.randint(1, 6)
    rows = []
    for r in range(n_rows):
        n_cells = rng.randint(0 if n_rows > 1 else 1, 5)
        row = []
        for c in range(n_cells):
            text = f"c{r}x{c}" if rng.random() < 0.8 else f"яч{r}{c}"
            rowspan = rng.choice([1, 1, 1, 2, 3])
            colspan = rng.choice([1, 1, 1, 2, 3])
            row.append((text, rng.random() < 0.2, rowspan, colspan))
        rows.append(row)
    if not any(rows):
        rows[0] = [("solo", False, 1, 1)]
    return rows


def span_table_to_html(rows) -> str:
    parts = ["<table>"]
    for row in rows:
        parts.append("<tr>")
        for text, is_header, rowspan, colspan in row:
            tag = "th" if is_header else "td"
            attrs = ""
            if rowspan != 1:
                attrs += f' rowspan="{rowspan}"'
            if colspan != 1:
                attrs += f' colspan="{colspan}"'
            parts.append(f"<{tag}{attrs}>{text}</{tag}>")
        parts.append("</tr>")
    parts.append("</table>")
    return "".join(parts)
