"""Brute-force span expander used as the independent grid oracle.

Works on the abstract cell lists (never on HTML) with a full occupancy
matrix keyed by absolute (row, column): each cell is placed at the first
free slot at or after the previous cell's end, covered positions are
written only where still free (first placed wins), rowspans are clipped
at the table bottom, and short rows are padded.
"""

from __future__ import annotations


def expand(rows: list[list[tuple[str, bool, int, int]]]):
    """rows: per <tr>, a list of (text, is_header, rowspan, colspan).

    Returns a rectangular matrix of (text, is_header, origin) triples,
    or None when the table has no cells at all.
    """
    n_rows = len(rows)
    occupied: dict[tuple[int, int], tuple[str, bool, str]] = {}
    width = 0

    for r, row in enumerate(rows):
        cursor = 0
        for text, is_header, rowspan, colspan in row:
            rowspan = 1 if not 1 <= rowspan <= 1000 else rowspan
            colspan = 1 if not 1 <= colspan <= 1000 else colspan
            while (r, cursor) in occupied:
                cursor += 1
            for dr in range(min(rowspan, n_rows - r)):
                for dc in range(colspan):
                    pos = (r + dr, cursor + dc)
                    if pos in occupied:
                        continue
                    origin = "real" if dr == 0 and dc == 0 else "span_copy"
                    occupied[pos] = (text, is_header, origin)
            width = max(width, cursor + colspan)
            cursor += colspan

    if width == 0:
        return None
    return [
        [occupied.get((r, c), ("", False, "pad")) for c in range(width)]
        for r in range(n_rows)
    ]
