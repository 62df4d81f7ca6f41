"""Toolkit for building table corpora from MediaWiki sites.

Crawls a live wiki through its API (or streams an offline HTML dump),
extracts every table together with its metadata and textual context,
applies configurable language filters, and stores a queryable corpus of
CSV files with JSON sidecars.
"""

__version__ = "0.1.0"

from tablecorpus.config import FilterConfig, JobConfig, SourceConfig
from tablecorpus.models import (
    Cell,
    CellGrid,
    ExtractedTable,
    PageRef,
    RawPage,
    TableId,
    TableMetadata,
)

__all__ = [
    "Cell",
    "CellGrid",
    "ExtractedTable",
    "FilterConfig",
    "JobConfig",
    "PageRef",
    "RawPage",
    "SourceConfig",
    "TableId",
    "TableMetadata",
    "__version__",
]
