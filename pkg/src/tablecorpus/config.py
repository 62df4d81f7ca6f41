"""Dataclass configs for sources, filters, and crawl jobs.

The same field names are used in job config files, CLI flags, and HTTP
API bodies, so ``from_dict``/``to_dict`` here are the single
serialization path for all three surfaces.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from tablecorpus.errors import ConfigError

DEFAULT_USER_AGENT = "tablecorpus/0.1 (table corpus toolkit)"


@dataclass(frozen=True)
class SourceConfig:
    """Where pages come from: a live wiki API or an offline dump.

    Exactly one of ``api_base_url`` / ``dump_path`` must be set for a job.
    ``site_base_url`` is used to build canonical page URLs for metadata;
    when unset it is derived from ``api_base_url`` (dump jobs that want
    URLs in metadata must set it explicitly).
    """

    api_base_url: str | None = None
    dump_path: str | None = None
    site_base_url: str | None = None
    max_concurrent_requests: int = 2
    min_request_interval: int = 100  # milliseconds between request starts
    max_retries: int = 5
    backoff_base: int = 250  # milliseconds; delay = base * 2^attempt +/- 20%
    user_agent: str = DEFAULT_USER_AGENT

    def validate(self) -> None:
        if bool(self.api_base_url) == bool(self.dump_path):
            raise ConfigError(
                "exactly one of api_base_url / dump_path must be set"
            )
        if self.max_concurrent_requests < 1:
            raise ConfigError("max_concurrent_requests must be >= 1")
        if self.min_request_interval < 0:
            raise ConfigError("min_request_interval must be >= 0")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")
        if self.backoff_base < 0:
            raise ConfigError("backoff_base must be >= 0")

    def page_url(self, title: str) -> str:
        """Canonical /wiki/<title> URL for metadata; empty if no base known."""
        import urllib.parse

        base = self.site_base_url
        if base is None and self.api_base_url:
            # https://host/w/api.php -> https://host
            cut = self.api_base_url
            for suffix in ("/w/api.php", "/api.php"):
                if cut.endswith(suffix):
                    cut = cut[: -len(suffix)]
                    break
            base = cut
        if not base:
            return ""
        return base.rstrip("/") + "/wiki/" + urllib.parse.quote(title.replace(" ", "_"))


@dataclass(frozen=True)
class FilterConfig:
    """Language-customization knobs applied to every extracted table.

    The default config is the identity filter: nothing is dropped.
    """

    min_cyrillic_ratio: float = 0.0
    drop_latin_only_columns: bool = False
    drop_numeric_only_columns: bool = False
    drop_mostly_null_rows: bool = False
    drop_mostly_null_columns: bool = False
    null_threshold: float = 0.7
    min_rows: int = 0
    min_cols: int = 0

    def validate(self) -> None:
        if not 0.0 <= self.min_cyrillic_ratio <= 1.0:
            raise ConfigError("min_cyrillic_ratio must be in [0, 1]")
        if not 0.0 < self.null_threshold <= 1.0:
            raise ConfigError("null_threshold must be in (0, 1]")
        if self.min_rows < 0 or self.min_cols < 0:
            raise ConfigError("min_rows/min_cols must be >= 0")

    def is_identity(self) -> bool:
        return self == FilterConfig(null_threshold=self.null_threshold)


@dataclass(frozen=True)
class JobConfig:
    """One corpus-construction job: source, filters, chunking, output."""

    corpus_root: str
    source: SourceConfig
    snapshot_date: str = ""  # informational; live API always serves current revisions
    filters: FilterConfig = field(default_factory=FilterConfig)
    chunk_count: int = 1
    chunk_index: int = 0
    worker_count: int = 2

    def validate(self) -> None:
        if not self.corpus_root:
            raise ConfigError("corpus_root is required")
        self.source.validate()
        self.filters.validate()
        if self.chunk_count < 1:
            raise ConfigError("chunk_count must be >= 1")
        if not 0 <= self.chunk_index < self.chunk_count:
            raise ConfigError("chunk_index must be in [0, chunk_count)")
        if self.worker_count < 1:
            raise ConfigError("worker_count must be >= 1")


def _build(cls, data: dict[str, Any], where: str):
    known = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"unknown {where} field(s): {', '.join(sorted(unknown))}")
    return cls(**data)


def source_from_dict(data: dict[str, Any]) -> SourceConfig:
    return _build(SourceConfig, data, "source")


def filters_from_dict(data: dict[str, Any]) -> FilterConfig:
    return _build(FilterConfig, data, "filters")


def job_from_dict(data: dict[str, Any]) -> JobConfig:
    """Parse a job config document; raises ConfigError on bad shape."""
    if not isinstance(data, dict):
        raise ConfigError("job config must be a JSON object")
    data = dict(data)
    source = source_from_dict(data.pop("source", {}) or {})
    filters = filters_from_dict(data.pop("filters", {}) or {})
    cfg = _build(JobConfig, {**data, "source": source, "filters": filters}, "job")
    cfg.validate()
    return cfg


def job_to_dict(cfg: JobConfig) -> dict[str, Any]:
    return dataclasses.asdict(cfg)


def load_job_file(path: str | Path, overrides: dict[str, Any] | None = None) -> JobConfig:
    """Load a JSON job config file, with optional overrides (CLI wins).

    ``overrides`` uses the same nesting as the file; None values are
    ignored so unset CLI flags do not clobber file settings.
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read job config {path}: {exc}") from exc
    return job_from_dict(merge_config(raw, overrides or {}))


def merge_config(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged
