"""Command-line interface: crawl, stats, search, refilter, serve.

Exit codes: 0 success, 1 operational error, 2 usage error. Every job,
filter, and query field is exposed as a flag; --config loads a JSON job
file and explicit flags override it.
"""

from __future__ import annotations

import json
import sys
import time

import click

from tablecorpus import __version__, stats as stats_mod
from tablecorpus.api import BIND_ENV, STATE_DIR_ENV, serve as serve_service
from tablecorpus.config import job_from_dict, load_job_file, merge_config
from tablecorpus.controller import (
    PHASE_FAILED,
    PHASE_FINISHED,
    refilter as run_refilter,
    run_job,
)
from tablecorpus.errors import ToolkitError, ValidationError

USAGE_ERROR = 2


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
@click.version_option(__version__)
def main():
    """Build and query table corpora from MediaWiki sites."""


def _source_options(fn):
    options = [
        click.option("--api-base-url", "--api-url", "api_base_url", default=None,
                     help="MediaWiki api.php endpoint (crawl the live wiki)."),
        click.option("--dump-path", "--dump", "dump_path", default=None,
                     help="Rendered-HTML dump (directory or tar) to read instead."),
        click.option("--site-base-url", default=None,
                     help="Base site URL for metadata page links."),
        click.option("--max-concurrent-requests", type=int, default=None),
        click.option("--min-request-interval", type=int, default=None,
                     help="Minimum ms between request starts."),
        click.option("--max-retries", type=int, default=None),
        click.option("--backoff-base", type=int, default=None,
                     help="Base retry delay in ms (doubles per attempt)."),
        click.option("--user-agent", default=None),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _filter_options(fn):
    options = [
        click.option("--min-cyrillic-ratio", type=float, default=None),
        click.option("--drop-latin-only-columns", is_flag=True, default=None),
        click.option("--drop-numeric-only-columns", is_flag=True, default=None),
        click.option("--drop-mostly-null-rows", is_flag=True, default=None),
        click.option("--drop-mostly-null-columns", is_flag=True, default=None),
        click.option("--null-threshold", type=float, default=None),
        click.option("--min-rows", type=int, default=None),
        click.option("--min-cols", type=int, default=None),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _collect(prefix_fields: dict, **kwargs) -> dict:
    return {k: v for k, v in kwargs.items() if v is not None and k in prefix_fields}


_SOURCE_FIELDS = {
    "api_base_url", "dump_path", "site_base_url", "max_concurrent_requests",
    "min_request_interval", "max_retries", "backoff_base", "user_agent",
}
_FILTER_FIELDS = {
    "min_cyrillic_ratio", "drop_latin_only_columns", "drop_numeric_only_columns",
    "drop_mostly_null_rows", "drop_mostly_null_columns", "null_threshold",
    "min_rows", "min_cols",
}


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON job config; flags override it.")
@click.option("--corpus-root", default=None, help="Corpus output directory.")
@click.option("--snapshot-date", default=None, help="Snapshot label, e.g. 2021-09-13.")
@click.option("--chunk-count", "--chunks", type=int, default=None)
@click.option("--chunk-index", "--chunk", type=int, default=None)
@click.option("--worker-count", "--workers", type=int, default=None)
@_source_options
@_filter_options
@click.option("--quiet", is_flag=True, help="No progress bar.")
def crawl(config_path, corpus_root, snapshot_date, chunk_count, chunk_index,
          worker_count, quiet, **kwargs):
    """Crawl (or read a dump) into a corpus, resuming from any checkpoint."""
    overrides = {
        "corpus_root": corpus_root,
        "snapshot_date": snapshot_date,
        "chunk_count": chunk_count,
        "chunk_index": chunk_index,
        "worker_count": worker_count,
        "source": _collect(_SOURCE_FIELDS, **kwargs),
        "filters": _collect(_FILTER_FIELDS, **kwargs),
    }
    try:
        if config_path:
            cfg = load_job_file(config_path, overrides)
        else:
            cfg = job_from_dict(merge_config({}, overrides))
    except ToolkitError as exc:
        raise click.UsageError(str(exc))

    try:
        handle = run_job(cfg)
    except ToolkitError as exc:
        _fail(str(exc))
    try:
        while handle.is_active():
            if not quiet:
                _render_progress(handle.state())
            time.sleep(0.2)
    except KeyboardInterrupt:
        click.echo("\npausing (draining in-flight pages)...", err=True)
        handle.pause()
        click.echo("paused; rerun the same command to resume.", err=True)
        sys.exit(1)
    state = handle.join()
    if not quiet:
        _render_progress(state)
        click.echo("")
    if state.phase == PHASE_FAILED:
        _fail(state.error or "job failed")
    click.echo(f"{state.phase}: {state.pages_done} pages in {cfg.corpus_root}")


def _render_progress(state) -> None:
    total = state.pages_total
    if total is None:
        sys.stderr.write("\rlisting page titles...")
        sys.stderr.flush()
        return
    done = state.pages_done
    width = 30
    filled = int(width * done / total) if total else width
    bar = "#" * filled + "-" * (width - filled)
    avg = f"{state.avg_page_seconds:.2f}s/page" if state.avg_page_seconds else "-"
    eta = f"{state.eta_seconds:.0f}s" if state.eta_seconds is not None else "-"
    left = state.pages_left if state.pages_left is not None else "-"
    sys.stderr.write(f"\r[{bar}] {done}/{total} pages, {left} left, {avg}, ETA {eta}   ")
    sys.stderr.flush()


@main.command()
@click.option("--corpus-root", required=True)
@click.option("--top-n", type=int, default=10, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Print raw JSON stats.")
def stats(corpus_root, top_n, as_json):
    """Compute corpus statistics and write report files."""
    try:
        result = stats_mod.compute_stats(corpus_root)
        reports = stats_mod.write_reports(corpus_root, top_n=top_n)
    except ToolkitError as exc:
        _fail(str(exc))
    if as_json:
        click.echo(json.dumps(result.to_json_dict(), ensure_ascii=False, indent=2))
    else:
        for line in stats_mod.render_stats_lines(result):
            click.echo(line)
        click.echo(f"reports written to {reports}")


@main.command()
@click.option("--corpus-root", required=True)
@click.option("--title-substring", default=None)
@click.option("--caption-substring", default=None)
@click.option("--min-rows", type=int, default=None)
@click.option("--max-rows", type=int, default=None)
@click.option("--min-cols", type=int, default=None)
@click.option("--max-cols", type=int, default=None)
@click.option("--has-numeric-column", type=bool, default=None)
@click.option("--limit", type=int, default=20, show_default=True)
@click.option("--offset", type=int, default=0)
@click.option("--json", "as_json", is_flag=True)
def search(corpus_root, as_json, **kwargs):
    """Search stored table metadata (works fully offline)."""
    q = stats_mod.QuerySpec(**kwargs)
    try:
        q.validate()
    except ValidationError as exc:
        raise click.UsageError(str(exc))
    try:
        result = stats_mod.search(corpus_root, q)
    except ToolkitError as exc:
        _fail(str(exc))
    if as_json:
        payload = {
            "items": [m.to_json_dict() for m in result.items],
            "total_matches": result.total_matches,
        }
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))
        return
    click.echo(f"{result.total_matches} match(es)")
    for meta in result.items:
        cap = f" caption={meta.caption!r}" if meta.caption else ""
        click.echo(
            f"  {meta.table_id.page_id}_{meta.table_id.offset}  "
            f"{meta.n_rows}x{meta.n_cols}  {meta.page_title}{cap}"
        )


@main.command()
@click.option("--corpus-root", required=True, help="Source (vanilla) corpus.")
@click.option("--out", "dest_root", required=True, help="Derived corpus directory.")
@_filter_options
def refilter(corpus_root, dest_root, **kwargs):
    """Re-apply filters to a stored corpus, producing a derived corpus."""
    from tablecorpus.config import filters_from_dict

    try:
        filters = filters_from_dict(_collect(_FILTER_FIELDS, **kwargs))
        summary = run_refilter(corpus_root, dest_root, filters)
    except ToolkitError as exc:
        _fail(str(exc))
    click.echo(
        f"kept {summary['tables_kept']}/{summary['tables_seen']} tables "
        f"({summary['tables_dropped']} dropped) -> {dest_root}"
    )


@main.command()
@click.option("--bind", envvar=BIND_ENV, default="127.0.0.1:8734", show_default=True)
@click.option("--state-dir", envvar=STATE_DIR_ENV, default="./tablecorpus-state",
              show_default=True)
def serve(bind, state_dir):
    """Run the HTTP service (and web UI, when built) until interrupted."""
    try:
        serve_service(bind, state_dir)
    except ToolkitError as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
