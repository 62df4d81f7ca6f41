#!/usr/bin/env python3
"""One-command demo: fixture wiki -> crawl -> statistics report.

Usage: python scripts/demo_end_to_end.py [corpus_dir]
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fixture_pages import make_fixture_pages
from mockwiki import MockWiki

from tablecorpus.config import JobConfig, SourceConfig
from tablecorpus.controller import run_job
from tablecorpus.stats import compute_stats, render_stats_lines, write_reports


def main() -> int:
    root = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="democorpus-")
    pages = make_fixture_pages(100)
    with MockWiki(pages) as wiki:
        cfg = JobConfig(
            corpus_root=str(root),
            snapshot_date="2021-09-13",
            source=SourceConfig(
                api_base_url=wiki.api_url,
                site_base_url=wiki.site_url,
                min_request_interval=0,
            ),
            worker_count=4,
        )
        print(f"crawling 100 fixture pages from {wiki.api_url} ...")
        state = run_job(cfg).join()
        print(f"job {state.phase}: {state.pages_done} pages")
    for line in render_stats_lines(compute_stats(root)):
        print(line)
    reports = write_reports(root)
    print(f"corpus in {root}; reports in {reports}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
