#!/usr/bin/env python3
"""Serve a deterministic fixture wiki on localhost for demos and UI work.

Usage: python scripts/run_mock_wiki.py [--pages N] [--delay SECONDS]

Prints the api.php URL; point `tablecorpus crawl --api-url ...` or a
POST /jobs body at it.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fixture_pages import make_fixture_pages, planted_table_count
from mockwiki import MockWiki


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pages", type=int, default=200)
    parser.add_argument("--delay", type=float, default=0.05,
                        help="per-request delay, so progress is watchable")
    args = parser.parse_args()

    pages = make_fixture_pages(args.pages)
    wiki = MockWiki(pages, page_delay=args.delay).start()
    print(f"mock wiki: {args.pages} pages, {planted_table_count(args.pages)} tables")
    print(f"api url:   {wiki.api_url}")
    print(f"site url:  {wiki.site_url}")
    print("Ctrl-C to stop")
    try:
        while True:
            time.sleep(1)
    except KeyboardInterrupt:
        wiki.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
