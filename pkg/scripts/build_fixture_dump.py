#!/usr/bin/env python3
"""Build a rendered-HTML dump archive from the fixture wiki pages.

Usage: python scripts/build_fixture_dump.py out.tar.gz [--pages N]

Handy for trying the dump ingestion path without any network:
    tablecorpus crawl --dump out.tar.gz --corpus-root ./corpus
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fixture_pages import make_fixture_pages, pages_as_dump_triples

from tablecorpus.dumps import write_dump


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("dest")
    parser.add_argument("--pages", type=int, default=100)
    args = parser.parse_args()

    fmt = "dir"
    if args.dest.endswith((".tar.gz", ".tgz")):
        fmt = "tar.gz"
    elif args.dest.endswith(".tar"):
        fmt = "tar"
    pages = make_fixture_pages(args.pages)
    dest = write_dump(args.dest, pages_as_dump_triples(pages), fmt=fmt)
    print(f"wrote {args.pages}-page dump to {dest} ({fmt})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
