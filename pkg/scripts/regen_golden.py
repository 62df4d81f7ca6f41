#!/usr/bin/env python3
"""Regenerate the golden extraction outputs from the fixture pages.

Run after an intentional extraction-behavior change, then review the
diff carefully: the goldens are the frozen contract.

Usage: python scripts/regen_golden.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import golden_util


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        store = golden_util.extract_fixture_corpus(Path(tmp))
        produced = golden_util.table_files(Path(tmp))
        dest = golden_util.GOLDEN_TABLES_DIR
        if dest.exists():
            shutil.rmtree(dest)
        for rel, data in produced.items():
            target = dest / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(data)
        print(f"wrote {len(produced)} golden files to {dest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
