#!/usr/bin/env python3
"""Start a mock wiki plus the HTTP service for UI development and tests.

Prints one JSON line with the endpoints once everything is listening:

    {"service": "http://127.0.0.1:PORT", "wiki_api": "...", "wiki_site": "...",
     "state_dir": "...", "corpus_root": "..."}

Runs until killed. Options: --pages N --delay SECONDS --state-dir DIR
"""

import argparse
import json
import socket
import sys
import tempfile
import threading
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import uvicorn

from fixture_pages import make_fixture_pages
from mockwiki import MockWiki

from tablecorpus.api import create_app


def free_port() -> int:
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    return port


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pages", type=int, default=120)
    parser.add_argument("--delay", type=float, default=0.03)
    parser.add_argument("--state-dir", default=None)
    args = parser.parse_args()

    state_dir = Path(args.state_dir or tempfile.mkdtemp(prefix="tablecorpus-ui-"))
    corpus_root = state_dir / "corpus"

    wiki = MockWiki(make_fixture_pages(args.pages), page_delay=args.delay).start()
    port = free_port()
    config = uvicorn.Config(
        create_app(state_dir), host="127.0.0.1", port=port, log_level="warning"
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.02)

    print(
        json.dumps(
            {
                "service": f"http://127.0.0.1:{port}",
                "wiki_api": wiki.api_url,
                "wiki_site": wiki.site_url,
                "state_dir": str(state_dir),
                "corpus_root": str(corpus_root),
            }
        ),
        flush=True,
    )
    try:
        while True:
            time.sleep(1)
    except KeyboardInterrupt:
        pass
    finally:
        server.should_exit = True
        wiki.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
