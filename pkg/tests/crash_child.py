"""Subprocess helper: run a crawl and hard-kill it at an injected point.

Usage: python crash_child.py <job-config-json> <mode>

Modes:
  event:<hook_event>:<n>   os._exit(7) when the nth hook event fires
  between_renames:<n>      crash after the nth table's CSV is committed
                           but before its JSON sidecar is renamed
  torn_checkpoint:<n>      crash after writing half of the nth checkpoint line

os._exit skips every cleanup path, so buffered data is genuinely lost,
like a kill -9.
"""

import json
import os
import sys
import threading

sys.path.insert(0, os.path.dirname(__file__))

from tablecorpus import store as store_mod
from tablecorpus.config import job_from_dict
from tablecorpus.controller import run_job

EXIT_CRASH = 7
EXIT_NO_TRIGGER = 3


def main() -> int:
    cfg = job_from_dict(json.loads(sys.argv[1]))
    mode, _, rest = sys.argv[2].partition(":")
    lock = threading.Lock()
    counter = {"n": 0}

    hooks = lambda event, **data: None  # noqa: E731

    if mode == "event":
        event_name, _, n_text = rest.partition(":")
        target = int(n_text)

        def hooks(event, **data):  # noqa: F811
            if event == event_name:
                with lock:
                    counter["n"] += 1
                    if counter["n"] == target:
                        os._exit(EXIT_CRASH)

    elif mode == "between_renames":
        target = int(rest)
        original_write = store_mod.CorpusStore.write_table

        def patched_write(self, table, meta, overwrite=False):
            with lock:
                counter["n"] += 1
                mine = counter["n"]
            if mine != target:
                return original_write(self, table, meta, overwrite)
            original_commit = self._stage_and_commit
            calls = {"n": 0}

            def sabotage(final, data):
                calls["n"] += 1
                if calls["n"] == 2:  # csv committed; die before the json rename
                    os._exit(EXIT_CRASH)
                return original_commit(final, data)

            self._stage_and_commit = sabotage
            return original_write(self, table, meta, overwrite)

        store_mod.CorpusStore.write_table = patched_write

    elif mode == "torn_checkpoint":
        target = int(rest)
        original_append = store_mod.CorpusStore._append_line

        def torn_append(self, payload):
            with lock:
                counter["n"] += 1
                mine = counter["n"]
            if mine != target:
                return original_append(self, payload)
            from tablecorpus.store import _crc

            line = f"{payload}\t{_crc(payload)}\n".encode("utf-8")
            with self._ckpt_lock:
                if self._ckpt_fh is None:
                    self.root.mkdir(parents=True, exist_ok=True)
                    self._ckpt_fh = open(self.checkpoint_path, "ab")
                self._ckpt_fh.write(line[: max(1, len(line) // 2)])
                self._ckpt_fh.flush()
                os.fsync(self._ckpt_fh.fileno())
            os._exit(EXIT_CRASH)

        store_mod.CorpusStore._append_line = torn_append

    else:
        print(f"unknown mode {mode}", file=sys.stderr)
        return 2

    handle = run_job(cfg, hooks=hooks)
    state = handle.join()
    return EXIT_NO_TRIGGER if state.phase == "finished" else 1


if __name__ == "__main__":
    sys.exit(main())
