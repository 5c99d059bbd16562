import functools
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from derpic.witnesses import build_world  # noqa: E402

TRIPLES = [(2, 2, 1), (3, 2, 1), (2, 3, 1), (2, 2, 3), (3, 4, 1), (2, 1, 3)]
FIELDS = ["Q", "F2", "F3", "F5"]
GRID = [(n, m, t, F) for (n, m, t) in TRIPLES for F in FIELDS]


@functools.lru_cache(maxsize=None)
def world(n, m, t, field="Q"):
    return build_world(n, m, t, field)


VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for number, ok in sorted(VERDICTS):
            terminalreporter.write_line(f"criterion {number}: {'pass' if ok else 'fail'}")
