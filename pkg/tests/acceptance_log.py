"""One pass/fail line per acceptance criterion, shown in the pytest terminal summary."""

import time
from contextlib import contextmanager

LINES = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Record PASS/FAIL with elapsed time; a criterion over its time limit fails."""
    t0 = time.perf_counter()
    notes = []
    try:
        yield notes
    except BaseException as exc:
        dt = time.perf_counter() - t0
        line = f"criterion {number} FAIL  {title} ({dt:.2f}s / {limit:g}s): {type(exc).__name__}: {exc}"
        LINES.append(line)
        print(line)
        raise
    dt = time.perf_counter() - t0
    ok = dt < limit
    extra = f" [{'; '.join(notes)}]" if notes else ""
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}  {title} ({dt:.2f}s / {limit:g}s){extra}"
    LINES.append(line)
    print(line)
    assert ok, line
