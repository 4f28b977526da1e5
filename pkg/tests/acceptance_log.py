"""Collects one pass/fail line per acceptance criterion."""
import time
from contextlib import contextmanager

LINES = []


@contextmanager
def primary(n: int, title: str):
    """Record PASS or FAIL for criterion n; details go in the yielded dict."""
    info = {}
    t = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        extra = ", ".join(f"{k}={v}" for k, v in info.items())
        line = (f"[PRIMARY {n:2d}] {'PASS' if ok else 'FAIL'}  {title}"
                f"  ({time.perf_counter() - t:.1f}s{', ' + extra if extra else ''})")
        LINES.append(line)
        print(line)
