"""Per-criterion outcomes, filled by the acceptance suite and printed at session end."""

RESULTS: dict = {}


def line(n: int) -> str:
    ok, secs, detail = RESULTS[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({secs:.1f}s) {detail}"
