"""Collects one verdict line per acceptance criterion for the run summary."""

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    prev = RESULTS.get(n)
    if prev is not None:
        ok = ok and prev[0]
        detail = prev[1] + "; " + detail
    RESULTS[n] = (ok, detail)
