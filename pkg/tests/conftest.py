import random

import pytest
from hypothesis import HealthCheck, settings

from ncmorita.exact_core import QQ, GF, TruncLaurent, ClosedPoint, DvrLattice
from ncmorita import local_orders as lo

settings.register_profile("ncm", deadline=None, derandomize=True, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ncm")


@pytest.fixture
def F():
    return QQ


def poly(F, *c):
    return F.poly(list(c))


def series(F, floor, coeffs, prec=None):
    return TruncLaurent(F, floor, list(coeffs), prec)


def diag_matrix(F, entries, prec=None):
    """Square matrix of series with the given diagonal entries (series or scalars)."""
    n = len(entries)
    z = TruncLaurent.zero(F, prec)
    out = [[z] * n for _ in range(n)]
    for i, e in enumerate(entries):
        out[i] = list(out[i])
        out[i][i] = e if isinstance(e, TruncLaurent) else TruncLaurent.scalar(F, e, prec)
    return out


def compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def all_types(max_n=6):
    return [c for n in range(1, max_n + 1) for c in compositions(n)]


def rotations(parts):
    parts = tuple(parts)
    return {parts[i:] + parts[:i] for i in range(len(parts))}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, detail = RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
