import sys
from fractions import Fraction

import pytest

from qgw.rmat import SeriesId, build_R


@pytest.fixture(scope="session")
def rdata_cache():
    cache = {}

    def get(series, rank):
        key = (series, rank)
        if key not in cache:
            cache[key] = build_R(SeriesId(series, rank))
        return cache[key]

    return get


def fraction_rank(rows):
    """Plain Gaussian elimination over Q; independent of the library's elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
