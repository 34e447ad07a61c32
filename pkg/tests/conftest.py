from __future__ import annotations

import itertools
from collections import deque

import pytest

from parwreath.enumeration import closure
from parwreath.structures import StructureKind, paper_generators

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def naive_closure(gens, k):
    """Plain-Python BFS over image tuples; independent of the compiled path."""
    ident = tuple(range(k))
    seen = {ident}
    queue = deque([ident])
    while queue:
        f = queue.popleft()
        for g in gens:
            h = tuple(g[v] for v in f)
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return seen


def all_maps(k):
    return itertools.product(range(k), repeat=k)


@pytest.fixture(scope="session")
def monoids22():
    """Closures of the x, y, alpha, beta generators at n = m = 2, keyed by kind."""
    return {kind: closure(paper_generators(2, 2, kind)) for kind in StructureKind}
