from __future__ import annotations

import pytest
from hypothesis import strategies as st

from aalpha_pm.graph import Graph

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 12, connected: bool = False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, b in zip(pairs, bits) if b]
    if connected:
        # a random spanning path keeps the graph connected
        order = draw(st.permutations(range(n)))
        edges += [(min(a, b), max(a, b)) for a, b in zip(order, order[1:])]
    return Graph.from_edges(n, set(edges))


alphas = st.floats(min_value=0.0, max_value=0.99, allow_nan=False)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_RESULTS[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")

    return record
