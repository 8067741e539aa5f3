"""Shared graph builders, independent census oracles, and the acceptance
summary printer.

The oracles here deliberately use a different mechanism than the package:
censuses and girths are recomputed from integer powers of the directed-bond
adjacency (non-backtracking) matrix, so agreement is a genuine two-route
check.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from qge import Graph


def k5() -> Graph:
    edges = tuple((u, v) for u in range(5) for v in range(u + 1, 5))
    return Graph(n=5, d=4, edges=edges)


def petersen() -> Graph:
    edges = (
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
        (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
    )
    return Graph(n=10, d=3, edges=edges)


def cage46() -> Graph:
    """Incidence graph of the projective plane over GF(3): 4-regular,
    26 vertices, girth 6."""
    pts = []
    for x, y, z in itertools.product(range(3), repeat=3):
        if (x, y, z) == (0, 0, 0):
            continue
        for c in (x, y, z):
            if c != 0:
                inv = 1 if c == 1 else 2
                v = tuple((inv * t) % 3 for t in (x, y, z))
                break
        if v not in pts:
            pts.append(v)
    assert len(pts) == 13
    edges = []
    for i, p in enumerate(pts):
        for j, line in enumerate(pts):
            if sum(a * b for a, b in zip(p, line)) % 3 == 0:
                edges.append((i, 13 + j))
    return Graph(n=26, d=4, edges=tuple(sorted(edges)))


def k5_chain(m: int) -> Graph:
    """Chain of K5-based gadgets joined by bridge edges: 4-regular with a
    spectral gap shrinking in m."""
    edges = []

    def block(base, drop):
        for i in range(5):
            for j in range(i + 1, 5):
                if (i, j) in drop:
                    continue
                edges.append((base + i, base + j))

    for b in range(m):
        base = 5 * b
        if b in (0, m - 1):
            block(base, {(0, 1)})
        else:
            block(base, {(0, 1), (2, 3)})
    for b in range(m - 1):
        left, right = 5 * b, 5 * (b + 1)
        lstubs = (0, 1) if b == 0 else (2, 3)
        edges.append((left + lstubs[0], right))
        edges.append((left + lstubs[1], right + 1))
    return Graph(n=5 * m, d=4, edges=tuple(sorted(edges)))


# ---------------------------------------------------------------------------
# independent census oracles (integer matrix powers of the bond digraph)


def hashimoto_matrix(g: Graph) -> np.ndarray:
    bi = g.bond_index
    two_b = bi.num_directed
    h = np.zeros((two_b, two_b), dtype=np.int64)
    for b in range(two_b):
        for c in range(two_b):
            if bi.heads[b] == bi.tails[c] and c != bi.rev[b]:
                h[b, c] = 1
    return h


def _bool_powers(h: np.ndarray, t_max: int) -> list[np.ndarray]:
    """powers[l] = boolean reachability in exactly l non-backtracking steps."""
    two_b = h.shape[0]
    powers = [np.eye(two_b, dtype=bool)]
    cur = np.eye(two_b, dtype=np.int64)
    for _ in range(t_max):
        cur = (cur @ h > 0).astype(np.int64)
        powers.append(cur.astype(bool))
    return powers


def oracle_min_return(g: Graph, cap: int) -> list[int | None]:
    powers = _bool_powers(hashimoto_matrix(g), cap)
    two_b = 2 * g.B
    out: list[int | None] = [None] * two_b
    for b in range(two_b):
        for length in range(1, cap + 1):
            if powers[length][b, b]:
                out[b] = length
                break
    return out


def oracle_girth(g: Graph, cap: int = 12) -> int | None:
    h = hashimoto_matrix(g)
    cur = np.eye(h.shape[0], dtype=object)
    for length in range(1, cap + 1):
        cur = cur @ h
        if np.trace(cur) > 0:
            return length
    return None


def oracle_cycle_census(g: Graph, t: int) -> frozenset[int]:
    ret = oracle_min_return(g, t)
    return frozenset(e for e in range(g.B) if ret[e] is not None or ret[e + g.B] is not None)


def oracle_near_census(g: Graph, t: int) -> frozenset[int]:
    powers = _bool_powers(hashimoto_matrix(g), t)
    ret = oracle_min_return(g, 2 * t)
    two_b = 2 * g.B
    members = set()
    for t2 in range(2, t + 1):
        on_cycle = [b for b in range(two_b) if ret[b] is not None and ret[b] <= 2 * t2]
        if not on_cycle:
            continue
        t1 = t - t2
        for b0 in range(two_b):
            if b0 in members:
                continue
            for length in range(t1 + 1):
                if any(powers[length][b0, c] for c in on_cycle):
                    members.add(b0)
                    break
    return frozenset(members)


# ---------------------------------------------------------------------------
# acceptance summary printing

ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    ACCEPTANCE_RESULTS.append((name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{outcome:>6}  {name}")


@pytest.fixture(scope="session")
def k5_graph():
    return k5()


@pytest.fixture(scope="session")
def petersen_graph():
    return petersen()


@pytest.fixture(scope="session")
def cage_graph():
    return cage46()
