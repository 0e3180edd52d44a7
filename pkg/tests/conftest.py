"""Shared fixtures: small named graphs and independent brute-force oracles.

The oracles here deliberately avoid the library's enumeration machinery:
they are plain assignment searches over explicit value ranges, used as
ground truth.
"""

from __future__ import annotations

import pytest

from liphom import build_graph


def k4():
    return build_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def c4():
    return build_graph(
        4, [(0, 1), (1, 2), (2, 3), (0, 3)], bipartition=([0, 2], [1, 3])
    )


def c6():
    return build_graph(
        6,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)],
        bipartition=([0, 2, 4], [1, 3, 5]),
    )


def k33():
    return build_graph(
        6,
        [(i, 3 + j) for i in range(3) for j in range(3)],
        bipartition=(range(3), range(3, 6)),
    )


def kmm(m: int):
    return build_graph(
        2 * m,
        [(i, m + j) for i in range(m) for j in range(m)],
        bipartition=(range(m), range(m, 2 * m)),
    )


def q3():
    edges = [
        (u, v)
        for u in range(8)
        for v in range(u + 1, 8)
        if bin(u ^ v).count("1") == 1
    ]
    even = [v for v in range(8) if bin(v).count("1") % 2 == 0]
    odd = [v for v in range(8) if bin(v).count("1") % 2 == 1]
    return build_graph(8, edges, bipartition=(even, odd))


@pytest.fixture
def graph_k4():
    return k4()


@pytest.fixture
def graph_c4():
    return c4()


@pytest.fixture
def graph_c6():
    return c6()


@pytest.fixture
def graph_k33():
    return k33()


@pytest.fixture
def graph_q3():
    return q3()


def brute_force_count(g, pins: dict[int, int], mode: str, M: int, radius: int) -> int:
    """Independent assignment search: vertices in index order, each value in
    [-radius, radius] unless pinned; constraints checked against assigned
    neighbors only.  Returns the number of valid assignments."""
    values = [None] * g.n
    for v, x in pins.items():
        values[v] = x

    order = [v for v in range(g.n) if v not in pins]

    def ok(v: int, x: int) -> bool:
        for w in g.adj[v]:
            y = values[w]
            if y is None:
                continue
            gap = abs(x - y)
            if mode == "lipschitz" and gap > M:
                return False
            if mode == "hom" and gap != 1:
                return False
        return True

    def rec(i: int) -> int:
        if i == len(order):
            return 1
        v = order[i]
        total = 0
        for x in range(-radius, radius + 1):
            if ok(v, x):
                values[v] = x
                total += rec(i + 1)
                values[v] = None
        return total

    return rec(0)


def brute_force_functions(g, pins: dict[int, int], mode: str, M: int, radius: int):
    """Same search, returning the set of value tuples."""
    values = [None] * g.n
    for v, x in pins.items():
        values[v] = x
    order = [v for v in range(g.n) if v not in pins]
    out = set()

    def ok(v: int, x: int) -> bool:
        for w in g.adj[v]:
            y = values[w]
            if y is None:
                continue
            gap = abs(x - y)
            if mode == "lipschitz" and gap > M:
                return False
            if mode == "hom" and gap != 1:
                return False
        return True

    def rec(i: int):
        if i == len(order):
            out.add(tuple(values))
            return
        v = order[i]
        for x in range(-radius, radius + 1):
            if ok(v, x):
                values[v] = x
                rec(i + 1)
                values[v] = None

    rec(0)
    return out
