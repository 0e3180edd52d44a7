"""Exact counting, marginals and sampling of grounded functions on complete
trees.

Counts depend only on depth, so the bottom-up pass keeps one value table per
level.  Tables hold exact Python integers; an optional log-domain mirror
(floats, logsumexp) covers arities where the exact route would be wasteful.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph, GraphError, gen_tree
from .heights import HeightFunction, homomorphism, lipschitz

__all__ = ["TreeDP", "tree_dp", "tree_sample"]


def _logsumexp(xs) -> float:
    xs = [x for x in xs if x != -math.inf]
    if not xs:
        return -math.inf
    m = max(xs)
    return m + math.log(sum(math.exp(x - m) for x in xs))


@dataclass(frozen=True)
class TreeDP:
    """Per-level subtree counts for grounded functions on the complete
    (d-1)-ary tree of height h.

    counts[j][x] is the number of grounded extensions of the subtree below a
    depth-j vertex carrying value x; window sums over a slope step are kept
    alongside.  mode is "lipschitz" (slope M) or "hom".
    """

    d: int
    h: int
    mode: str
    M: int | None
    counts: tuple[dict[int, int], ...]
    log_counts: tuple[dict[int, float], ...]

    @property
    def total(self) -> int:
        return sum(self.counts[0].values())

    @property
    def log_total(self) -> float:
        return _logsumexp(self.log_counts[0].values())

    def _slope(self) -> int:
        return self.M if self.mode == "lipschitz" else 1

    def _children(self, depth: int) -> int:
        return self.d if depth == 0 else self.d - 1

    def _upward(self, depth: int) -> tuple[dict[int, int], dict[int, int]]:
        """(g, S_out) for the top-down pass at ``depth``: g[x] counts the
        completions of everything outside the subtree of a depth-``depth``
        vertex with value x."""
        slope = self._slope()
        # depth 0: nothing outside the root's subtree, so weight 1 for every
        # attainable root value
        g = {x: 1 for x in self.counts[0]}
        for j in range(1, depth + 1):
            m = self._children(j - 1)
            # sibling factor: each of the parent's other children contributes
            # its window sum
            win_parent = _window_sums(self.counts[j], slope, self.mode)
            new_g: dict[int, int] = {}
            for p, gp in g.items():
                sib = win_parent.get(p, 0) ** (m - 1)
                if sib == 0:
                    continue
                for x in _compatible(p, slope, self.mode):
                    if x in self.counts[j]:
                        new_g[x] = new_g.get(x, 0) + gp * sib
            g = new_g
        return g

    def marginal(self, depth: int, x: int) -> Fraction:
        """Exact P(f(v) = x) for any vertex v at the given depth."""
        if not (0 <= depth <= self.h):
            raise GraphError("depth out of range")
        g = self._upward(depth)
        num = g.get(x, 0) * self.counts[depth].get(x, 0)
        return Fraction(num, self.total)

    def tail_probability(self, depth: int, threshold: int) -> Fraction:
        """Exact P(|f(v)| > threshold) at the given depth."""
        g = self._upward(depth)
        num = sum(
            gx * self.counts[depth].get(x, 0)
            for x, gx in g.items()
            if abs(x) > threshold
        )
        return Fraction(num, self.total)

    def log_tail_probability(self, depth: int, threshold: int) -> float:
        """log P(|f(v)| > threshold) from the log-domain tables."""
        p = self.tail_probability(depth, threshold)
        if p == 0:
            return -math.inf
        return _log_of_fraction(p)

    def root_marginal(self, x: int) -> Fraction:
        return Fraction(self.counts[0].get(x, 0), self.total)


def _log_of_fraction(q: Fraction) -> float:
    # math.log handles arbitrary-size integers exactly enough (< 1e-15 rel)
    return math.log(q.numerator) - math.log(q.denominator)


def _compatible(p: int, slope: int, mode: str):
    if mode == "hom":
        return (p - 1, p + 1)
    return range(p - slope, p + slope + 1)


def _window_sums(table: dict[int, int], slope: int, mode: str) -> dict[int, int]:
    """out[p] = sum of table[y] over child values y compatible with parent
    value p."""
    out: dict[int, int] = {}
    keys = set()
    for y in table:
        for p in _compatible(y, slope, mode):
            keys.add(p)
    for p in keys:
        out[p] = sum(table.get(y, 0) for y in _compatible(p, slope, mode))
    return out


def tree_dp(d: int, h: int, mode: str = "lipschitz", M: int | None = 1) -> TreeDP:
    """Bottom-up exact DP over value tables; one table per level."""
    if d < 3 or h < 1:
        raise GraphError("need d >= 3 and h >= 1")
    if mode == "lipschitz" and (M is None or M < 1):
        raise ValueError("lipschitz mode needs a positive M")
    if mode == "hom":
        M = None
    slope = M if mode == "lipschitz" else 1

    counts: list[dict[int, int]] = [dict() for _ in range(h + 1)]
    counts[h] = {0: 1}
    for j in range(h - 1, -1, -1):
        m = d if j == 0 else d - 1
        win = _window_sums(counts[j + 1], slope, mode)
        counts[j] = {x: w**m for x, w in win.items() if w > 0}

    log_counts = tuple(
        {x: math.log(c) for x, c in table.items()} for table in counts
    )
    return TreeDP(
        d=d,
        h=h,
        mode=mode,
        M=M,
        counts=tuple(counts),
        log_counts=log_counts,
    )


def tree_sample(dp: TreeDP, seed: int, tree: Graph | None = None) -> HeightFunction:
    """Exact uniform grounded function, sampled top-down from the DP counts.

    The returned function lives on gen_tree(d, h) with its BFS numbering;
    pass ``tree`` to reuse a prebuilt graph.  Deterministic per seed.
    """
    g = tree if tree is not None else gen_tree(dp.d, dp.h)
    rng = random.Random((seed, dp.d, dp.h, dp.mode, dp.M).__repr__())
    slope = dp.M if dp.mode == "lipschitz" else 1

    values = [0] * g.n

    def draw(table_items) -> int:
        items = sorted(table_items)
        total = sum(w for _, w in items)
        r = rng.randrange(total)
        acc = 0
        for x, w in items:
            acc += w
            if r < acc:
                return x
        raise AssertionError("weighted draw fell through")

    # depths from BFS numbering: root is 0, levels are contiguous
    from .graphs import distances_from

    depth = distances_from(g, g.root)
    values[g.root] = draw(dp.counts[0].items())
    order = sorted(range(g.n), key=lambda v: (depth[v], v))
    for v in order:
        jv = depth[v]
        for w in g.adj[v]:
            if depth[w] == jv + 1:
                if depth[w] == dp.h:
                    values[w] = 0
                    continue
                p = values[v]
                table = [
                    (y, dp.counts[jv + 1][y])
                    for y in _compatible(p, slope, dp.mode)
                    if y in dp.counts[jv + 1]
                ]
                values[w] = draw(table)
    # grounded functions are pinned at the leaves, not at the tree root;
    # designate the first leaf as the HeightFunction root
    v0 = min(g.leaves)
    if dp.mode == "hom":
        return homomorphism(values, v0)
    return lipschitz(values, v0, dp.M)
