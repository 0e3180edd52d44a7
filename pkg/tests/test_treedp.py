import math
from fractions import Fraction

import pytest

from liphom import enumerate_functions, gen_tree, tree_dp, tree_sample, validate
from liphom.graphs import distances_from


def test_totals_small():
    assert tree_dp(3, 2, "lipschitz", 1).total == 45
    assert tree_dp(4, 2, "lipschitz", 1).total == 115


def test_root_marginal():
    dp = tree_dp(3, 2, "lipschitz", 1)
    assert dp.root_marginal(0) == Fraction(27, 45) == Fraction(3, 5)
    assert dp.root_marginal(1) == Fraction(8, 45)
    assert dp.root_marginal(2) == Fraction(1, 45)
    assert sum(dp.root_marginal(x) for x in range(-2, 3)) == 1


def test_marginals_sum_to_one_all_depths():
    dp = tree_dp(3, 3, "lipschitz", 1)
    for depth in range(4):
        total = sum(dp.marginal(depth, x) for x in range(-4, 5))
        assert total == 1


def test_value_support_invariant():
    dp = tree_dp(3, 3, "lipschitz", 2)
    for j, table in enumerate(dp.counts):
        dist_leaf = dp.h - j
        assert all(abs(x) <= 2 * dist_leaf for x in table)
    dph = tree_dp(3, 3, "hom", None)
    for j, table in enumerate(dph.counts):
        dist_leaf = dph.h - j
        assert all(abs(x) <= dist_leaf and (x - dist_leaf) % 2 == 0 for x in table)


def test_dp_matches_enumeration():
    # glued-tree enumeration realizes the grounded family exactly
    for d, h, mode in ((3, 1, "lipschitz"), (3, 2, "lipschitz"), (3, 2, "hom")):
        M = 1 if mode == "lipschitz" else None
        gt = gen_tree(d, h, glued=True)
        res = enumerate_functions(gt, gt.glue, mode, M=M)
        dp = tree_dp(d, h, mode, M)
        assert res.count == dp.total
        # root marginal agreement (glued-tree vertex 0 is the tree root)
        for x in range(-h, h + 1):
            emp = Fraction(
                sum(1 for f in res.functions if f.values[0] == x), res.count
            )
            assert emp == dp.root_marginal(x)


def test_log_mirror_accuracy():
    dp = tree_dp(3, 3, "lipschitz", 1)
    assert math.isclose(dp.log_total, math.log(dp.total), rel_tol=1e-9)
    p = dp.tail_probability(0, 0)
    assert math.isclose(
        dp.log_tail_probability(0, 0),
        math.log(p.numerator) - math.log(p.denominator),
        rel_tol=1e-9,
    )


def test_tail_probability_monotone():
    dp = tree_dp(3, 3, "lipschitz", 1)
    probs = [dp.tail_probability(0, thr) for thr in range(0, 4)]
    assert all(a >= b for a, b in zip(probs, probs[1:]))
    assert probs[-1] == 0


def test_d56_exact_theorem_values():
    dp = tree_dp(56, 2, "lipschitz", 1)
    p = dp.tail_probability(0, 0)
    assert p == Fraction(2 * 2**56 + 2, 3**56 + 2 * 2**56 + 2)
    assert float(p) <= math.exp(-5.6)
    dp3 = tree_dp(56, 3, "lipschitz", 1)
    lp = dp3.log_tail_probability(0, 1)
    assert lp <= -56 * 55 / 10


def test_tree_sample_valid_and_deterministic():
    dp = tree_dp(3, 2, "lipschitz", 1)
    t = gen_tree(3, 2)
    f1 = tree_sample(dp, 7, t)
    f2 = tree_sample(dp, 7, t)
    assert f1.values == f2.values
    assert validate(t, f1) == []
    assert all(f1.values[v] == 0 for v in t.leaves)


def test_tree_sample_distribution():
    dp = tree_dp(3, 2, "lipschitz", 1)
    t = gen_tree(3, 2)
    counts = {}
    n = 3000
    for seed in range(n):
        f = tree_sample(dp, seed, t)
        counts[f.values] = counts.get(f.values, 0) + 1
    assert len(counts) == dp.total
    tv = 0.5 * sum(abs(c / n - 1 / dp.total) for c in counts.values())
    assert tv <= 0.1


def test_hom_tree_sample_parity():
    dp = tree_dp(3, 2, "hom", None)
    t = gen_tree(3, 2)
    f = tree_sample(dp, 1, t)
    depth = distances_from(t, t.root)
    for v in range(t.n):
        assert (f.values[v] - (dp.h - depth[v])) % 2 == 0


def test_preconditions():
    with pytest.raises(Exception):
        tree_dp(2, 2, "lipschitz", 1)
    with pytest.raises(Exception):
        tree_dp(3, 0, "lipschitz", 1)
    with pytest.raises(ValueError):
        tree_dp(3, 2, "lipschitz", 0)
