import math

import pytest

from liphom import (
    certify,
    check_expansion_props,
    exhaustive_lambda,
    gen_random_regular,
    goodness,
    spectral_lambda,
)
from liphom.expansion import bi_threshold, edge_count, lipschitz_threshold
from liphom.graphs import GraphError

from .conftest import c4, k33, k4, kmm, q3


def test_edge_count_k4():
    g = k4()
    assert edge_count(g, {0, 1}, {2, 3}) == 4
    assert edge_count(g, {0}, {0}) == 0
    assert edge_count(g, {0, 1}, {0, 1}) == 2  # ordered pairs (0,1) and (1,0)


def test_exhaustive_lambda_k4():
    # K4 spectrum is {3, -1, -1, -1}; the mixing-lemma sup is attained at
    # |S| = |T| = 2 disjoint: |e - (3/4)*4| = 1, 1/sqrt(4) ... scan exactly
    g = k4()
    lam = exhaustive_lambda(g)
    # oracle: direct scan over all subset pairs
    best = 0.0
    n, d = 4, 3
    subsets = [
        {v for v in range(4) if (mask >> v) & 1} for mask in range(1, 16)
    ]
    for s in subsets:
        for t in subsets:
            e = edge_count(g, s, t)
            best = max(best, abs(e - d * len(s) * len(t) / n) / math.sqrt(len(s) * len(t)))
    assert lam == pytest.approx(best)


def test_spectral_lambda_k4():
    # second-largest |eigenvalue| of K4 is 1
    assert spectral_lambda(k4()) == pytest.approx(1.0, abs=1e-6)


def test_spectral_lambda_kmm_zero():
    # complete bipartite biadjacency is rank one: second singular value 0
    assert spectral_lambda(k33(), "bipartite") == pytest.approx(0.0, abs=1e-6)
    assert exhaustive_lambda(k33(), "bipartite") == pytest.approx(0.0)


def test_exhaustive_le_spectral_small():
    for seed in range(10):
        g = gen_random_regular(8, 3, seed)
        assert exhaustive_lambda(g) <= spectral_lambda(g) + 1e-9


def test_exhaustive_forced_lower_bounds():
    # general mode: lam >= d/n and lam >= sqrt(d)(1 - d/n)
    for seed in range(5):
        g = gen_random_regular(8, 3, seed)
        lam = exhaustive_lambda(g)
        d, n = 3, 8
        assert lam >= d / n - 1e-12
        assert lam >= math.sqrt(d) * (1 - d / n) - 1e-12
        assert lam >= 0.5


def test_exhaustive_guard():
    g = gen_random_regular(20, 3, 0)
    with pytest.raises(GraphError):
        exhaustive_lambda(g)


def test_goodness_thresholds():
    # d=3, M=1: threshold 3/(64 ln 81) ~ 0.010668
    assert lipschitz_threshold(3, 1) == pytest.approx(3 / (64 * math.log(81)))
    assert bi_threshold(3) == pytest.approx(3 / (300 * math.log(3)))
    assert goodness(3, 0.005, 1) == {"M-good(1)": True, "good-bi": True}
    assert goodness(3, 0.5, 1) == {"M-good(1)": False, "good-bi": False}
    assert goodness(3, 0.0) == {"good-bi": True}


def test_certify_k4():
    rep = certify(k4(), M=1)
    assert rep.d == 3 and rep.n == 4 and rep.mode == "general"
    assert rep.lambda_exhaustive <= rep.lambda_spectral + 1e-9
    assert rep.predicates["M-good(1)"] is False


def test_certify_bipartite():
    rep = certify(k33())
    assert rep.mode == "bipartite" and rep.n == 3
    assert rep.predicates["good-bi"] is True


def test_props_exhaustive_small():
    for g, mode in ((k4(), "general"), (c4(), "bipartite"), (q3(), "bipartite")):
        lam = exhaustive_lambda(g, mode)
        checks = check_expansion_props(g, lam, mode)
        for name, c in checks.items():
            assert c.passed, (name, c.witness)


def test_props_lambda_zero_bipartite():
    checks = check_expansion_props(kmm(4), 0.0, "bipartite")
    for name, c in checks.items():
        assert c.passed, (name, c.witness)
    assert "not applicable" in checks["diameter"].note
