import json

import pytest

from liphom import graph_to_text, read_graph
from liphom.cli import main

from .conftest import k33, k4


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.txt"
    p.write_text(graph_to_text(k4()))
    return str(p)


@pytest.fixture
def k33_file(tmp_path):
    p = tmp_path / "k33.txt"
    p.write_text(graph_to_text(k33()))
    return str(p)


def test_gen_reproducible(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        assert main(["gen", "--type", "regular", "--n", "12", "--d", "3",
                     "--seed", "7", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    g = read_graph(str(a))
    assert g.degree == 3 and g.n == 12
    assert "seed=7" in a.read_text().splitlines()[0]


def test_gen_tree(tmp_path):
    out = tmp_path / "t.txt"
    assert main(["gen", "--type", "tree", "--d", "3", "--h", "2", "--out", str(out)]) == 0
    assert read_graph(str(out)).n == 10


def test_certify(k4_file, tmp_path, capsys):
    assert main(["certify", k4_file, "--M", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["d"] == 3
    assert payload["lambda_exhaustive"] <= payload["lambda_spectral"] + 1e-9
    assert payload["predicates"]["M-good(1)"] is False


def test_enumerate(k4_file, tmp_path):
    out = tmp_path / "en.txt"
    assert main(["enumerate", k4_file, "--mode", "lipschitz", "--M", "1",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert "count=15" in lines[0]
    assert len(lines) == 16


def test_sample_mcmc_deterministic(k4_file, tmp_path):
    outs = []
    for name in ("s1.txt", "s2.txt"):
        out = tmp_path / name
        assert main(["sample", "--sampler", "mcmc", "--graph", k4_file,
                     "--mode", "lipschitz", "--M", "1", "--burnin", "100",
                     "--thin", "5", "--n-samples", "20", "--seed", "3",
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert b"seed=3" in outs[0].splitlines()[0]


def test_sample_tree(tmp_path):
    out = tmp_path / "ts.txt"
    assert main(["sample", "--sampler", "tree", "--d", "3", "--h", "2",
                 "--n-samples", "5", "--seed", "1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 6
    for line in lines[1:]:
        vals = [int(x) for x in line.split()]
        assert len(vals) == 10
        assert vals[-6:] == [0] * 6  # leaves grounded


def test_phase(k33_file, tmp_path, capsys):
    f = tmp_path / "f.txt"
    f.write_text("\n".join("000111") + "\n")
    assert main(["phase", k33_file, str(f), "--mode", "hom",
                 "--lam-source", "exhaustive", "--vertices", "0,3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["k"] == 0 and payload["i_star"] == 0
    assert payload["deviation"]["0"] == 0
    assert payload["deviation"]["3"] == 1


def test_verify_transform(k4_file, capsys):
    assert main(["verify-transform", k4_file, "--mode", "lipschitz",
                 "--M", "1", "--v", "2", "--t", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["all_passed"] is True


def test_experiment_reproducible(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "kind = hom-exact\ngraph_type = complete_bipartite\nm = 2\n"
        "mode = hom\ntargets = all\nt_max = 2\nlambda_source = exhaustive\nseed = 5\n"
    )
    outs = []
    for name in ("r1.csv", "r2.csv"):
        out = tmp_path / name
        assert main(["experiment", str(cfg), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
        assert (tmp_path / (name + ".config")).exists()
    assert outs[0] == outs[1]
