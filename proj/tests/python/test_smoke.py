import json
import math
import pathlib

import numpy as np
import pytest

import pragrank

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "fixtures"


def test_metrics_hand_cases():
    truth = ["a", "b", "c", "d", "e"]
    assert pragrank.map_at_k(truth, truth) == 1.0
    assert pragrank.map_at_k(["a", "d", "b", "c", "e"], truth) == pytest.approx(0.805556, abs=1e-6)
    grades = {"a": 3, "b": 2, "c": 1, "d": 0}
    assert pragrank.ndcg_at_p(["b", "a", "c", "d"], grades) == pytest.approx(0.842833, abs=1e-5)
    assert pragrank.relevance_grades(["x", "y", "z"]) == {"x": 10, "y": 9, "z": 8}


def test_errors_map_to_python_exceptions():
    with pytest.raises(pragrank.ValidationError):
        pragrank.map_at_k(["a", "b", "c"], ["a", "b", "d"])
    with pytest.raises(ValueError):
        pragrank.corpus_stats("1\tword\t_\tNOTATAG\n\n")


def test_corpus_stats_and_lcr():
    rows = [("I", "PRON"), ("see", "VERB"), ("it", "PRON"), (".", "PUNCT")]
    conllu = "".join(f"{i}\t{w}\t_\t{t}\t_\t_\t_\t_\t_\t_\n" for i, (w, t) in enumerate(rows, 1)) + "\n"
    stats = pragrank.corpus_stats(conllu, "en")
    assert stats["tokens"] == 4
    assert stats["ptr"] == 0.5
    assert stats["vtr"] == 0.25
    pron, verb = pragrank.lcr(conllu, conllu)
    assert pron == 1.0 and verb == 1.0


def test_pmi_and_ltq_normalize():
    scores = dict(pragrank.pmi3_scores("a b a b c\n", order=2, min_count=1))
    assert scores["a b"] == pytest.approx(math.log(0.78125), abs=1e-12)
    z = pragrank.ltq_normalize({"a": 1.0, "b": 2.0, "c": 3.0, "d": None})
    assert z["d"] is None
    assert z["c"] == pytest.approx(1.224745, abs=1e-6)


def test_procrustes_recovers_rotation():
    rng = np.random.default_rng(0)
    q, r = np.linalg.qr(rng.normal(size=(20, 20)))
    rot = q * np.sign(np.diag(r))
    x = rng.normal(size=(80, 20))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    w = pragrank.procrustes(x, x @ rot.T)
    assert np.abs(w - rot).max() < 1e-8


def test_network_and_pearson():
    dist = {}
    langs = [f"l{i}" for i in range(8)]
    for i, a in enumerate(langs):
        for j, b in enumerate(langs):
            if a != b:
                dist[(a, b)] = 0.1 if i // 4 == j // 4 else 0.9
    edges = pragrank.knn_edges(dist, 2)
    areas = {l: f"area{i // 4}" for i, l in enumerate(langs)}
    assert pragrank.within_area_fraction(edges, areas) == 1.0
    assert pragrank.pearson([1, 2, 3, 4], [2, 4, 6, 8]) == pytest.approx(1.0, abs=1e-12)
    assert pragrank.pearson([1, 2, 3], [5, 5, 5]) is None


def test_train_rank_and_evaluate_on_fixture():
    features = (FIXTURES / "loo16" / "features.csv").read_text()
    zero_shot = (FIXTURES / "loo16" / "zero_shot.csv").read_text()
    model = pragrank.train(features, zero_shot, "langrank", trees=20)
    assert json.loads(model)["trees"]
    ranking = pragrank.rank(model, features, "en")
    assert len(ranking) == 15
    assert [s for _, s in ranking] == sorted((s for _, s in ranking), reverse=True)
    report = json.loads(pragrank.evaluate(features, zero_shot, "langrank", trees=20))
    assert len(report["folds"]) == 16
    assert report == json.loads(pragrank.evaluate(features, zero_shot, "langrank", trees=20, jobs=2))


def test_featurize_fixture(tmp_path):
    csv, warnings = pragrank.featurize(str(FIXTURES / "synthetic8" / "manifest.toml"), cache_dir=str(tmp_path))
    assert warnings == []
    assert csv.startswith("transfer,target,feature,value\n")
    assert len({tuple(line.split(",")[:2]) for line in csv.splitlines()[1:]}) == 56
