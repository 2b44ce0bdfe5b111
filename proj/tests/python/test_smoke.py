import pytest

import hpref

C1 = [0, 0, 1, 1]
C2 = [0, 0, 1, -1]
C3 = [0, 0, 0, 0]


def tiny():
    return hpref.ClusteringSet([C1, C2, C3], [{"name": "C1"}, {"name": "C2"}, {"name": "C3"}])


def test_tiny_trace():
    d = hpref.run_hpref(tiny(), max_leaves=3)
    assert [e.score for e in d.events] == [10, 4]
    assert d.multiplicities() == [4, 2]
    assert d.nodes[0].weight == 14
    m = hpref.induced_metric(d)
    assert m[0][1] == 4
    assert m[0][2] == m[1][2] == 14
    assert sorted(sorted(c) for c in hpref.cut(d, 2)) == [[0, 1], [2]]
    assert d.to_newick().startswith("(C3")


def test_json_round_trip():
    d = hpref.run_hpref(tiny(), max_leaves=3)
    text = d.to_json()
    back = hpref.Dendrogram.from_json(text)
    assert back == d
    assert back.to_json() == text
    with pytest.raises(ValueError):
        hpref.Dendrogram.from_json("{}")


def test_svg_coloring_must_be_a_cut():
    d = hpref.run_hpref(tiny(), max_leaves=3)
    assert d.to_svg().count('class="join"') == 2
    with pytest.raises(ValueError):
        d.to_svg([[0, 2], [1]])


def test_iris_pipeline():
    s = hpref.preset_clusterings("iris", workers=2)
    assert len(s) == 200
    d = hpref.run_hpref(s, max_leaves=7)
    assert d.sample_mode == "full"
    assert d.multiplicities() == [1170, 349, 240, 273, 226, 251]
    assert sorted(len(c) for c in hpref.cut(d, 3)) == [4, 78, 118]
    _, ratios = hpref.pca2(s, centered=False)
    assert abs(sum(ratios) - 0.78) <= 0.02


def test_adjusted_rand():
    assert hpref.adjusted_rand([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5)
    assert hpref.adjusted_rand(C2, C2) == 1.0
    a, b = [0, -1, -1, 1], [0, 1, 1, 1]
    assert hpref.adjusted_rand(a, b, noise="cluster") != hpref.adjusted_rand(a, b)


def test_dbscan_and_sampling():
    assert hpref.dbscan([[0.0], [0.1], [0.2], [5.0]], 0.15, 2) == [0, 0, 0, -1]
    s = hpref.preset_clusterings("toy")
    a = hpref.run_hpref(s, max_leaves=4, pairs=60, seed=9)
    b = hpref.run_hpref(s, max_leaves=4, pairs=60, seed=9, workers=3)
    assert a == b
    assert a.sample_mode == "sampled" and a.sample_pairs == 60 and a.sample_seed == 9


def test_file_round_trip(tmp_path):
    path = str(tmp_path / "tiny.set")
    hpref.write_clusterings(tiny(), path)
    back = hpref.read_clusterings(path)
    assert back == tiny()
    assert back.labels(1) == C2
    assert back.provenance(0) == {"name": "C1"}
    (tmp_path / "bad.set").write_text("hpref-clusterings 1\nN 4 S 1\n@ {}\n0 0 1\n")
    with pytest.raises(ValueError, match=":4:"):
        hpref.read_clusterings(str(tmp_path / "bad.set"))
    with pytest.raises(OSError):
        hpref.read_clusterings(str(tmp_path / "missing.set"))
