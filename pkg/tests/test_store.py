import pytest

from astopo import AsGraph, CorpusError, Snapshot
from astopo.store import read_snapshot, read_store, write_snapshot, write_store
from corpus_utils import write_path_file
from astopo.ingest import load_series


def test_snapshot_roundtrip(tmp_path):
    g = AsGraph.from_edges([(1, 2), (2, 3)])
    g.add_node(9999)
    snap = Snapshot(graph=g, date="2003-05", monitor_set="Set4", family="ipv6")
    path = tmp_path / "2003-05.edges"
    write_snapshot(path, snap)
    back = read_snapshot(path)
    assert back.date == "2003-05"
    assert back.monitor_set == "Set4"
    assert back.family == "ipv6"
    assert set(back.graph.nodes()) == {1, 2, 3, 9999}
    assert sorted(back.graph.edges()) == [(1, 2), (2, 3)]


def test_read_snapshot_requires_directives(tmp_path):
    path = tmp_path / "x.edges"
    path.write_text("1 2\n")
    with pytest.raises(CorpusError, match="date"):
        read_snapshot(path)


def test_store_roundtrip_preserves_series(tmp_path):
    corpus = tmp_path / "corpus"
    write_path_file(corpus, "2003-01", "m", "ipv6", ["1 2 3", "77"])  # 77 is isolated
    write_path_file(corpus, "2003-02", "m", "ipv6", ["1 2 3 4"])
    series = load_series(corpus)
    store_dir = tmp_path / "store"
    write_store(store_dir, series)
    back = read_store(store_dir)
    assert back.dates() == series.dates()
    assert back.family == "ipv6" and back.monitor_set == "ALL"
    for a, b in zip(series.snapshots, back.snapshots):
        assert set(a.graph.nodes()) == set(b.graph.nodes())
        assert sorted(a.graph.edges()) == sorted(b.graph.edges())
    assert 77 in back.snapshots[0].graph  # isolated AS survived the round trip


def test_read_store_empty(tmp_path):
    with pytest.raises(CorpusError):
        read_store(tmp_path)
