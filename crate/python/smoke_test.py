"""Smoke test for the turanlab extension module."""
import json
import os
import sys
import tempfile

import turanlab


def main():
    g = turanlab.Hypergraph.complete_partite([2, 2, 2])
    assert g.r == 3 and g.order == 6 and len(g) == 8
    emb = g.find_kst(2, 2)
    assert emb is not None and len(emb["y"]) == 2
    assert not g.is_kst_free()
    assert g.find_erdos_quadruple() is not None

    star = turanlab.Hypergraph.star(6, 3)
    assert star.edge_count() == 10
    assert star.is_kst_free() and star.find_erdos_quadruple() is None
    again = turanlab.Hypergraph.from_text(star.to_text())
    assert again.edges() == star.edges()

    free = turanlab.Hypergraph.random_maximal(12, 3, seed=0)
    for a in range(12):
        for b in range(a + 1, 12):
            assert len(free.root_set([a, b])["roots"]) <= 2

    assert turanlab.turan_exact(5)["value"] == 10
    six = turanlab.turan_exact(6)
    assert six["exhaustive"] and six["value"] == turanlab.erdos_fr_exact(6)["value"] == 11

    host = turanlab.Hypergraph.complete_partite([3, 3, 3])
    reg = host.find_regular_subgraph(s=2, epsilon=0.1)
    assert 2 * len(reg["subgraph"]["edges"]) >= len(reg["bucketed"]["edges"])
    d = host.dense_digraph(s=2, permissive=True)
    assert d["arcs"] == [[0, 1], [0, 2], [1, 0]], d["arcs"]

    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "turan.json")
        assert turanlab.run_cli(["turan", "--n", "5", "--output", out]) == 0
        with open(out) as f:
            assert json.load(f)["result"]["value"] == 10
        assert turanlab.run_cli(["check", "--input", os.path.join(tmp, "missing.hgr")]) == 3

    print("turanlab", turanlab.__version__, "smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
