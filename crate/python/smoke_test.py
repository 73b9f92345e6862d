"""Smoke test for the tgirg_py extension; run with python or pytest."""

import math
import os
import tempfile

import tgirg_py as t


def test_fixtures():
    path3 = t.Graph.from_edges([(0, 1), (1, 2)])
    c = t.coefficients(path3)
    assert c["pearson"] == -1.0 and c["spearman"] == -1.0 and c["kendall"] == -1.0
    cycle = t.Graph.from_edges([(i, (i + 1) % 5) for i in range(5)])
    c = t.coefficients(cycle)
    assert c["pearson"] is None and c["kendall"] is None


def test_generate_and_analyse():
    g = t.generate("tgirg", 5000, tau=2.6, sigma=0.5, avg_degree=10.0, seed=3)
    assert abs(g.average_degree() - 10.0) < 1.0
    assert g.scale is not None and g.scale > 0
    assert sum(g.degrees()) == 2 * g.edge_count
    again = t.generate("tgirg", 5000, tau=2.6, sigma=0.5, avg_degree=10.0, seed=3, workers=1)
    assert again.edges() == g.edges()
    c = t.coefficients(g)
    assert all(-1.0 <= c[k] <= 1.0 for k in ("pearson", "spearman", "kendall"))
    assert g.average_clustering() > 0.05

    h = t.heatmaps(g, buckets=11)
    assert len(h["joint"]) == 11
    assert math.isclose(sum(map(sum, h["joint"])), 1.0, rel_tol=1e-9)
    cc = t.ccdf(g)
    assert cc["node"][0][1] <= 1.0 and cc["edge"][-1][1] > 0

    tau = t.hill(g)
    assert tau is None or 1.5 < tau < 4.0


def test_round_trip_and_errors():
    g = t.generate("chung_lu", 2000, tau=2.5, avg_degree=8.0, seed=1)
    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "g.txt")
        t.write_edge_list(g, p)
        h = t.read_edge_list(p)
        assert h.edge_count == g.edge_count
        try:
            t.read_edge_list(os.path.join(d, "missing.txt"))
        except IOError:
            pass
        else:
            raise AssertionError("missing file accepted")
    try:
        t.generate("tgirg", 100, tau=2.5, sigma=1.6)
    except ValueError as e:
        assert "sigma" in str(e)
    else:
        raise AssertionError("sigma >= tau - 1 accepted")


if __name__ == "__main__":
    test_fixtures()
    test_generate_and_analyse()
    test_round_trip_and_errors()
    print("smoke test passed")
