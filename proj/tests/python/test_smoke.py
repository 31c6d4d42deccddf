import math

import pytest

import mrepi


def ring(n):
    return [(i, (i + 1) % n) for i in range(n)]


def test_graph_classes():
    g = mrepi.MultiplexGraph(4, [(0, 1), (1, 2)], [(1, 0), (2, 3)])
    assert g.n == 4
    assert g.shared == [(0, 1)]
    assert g.a_only == [(1, 2)]
    assert g.b_only == [(2, 3)]
    k = g.vector_degree(1)
    assert (k.a_only, k.b_only, k.shared) == (1, 0, 1)
    assert mrepi.asn(g) == pytest.approx(2 / 6)


def test_bad_graph_raises_value_error():
    with pytest.raises(ValueError):
        mrepi.MultiplexGraph(3, [(0, 7)], [])
    with pytest.raises(ValueError):
        mrepi.MultiplexGraph(3, [(1, 1)], [])


def test_compose():
    assert mrepi.compose_lambda_c(0.2, 0.5) == pytest.approx(0.6)
    with pytest.raises(ValueError):
        mrepi.compose_lambda_c(1.5, 0.1)


def test_generate_and_io(tmp_path):
    g, measured, met = mrepi.generate("er", "er", 500, 4.0, 4.0, seed=3, asn=0.5)
    assert met
    assert measured == pytest.approx(mrepi.asn(g))
    path = tmp_path / "g.txt"
    mrepi.write_edgelist(path, g, ["note"])
    h = mrepi.read_edgelist(path)
    assert h.edges_a == g.edges_a and h.edges_b == g.edges_b
    with pytest.raises(mrepi.InfeasibleError):
        mrepi.generate("er", "sf", 500, 4.0, 4.0, seed=3, asn=0.3)


def test_single_er_layer_threshold():
    edges = mrepi.gen_er(2000, 4.0, 1)
    g = mrepi.MultiplexGraph(2000, edges, [])
    ms = mrepi.moment_set(g)
    assert ms["mean_km"] == pytest.approx(2 * len(edges) / 2000)
    lc = mrepi.threshold_point_a(g, 0.0)
    degs = [0] * 2000
    for u, v in edges:
        degs[u] += 1
        degs[v] += 1
    k1 = sum(degs) / 2000
    k2 = sum(d * d for d in degs) / 2000
    assert lc == pytest.approx(k1 / (k2 - k1), abs=1e-7)


def test_theory_and_simulation_agree():
    g, _, _ = mrepi.generate("er", "er", 2000, 3.0, 3.0, seed=5)
    curve = mrepi.threshold_curve(g, 0.1)
    assert curve and all(0 <= lb <= 1 for _, lb in curve)
    lc = mrepi.diagonal_threshold(g)
    assert 0 < lc < 1
    assert mrepi.mean_outbreak(g, lc / 2, lc / 2) > 1
    with pytest.raises(mrepi.SupercriticalError):
        mrepi.mean_outbreak(g, 0.9, 0.9)
    sol = mrepi.outbreak_size(g, 0.4, 0.4)
    assert sol["converged"] and 0 < sol["s"] < 1
    sim = mrepi.run_ensemble(g, 0.4, 0.4, realizations=50, seed=9, threads=2)
    assert abs(sim["mean_s"] - sol["s"]) < 0.05
    again = mrepi.run_ensemble(g, 0.4, 0.4, realizations=50, seed=9, threads=1)
    assert again == sim


def test_sir_once_extremes():
    g = mrepi.MultiplexGraph(6, ring(6), [])
    assert mrepi.sir_once(g, 1.0, 0.0, 0, 1) == pytest.approx(1.0)
    assert mrepi.sir_once(g, 0.0, 0.0, 0, 1) == pytest.approx(1 / 6)
    assert mrepi.percolate_once(g, 1.0, 0.0, 1) == pytest.approx(1.0)
    assert not math.isnan(mrepi.ddc(mrepi.generate("sf", "sf", 300, 4, 4, seed=1)[0]))
