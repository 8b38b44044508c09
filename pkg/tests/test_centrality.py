import io
import json

import numpy as np
import pytest

from bridgeness import (
    Graph,
    betweenness,
    bridgeness_bruteforce,
    bridgeness_exact,
    bridgeness_si_compat,
    locterm_by_degree,
)
from bridgeness.centrality import write_centrality_csv, centrality_records

from util import complete_graph, er_graph, path_graph, si_compat_oracle, star_graph

TRIANGLE_BRIDGE = Graph.from_edges(
    7, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 6), (6, 3)]
)  # two triangles {0,1,2},{3,4,5} joined through node 6


def test_betweenness_path():
    assert list(betweenness(path_graph(3))) == [0.0, 1.0, 0.0]


def test_betweenness_star_is_pair_count():
    assert betweenness(star_graph(6))[0] == 15.0


def test_betweenness_four_cycle():
    cycle = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    expected = bridgeness_bruteforce(cycle).bc  # brute-force pair enumeration
    assert np.allclose(expected, 0.5)
    assert np.allclose(betweenness(cycle), expected)


def test_betweenness_empty_and_single():
    assert betweenness(Graph.from_edges(0, [])).shape == (0,)
    assert list(betweenness(Graph.from_edges(1, []))) == [0.0]


def test_bridgeness_star_center_zero():
    for k in (3, 4, 7):
        result = bridgeness_exact(star_graph(k))
        assert result.bridgeness[0] == 0.0
        assert result.bc[0] == k * (k - 1) / 2


def test_bridgeness_path5_hand_values():
    result = bridgeness_exact(path_graph(5))
    assert result.bc[2] == pytest.approx(4.0)
    assert result.bridgeness[2] == pytest.approx(1.0)  # only pair {a,e}
    assert result.local[2] == pytest.approx(3.0)
    assert result.bridgeness[1] == 0.0


def test_bridgeness_triangle_bridge_hand_values():
    result = bridgeness_exact(TRIANGLE_BRIDGE)
    assert result.bc[6] == pytest.approx(9.0)
    assert result.bridgeness[6] == pytest.approx(4.0)  # {1,5},{1,6},{2,5},{2,6} relabeled
    brute = bridgeness_bruteforce(TRIANGLE_BRIDGE)
    assert np.allclose(result.bc, brute.bc)
    assert np.allclose(result.bridgeness, brute.bridgeness)


def test_bruteforce_trivials():
    path = bridgeness_bruteforce(path_graph(3))
    assert path.bridgeness[1] == 0.0  # both endpoints are neighbors of b
    k5 = bridgeness_bruteforce(complete_graph(5))
    assert np.all(k5.bc == 0.0)
    assert np.all(k5.bridgeness == 0.0)


def test_si_compat_star_and_path():
    assert np.all(bridgeness_si_compat(star_graph(6)) == 0.0)
    path = path_graph(5)
    si = bridgeness_si_compat(path)
    # faithful source-side filter: sources at distance > 1 only; verified
    # against the instrumented half-weight pair enumeration
    assert np.allclose(si, [0.0, 1.0, 2.0, 1.0, 0.0])
    assert np.allclose(si, si_compat_oracle(path))


def test_si_compat_dominates_exact():
    rng = np.random.default_rng(11)
    for _ in range(10):
        g = er_graph(int(rng.integers(5, 40)), rng.uniform(0.05, 0.5), rng)
        si = bridgeness_si_compat(g)
        result = bridgeness_exact(g)
        assert np.all(si >= result.bridgeness)
        assert np.all(si <= result.bc)
        assert np.allclose(si, si_compat_oracle(g), atol=1e-9)


def test_oracle_equivalence_random_graphs():
    rng = np.random.default_rng(33)
    for _ in range(40):
        g = er_graph(int(rng.integers(5, 60)), rng.uniform(0.05, 0.5), rng)
        result = bridgeness_exact(g)
        brute = bridgeness_bruteforce(g)
        scale = np.maximum(np.abs(brute.bc), 1.0)
        assert np.all(np.abs(result.bc - brute.bc) / scale < 1e-9)
        assert np.all(np.abs(result.bridgeness - brute.bridgeness) / scale < 1e-9)
        assert np.all(np.abs(betweenness(g) - brute.bc) / scale < 1e-9)


def test_decomposition_and_ordering_invariants():
    rng = np.random.default_rng(5)
    graphs = [
        path_graph(2),
        star_graph(3),
        TRIANGLE_BRIDGE,
        Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)]),  # disconnected
        Graph.from_edges(1, []),
    ]
    graphs += [er_graph(int(rng.integers(5, 50)), rng.uniform(0.02, 0.4), rng) for _ in range(15)]
    for g in graphs:
        result = bridgeness_exact(g)
        si = bridgeness_si_compat(g)
        scale = np.maximum(np.abs(result.bc), 1.0)
        assert np.all(np.abs(result.bc - (result.bridgeness + result.local)) / scale < 1e-9)
        assert np.all(result.bridgeness >= 0.0)
        assert np.all(result.bridgeness <= si)
        assert np.all(si <= result.bc)


def test_worker_count_does_not_change_results():
    rng = np.random.default_rng(17)
    g = er_graph(150, 0.05, rng)
    serial = bridgeness_exact(g, workers=1)
    parallel = bridgeness_exact(g, workers=2)
    assert np.array_equal(serial.bc, parallel.bc)
    assert np.array_equal(serial.bridgeness, parallel.bridgeness)


def test_repeated_runs_bit_identical():
    rng = np.random.default_rng(19)
    g = er_graph(60, 0.1, rng)
    a = bridgeness_exact(g)
    b = bridgeness_exact(g)
    assert np.array_equal(a.bc, b.bc)
    assert np.array_equal(a.bridgeness, b.bridgeness)


def test_locterm_star():
    g = star_graph(6)
    assert locterm_by_degree(bridgeness_exact(g), g) == {6: 1.0}


def test_locterm_path5():
    g = path_graph(5)
    mapping = locterm_by_degree(bridgeness_exact(g), g)
    assert set(mapping) == {2}  # degree-1 endpoints have bc = 0
    assert mapping[2] == pytest.approx((1.0 + 0.75 + 1.0) / 3)


def test_locterm_empty_when_all_bc_zero():
    g = complete_graph(3)
    assert locterm_by_degree(bridgeness_exact(g), g) == {}


def test_csv_and_json_exports():
    g = TRIANGLE_BRIDGE
    result = bridgeness_exact(g)
    buf = io.StringIO()
    write_centrality_csv(result, g, buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "node_id,degree,bc,bridgeness,local"
    assert len(lines) == g.node_count + 1
    records = centrality_records(result, g)
    assert json.dumps(records)
    assert records[6]["bc"] == pytest.approx(9.0)
    assert set(records[0]) == {"node_id", "degree", "bc", "bridgeness", "local"}
