import numpy as np
import pytest

from bridgeness import (
    GenerationError,
    LfrConfig,
    bridge_degree_bias,
    generate,
    inter_community_fraction,
)
from bridgeness.netgen import _rewire_to_mu, _WiringState

SMALL = dict(n=150, communities=4, mu=0.15, min_community_size=22, min_degree=6,
             max_degree=20, mean_degree=10.0)


def test_mu_zero_skips_rewiring():
    net = generate(LfrConfig(seed=1, **{**SMALL, "mu": 0.0}))
    assert net.achieved_mu == 0.0
    assert net.rewired_nodes == frozenset()
    assert inter_community_fraction(net.graph, net.ground_truth) == 0.0
    with pytest.raises(ValueError):
        bridge_degree_bias(net)


def test_same_seed_identical_network():
    a = generate(LfrConfig(seed=7, **SMALL))
    b = generate(LfrConfig(seed=7, **SMALL))
    assert np.array_equal(a.graph.edges, b.graph.edges)
    assert np.array_equal(a.ground_truth.labels, b.ground_truth.labels)
    assert a.rewired_nodes == b.rewired_nodes
    assert a.achieved_mu == b.achieved_mu


def test_different_seeds_differ():
    a = generate(LfrConfig(seed=1, **SMALL))
    b = generate(LfrConfig(seed=2, **SMALL))
    assert not np.array_equal(a.graph.edges, b.graph.edges)


def test_achieved_mu_matches_graph():
    net = generate(LfrConfig(seed=3, **SMALL))
    assert net.achieved_mu == pytest.approx(
        inter_community_fraction(net.graph, net.ground_truth)
    )
    assert net.achieved_mu >= 0.15
    assert int(net.graph.degrees.sum()) == 2 * net.graph.edge_count


def test_ground_truth_structure():
    cfg = LfrConfig(seed=5, **SMALL)
    net = generate(cfg)
    assert len(net.ground_truth) == cfg.n
    assert net.ground_truth.community_count == cfg.communities
    sizes = np.bincount(net.ground_truth.labels)
    assert sizes.sum() == cfg.n
    assert sizes.min() >= 1
    assert set(net.rewired_nodes) <= set(range(cfg.n))


def test_config_sizes_near_equal_mode():
    cfg = LfrConfig(n=100, communities=3, mu=0.1, seed=0, size_exponent=None,
                    min_degree=5, max_degree=10, mean_degree=None, min_community_size=10)
    assert sorted(cfg.sizes()) == [33, 33, 34]


def test_config_sizes_power_law_bounds():
    cfg = LfrConfig(n=1000, communities=30, mu=0.2, seed=4)
    sizes = cfg.sizes()
    assert sum(sizes) == 1000
    assert len(sizes) == 30
    assert min(sizes) >= 22
    assert max(sizes) <= 200
    assert cfg.sizes() == sizes  # deterministic


def test_explicit_community_sizes():
    cfg = LfrConfig(n=60, communities=2, mu=0.1, seed=1, community_sizes=(25, 35),
                    min_degree=5, max_degree=12, mean_degree=8.0)
    net = generate(cfg)
    assert sorted(np.bincount(net.ground_truth.labels)) == [25, 35]


def test_infeasible_configs_raise():
    with pytest.raises(ValueError):  # min_degree too big for community size
        LfrConfig(n=4, communities=2, mu=0.99, seed=1)
    with pytest.raises(ValueError):
        LfrConfig(n=10, communities=0, mu=0.1, seed=1)
    with pytest.raises(ValueError):
        LfrConfig(n=10, communities=2, mu=1.0, seed=1)
    with pytest.raises(ValueError):
        LfrConfig(n=10, communities=2, mu=0.1, seed=1, selection="edge")
    with pytest.raises(ValueError):
        LfrConfig(n=10, communities=2, mu=0.1, seed=1, min_degree=0)


def test_rewire_unreachable_target_errors():
    # both intra edges are saturated toward the outside: every rewire target
    # is already adjacent, so the mu target cannot be met
    labels = np.array([0, 0, 1, 1])
    adjacency = [{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}]
    state = _WiringState(labels=labels, adjacency=adjacency,
                         intra_edges=[(0, 1), (2, 3)], inter_count=4, edge_count=6)
    with pytest.raises(GenerationError):
        _rewire_to_mu(state, 0.95, np.random.default_rng(0), selection="node",
                      target="node", max_target_retries=8, max_attempts=200)


def test_rewiring_exhaustion_errors():
    # drain all intra links with an unreachable target
    labels = np.array([0, 0, 1, 1])
    adjacency = [{1}, {0}, {3}, {2}]
    state = _WiringState(labels=labels, adjacency=adjacency,
                         intra_edges=[(0, 1), (2, 3)], inter_count=0, edge_count=2)
    rewired = _rewire_to_mu(state, 0.99, np.random.default_rng(1), selection="node",
                            target="node", max_target_retries=8, max_attempts=500)
    assert state.mu() == 1.0
    assert rewired  # both intra edges converted before the target was hit


def test_bias_result_fields():
    net = generate(LfrConfig(seed=11, **SMALL))
    bias = bridge_degree_bias(net)
    assert bias.overall_mean_degree == pytest.approx(float(net.graph.degrees.mean()))
    assert 0.0 <= bias.ranksum_pvalue <= 1.0
    assert np.isfinite(bias.ranksum_statistic)


def test_link_selection_biases_toward_high_degree():
    # within-community link sampling favors high-degree endpoints; compare
    # the two modes on the same seeds at generation scale
    diffs = []
    for seed in range(3):
        cfg = dict(n=600, communities=12, mu=0.25, min_community_size=22)
        node_net = generate(LfrConfig(seed=seed, selection="node", **cfg))
        link_net = generate(LfrConfig(seed=seed, selection="link", **cfg))
        node_bias = bridge_degree_bias(node_net)
        link_bias = bridge_degree_bias(link_net)
        diffs.append(
            (link_bias.rewired_mean_degree - link_bias.overall_mean_degree)
            - (node_bias.rewired_mean_degree - node_bias.overall_mean_degree)
        )
    assert np.mean(diffs) > 0.0


def test_wiring_and_target_variants_run():
    for wiring in ("assortative", "random"):
        for target in ("stub", "node"):
            cfg = LfrConfig(seed=2, wiring=wiring, target=target, **SMALL)
            net = generate(cfg)
            assert net.achieved_mu >= 0.15
            assert int(net.graph.degrees.sum()) == 2 * net.graph.edge_count
