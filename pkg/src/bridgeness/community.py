"""Newman-Girvan modularity and Louvain-style modularity optimization.

Louvain alternates greedy single-node moves with graph aggregation. Node
visit order is shuffled by the configured seed; ties between equally good
moves go to the lowest community label, so a given seed always yields the
same partition. The public graph API is unweighted, but aggregation makes
inner levels weighted, so the optimizer works on weighted adjacency maps
internally.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition


@dataclass(frozen=True)
class LouvainConfig:
    seed: int
    max_passes: int = 20
    min_gain: float = 1e-7

    def __post_init__(self) -> None:
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")
        if self.min_gain <= 0:
            raise ValueError("min_gain must be > 0")


@dataclass(frozen=True)
class LouvainRun:
    """Final partition plus the modularity value reached after each pass."""

    partition: Partition
    pass_modularity: tuple[float, ...]


def modularity(graph: Graph, partition: Partition) -> float:
    """Q = sum over communities of e_II/|E| - (d_I / 2|E|)^2."""
    if graph.edge_count == 0:
        raise ValueError("modularity is undefined on an empty graph")
    if len(partition) != graph.node_count:
        raise ValueError("partition does not cover the graph")
    m = graph.edge_count
    labels = partition.labels
    internal = np.zeros(partition.community_count, dtype=np.float64)
    cu = labels[graph.edges[:, 0]]
    cv = labels[graph.edges[:, 1]]
    same = cu == cv
    np.add.at(internal, cu[same], 1.0)
    comm_degree = np.bincount(labels, weights=graph.degrees, minlength=partition.community_count)
    return float((internal / m - (comm_degree / (2.0 * m)) ** 2).sum())


class _LevelGraph:
    """Weighted graph for one aggregation level."""

    def __init__(self, adj: list[dict[int, float]], self_weight: list[float]):
        self.adj = adj
        self.self_weight = self_weight
        # degree includes both ends of internal (self) weight
        self.strength = [sum(nbrs.values()) + 2.0 * sw for nbrs, sw in zip(adj, self_weight)]
        self.total_weight = sum(self.strength) / 2.0

    @classmethod
    def from_graph(cls, graph: Graph) -> "_LevelGraph":
        adj: list[dict[int, float]] = [dict() for _ in range(graph.node_count)]
        for u, v in graph.edges:
            adj[int(u)][int(v)] = 1.0
            adj[int(v)][int(u)] = 1.0
        return cls(adj, [0.0] * graph.node_count)


def _one_level(level: _LevelGraph, rng: random.Random) -> list[int]:
    """Greedy local moves until no single move improves modularity."""
    n = len(level.adj)
    m = level.total_weight
    comm = list(range(n))
    comm_strength = list(level.strength)
    order = list(range(n))

    moved = True
    while moved:
        moved = False
        rng.shuffle(order)
        for v in order:
            cv = comm[v]
            kv = level.strength[v]
            # links from v to each neighboring community
            to_comm: dict[int, float] = {}
            for w, weight in level.adj[v].items():
                to_comm[comm[w]] = to_comm.get(comm[w], 0.0) + weight
            comm_strength[cv] -= kv
            best_comm = cv
            best_gain = to_comm.get(cv, 0.0) - comm_strength[cv] * kv / (2.0 * m)
            # ascending label order + strict improvement = lowest label wins ties
            for cand, k_in in sorted(to_comm.items()):
                if cand == cv:
                    continue
                gain = k_in - comm_strength[cand] * kv / (2.0 * m)
                if gain > best_gain + 1e-12:
                    best_gain = gain
                    best_comm = cand
            comm_strength[best_comm] += kv
            if best_comm != cv:
                comm[v] = best_comm
                moved = True
    return comm


def _aggregate(level: _LevelGraph, comm: list[int]) -> tuple[_LevelGraph, list[int]]:
    """Collapse communities into nodes; returns the new level and dense labels."""
    relabel: dict[int, int] = {}
    dense = []
    for c in comm:
        if c not in relabel:
            relabel[c] = len(relabel)
        dense.append(relabel[c])
    size = len(relabel)
    adj: list[dict[int, float]] = [dict() for _ in range(size)]
    self_weight = [0.0] * size
    for v, nbrs in enumerate(level.adj):
        cv = dense[v]
        self_weight[cv] += level.self_weight[v]
        for w, weight in nbrs.items():
            if w < v:
                continue  # each undirected pair once
            cw = dense[w]
            if cv == cw:
                self_weight[cv] += weight
            else:
                adj[cv][cw] = adj[cv].get(cw, 0.0) + weight
                adj[cw][cv] = adj[cw].get(cv, 0.0) + weight
    return _LevelGraph(adj, self_weight), dense


def louvain_passes(graph: Graph, config: LouvainConfig) -> LouvainRun:
    """Run Louvain, recording modularity after every pass.

    A pass is one local-move phase plus aggregation. Modularity is
    non-decreasing across passes by construction; the run stops when a pass
    improves it by less than ``config.min_gain`` or after ``max_passes``.
    """
    if graph.edge_count == 0:
        raise ValueError("louvain requires at least one edge")
    rng = random.Random(config.seed)
    level = _LevelGraph.from_graph(graph)
    flat = list(range(graph.node_count))
    history: list[float] = []
    prev_q: float | None = None

    for _ in range(config.max_passes):
        comm = _one_level(level, rng)
        level, dense = _aggregate(level, comm)
        flat = [dense[x] for x in flat]
        q = modularity(graph, Partition.from_labels(flat))
        if prev_q is not None and q < prev_q - 1e-9:
            raise RuntimeError("modularity decreased across passes")
        history.append(q)
        if prev_q is not None and q - prev_q < config.min_gain:
            break
        prev_q = q

    return LouvainRun(
        partition=Partition.from_labels(flat), pass_modularity=tuple(history)
    )


def louvain(graph: Graph, config: LouvainConfig) -> Partition:
    """Flat partition of the original nodes found by modularity optimization."""
    return louvain_passes(graph, config).partition
