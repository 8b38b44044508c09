"""Shared test helpers: independent oracles and graph builders."""
from __future__ import annotations

from collections import deque

import numpy as np

from bridgeness import Graph


def er_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi graph; may be disconnected."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(k: int) -> Graph:
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def all_pairs_counts(graph: Graph):
    """Distances and shortest-path counts by plain BFS, independent of the library engine."""
    n = graph.node_count
    adj = [list(map(int, graph.neighbors(v))) for v in range(n)]
    dist = np.full((n, n), np.inf)
    sigma = np.zeros((n, n))
    for s in range(n):
        d = [-1] * n
        sig = [0.0] * n
        d[s] = 0
        sig[s] = 1.0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if d[w] < 0:
                    d[w] = d[v] + 1
                    queue.append(w)
                if d[w] == d[v] + 1:
                    sig[w] += sig[v]
        for t in range(n):
            if d[t] >= 0:
                dist[s, t] = d[t]
                sigma[s, t] = sig[t]
    return dist, sigma


def si_compat_oracle(graph: Graph) -> np.ndarray:
    """Instrumented pair enumeration for the source-side-filtered variant.

    Pairs with both endpoints outside N(j)|{j} count fully, pairs with
    exactly one endpoint adjacent to j count half, neighbor-neighbor pairs
    not at all.
    """
    n = graph.node_count
    dist, sigma = all_pairs_counts(graph)
    out = np.zeros(n)
    for j in range(n):
        nbrs = set(map(int, graph.neighbors(j)))
        for i in range(n):
            for k in range(i + 1, n):
                if j in (i, k) or sigma[i, k] == 0:
                    continue
                if dist[i, j] + dist[j, k] != dist[i, k]:
                    continue
                frac = sigma[i, j] * sigma[j, k] / sigma[i, k]
                outside = (i not in nbrs) + (k not in nbrs)
                if outside == 2:
                    out[j] += frac
                elif outside == 1:
                    out[j] += 0.5 * frac
    return out


def best_label_agreement(labels_a: np.ndarray, labels_b: np.ndarray) -> float:
    """Element-wise agreement after optimal label matching (Hungarian)."""
    from scipy.optimize import linear_sum_assignment

    ca = int(labels_a.max()) + 1
    cb = int(labels_b.max()) + 1
    conf = np.zeros((ca, cb))
    np.add.at(conf, (labels_a, labels_b), 1)
    rows, cols = linear_sum_assignment(-conf)
    return float(conf[rows, cols].sum() / len(labels_a))
