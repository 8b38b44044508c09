"""Betweenness centrality and its decomposition into bridgeness + local terms.

Betweenness of a node j sums, over unordered node pairs {i, k} (i != j != k),
the fraction of shortest i-k paths passing through j. Bridgeness keeps only
pairs where neither endpoint is j or one of j's neighbors; the local term is
the remainder. Everything here is unweighted (BFS shortest paths), even when
the graph stores weights.

The fast path is a level-synchronous Brandes sweep per source. On top of the
usual dependency accumulation it tracks two extra per-node accumulators that
make the decomposition exact in O(n*m)-style passes:

* ``l1[j]``: dependency contributed by sources adjacent to j, i.e. the
  ordered sum over pairs whose *source* endpoint neighbors j.
* ``p[j]``: the ordered neighbor-pair correction. For s, t both adjacent to
  j with d(s, t) = 2, j lies on a shortest s-t path of weight 1/sigma_st
  (single-edge legs have sigma = 1), so those pairs would otherwise be
  double-counted by 2*l1.

Ordered local term = 2*l1 - p; bridgeness = bc - local. All public results
use the unordered-pair convention (ordered sums halved once at the end).

Per-source sweeps are independent: sources are processed in fixed chunks and
chunk partials are reduced in chunk order, so results are identical for any
worker count.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import IO

import numpy as np

from .graph import Graph, NodeTable

_CHUNK = 64  # fixed, worker-count independent

PAIR_CONVENTION = "unordered"


@dataclass(frozen=True)
class CentralityResult:
    """Per-node betweenness, bridgeness and local scores from one run."""

    bc: np.ndarray
    bridgeness: np.ndarray
    local: np.ndarray
    convention: str = PAIR_CONVENTION


def _expand_frontier(indptr, indices, frontier):
    """All (source, neighbor) incidences leaving ``frontier``, flattened."""
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    flat = np.arange(total, dtype=np.int64) - offsets + np.repeat(starts, counts)
    return np.repeat(frontier, counts), indices[flat]


def _single_source_sweep(indptr, indices, n, source):
    """BFS distances, path counts and dependencies from one source."""
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    dist[source] = 0
    sigma[source] = 1.0
    frontier = np.array([source], dtype=np.int64)
    frontiers = []
    level = 0
    while frontier.size:
        frontiers.append(frontier)
        src, nbr = _expand_frontier(indptr, indices, frontier)
        if nbr.size == 0:
            break
        fresh = dist[nbr] < 0
        if fresh.any():
            dist[nbr[fresh]] = level + 1
        tree = dist[nbr] == level + 1
        np.add.at(sigma, nbr[tree], sigma[src[tree]])
        frontier = np.unique(nbr[fresh])
        level += 1

    delta = np.zeros(n, dtype=np.float64)
    for frontier in reversed(frontiers[1:]):
        w, nbr = _expand_frontier(indptr, indices, frontier)
        pred = dist[nbr] == dist[frontier[0]] - 1
        v = nbr[pred]
        ww = w[pred]
        np.add.at(delta, v, sigma[v] / sigma[ww] * (1.0 + delta[ww]))
    return dist, sigma, delta


def _accumulate_sources(indptr, indices, n, sources):
    """Sum per-source contributions to (bc, l1, p) over ``sources`` in order."""
    bc = np.zeros(n, dtype=np.float64)
    l1 = np.zeros(n, dtype=np.float64)
    p = np.zeros(n, dtype=np.float64)
    for s in sources:
        dist, sigma, delta = _single_source_sweep(indptr, indices, n, s)
        delta[s] = 0.0
        bc += delta
        nbrs = indices[indptr[s] : indptr[s + 1]]
        l1[nbrs] += delta[nbrs]
        for j in nbrs:
            nb_j = indices[indptr[j] : indptr[j + 1]]
            at_two = dist[nb_j] == 2
            if at_two.any():
                p[j] += float((1.0 / sigma[nb_j[at_two]]).sum())
    return bc, l1, p


_WORKER_GRAPH: tuple | None = None


def _worker_init(indptr, indices, n):
    global _WORKER_GRAPH
    _WORKER_GRAPH = (indptr, indices, n)


def _worker_chunk(bounds):
    indptr, indices, n = _WORKER_GRAPH
    lo, hi = bounds
    return _accumulate_sources(indptr, indices, n, range(lo, hi))


def _brandes_accumulate(graph: Graph, workers: int = 1):
    """(ordered bc, l1, p) accumulators over all sources.

    Chunk boundaries are fixed, and chunk partials are reduced in chunk
    order, so the result does not depend on the worker count.
    """
    n = graph.node_count
    if n == 0:
        z = np.zeros(0, dtype=np.float64)
        return z, z.copy(), z.copy()
    bounds = [(lo, min(lo + _CHUNK, n)) for lo in range(0, n, _CHUNK)]
    if workers <= 1 or len(bounds) == 1:
        partials = [
            _accumulate_sources(graph.indptr, graph.indices, n, range(lo, hi))
            for lo, hi in bounds
        ]
    else:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_worker_init,
            initargs=(graph.indptr, graph.indices, n),
        ) as pool:
            partials = list(pool.map(_worker_chunk, bounds))
    bc = np.zeros(n, dtype=np.float64)
    l1 = np.zeros(n, dtype=np.float64)
    p = np.zeros(n, dtype=np.float64)
    for part_bc, part_l1, part_p in partials:
        bc += part_bc
        l1 += part_l1
        p += part_p
    return bc, l1, p


def _decompose(bc_o, l1, p):
    """Derive (bc, bridgeness, local, si) from ordered accumulators.

    Exact arithmetic guarantees p <= l1 <= 2*l1 - p <= bc and the chain
    below evaluates each quantity so float rounding cannot invert the
    ordering 0 <= bridgeness <= si <= bc.
    """
    mixed = np.maximum(l1 - p, 0.0)
    local_o = l1 + mixed  # == 2*l1 - p, but >= l1 in float too
    bri_o = np.maximum(bc_o - local_o, 0.0)
    si_o = np.maximum(bc_o - l1, 0.0)
    return bc_o / 2.0, bri_o / 2.0, local_o / 2.0, si_o / 2.0


def betweenness(graph: Graph, *, workers: int = 1) -> np.ndarray:
    """Unnormalized betweenness centrality (unordered pairs, BFS paths)."""
    bc_o, _, _ = _brandes_accumulate(graph, workers)
    return bc_o / 2.0


def bridgeness_exact(graph: Graph, *, workers: int = 1) -> CentralityResult:
    """Betweenness split into bridgeness and local terms.

    Bridgeness of j counts only pairs with both endpoints outside
    N(j) | {j}; local is the complement, so bc = bridgeness + local.
    """
    bc_o, l1, p = _brandes_accumulate(graph, workers)
    bc, bri, local, _ = _decompose(bc_o, l1, p)
    return CentralityResult(bc=bc, bridgeness=bri, local=local)


def bridgeness_si_compat(graph: Graph, *, workers: int = 1) -> np.ndarray:
    """Source-side-filtered bridgeness variant.

    Per source s, the dependency of j is counted only when d(s, j) > 1.
    This filters neighbors out of the source side of each pair but not the
    target side, so a pair with exactly one endpoint adjacent to j keeps
    half its weight: the result equals exact bridgeness plus half of that
    mixed-pair term, and upper-bounds exact bridgeness everywhere.
    """
    bc_o, l1, p = _brandes_accumulate(graph, workers)
    _, _, _, si = _decompose(bc_o, l1, p)
    return si


def _bfs_counts(adj: list[list[int]], n: int, source: int):
    """Plain BFS path counting, kept independent of the sweep engine."""
    dist = [-1] * n
    sigma = [0.0] * n
    dist[source] = 0
    sigma[source] = 1.0
    queue = [source]
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        dv = dist[v]
        sv = sigma[v]
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dv + 1
                queue.append(w)
            if dist[w] == dv + 1:
                sigma[w] += sv
    return dist, sigma


def bridgeness_bruteforce(graph: Graph) -> CentralityResult:
    """Literal pair-enumeration oracle; intended for n up to a few hundred.

    For every node j and every unordered pair {i, k}, j is on a shortest
    i-k path iff d(i, j) + d(j, k) = d(i, k), in which case it carries
    sigma_ij * sigma_jk / sigma_ik. The neighborhood filter is applied
    literally for the bridgeness term.
    """
    n = graph.node_count
    adj = [[int(w) for w in graph.neighbors(v)] for v in range(n)]
    dist = np.full((n, n), np.inf, dtype=np.float64)
    sigma = np.zeros((n, n), dtype=np.float64)
    for s in range(n):
        d_s, sig_s = _bfs_counts(adj, n, s)
        for t in range(n):
            if d_s[t] >= 0:
                dist[s, t] = d_s[t]
                sigma[s, t] = sig_s[t]

    bc = np.zeros(n, dtype=np.float64)
    bri = np.zeros(n, dtype=np.float64)
    sigma_safe = np.where(sigma > 0, sigma, 1.0)
    for j in range(n):
        through = (dist[:, j][:, None] + dist[j, :][None, :]) == dist
        frac = np.where(through & (sigma > 0), sigma[:, j][:, None] * sigma[j, :][None, :], 0.0)
        frac /= sigma_safe
        frac[j, :] = 0.0
        frac[:, j] = 0.0
        np.fill_diagonal(frac, 0.0)
        bc[j] = frac.sum() / 2.0
        nbrs = adj[j]
        frac[nbrs, :] = 0.0
        frac[:, nbrs] = 0.0
        bri[j] = frac.sum() / 2.0
    return CentralityResult(bc=bc, bridgeness=bri, local=bc - bri)


def locterm_by_degree(result: CentralityResult, graph: Graph) -> dict[int, float]:
    """Mean relative local contribution (bc - bridgeness)/bc per degree.

    Nodes with bc = 0 are excluded; degrees with no eligible node are
    absent from the mapping.
    """
    degrees = graph.degrees
    eligible = result.bc > 0
    out: dict[int, float] = {}
    for k in np.unique(degrees[eligible]):
        sel = eligible & (degrees == k)
        ratios = (result.bc[sel] - result.bridgeness[sel]) / result.bc[sel]
        out[int(k)] = float(ratios.mean())
    return out


def centrality_records(
    result: CentralityResult, graph: Graph, table: NodeTable | None = None
) -> list[dict]:
    """One JSON-ready record per node: id, degree, bc, bridgeness, local."""
    table = table or NodeTable.identity(graph.node_count)
    degrees = graph.degrees
    return [
        {
            "node_id": table.id_of(v),
            "degree": int(degrees[v]),
            "bc": float(result.bc[v]),
            "bridgeness": float(result.bridgeness[v]),
            "local": float(result.local[v]),
        }
        for v in range(graph.node_count)
    ]


def write_centrality_csv(
    result: CentralityResult,
    graph: Graph,
    stream: IO[str],
    table: NodeTable | None = None,
) -> None:
    stream.write("node_id,degree,bc,bridgeness,local\n")
    for rec in centrality_records(result, graph, table):
        stream.write(
            "%s,%d,%.12g,%.12g,%.12g\n"
            % (rec["node_id"], rec["degree"], rec["bc"], rec["bridgeness"], rec["local"])
        )


def write_centrality_json(
    result: CentralityResult,
    graph: Graph,
    stream: IO[str],
    table: NodeTable | None = None,
) -> None:
    json.dump(centrality_records(result, graph, table), stream, indent=2)
    stream.write("\n")


def default_workers() -> int:
    """Worker count from BRIDGENESS_WORKERS, else available parallelism."""
    env = os.environ.get("BRIDGENESS_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1
