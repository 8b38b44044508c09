"""Immutable undirected graphs, node-ID tables and community partitions.

Graphs are simple (no self-loops, no duplicate edges) and use dense internal
indices in ``[0, node_count)``. External string IDs live in a separate
:class:`NodeTable` so algorithms work on plain integer arrays.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class EdgeListError(ValueError):
    """Malformed or invalid edge-list input."""


class PartitionError(ValueError):
    """Partition input that does not cover the graph or names unknown nodes."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph in CSR form.

    ``edges`` holds each undirected edge once as ``(u, v)`` with ``u < v``;
    ``indptr``/``indices`` is the symmetric adjacency with sorted neighbor
    lists. ``weights`` (aligned with ``edges``) are stored but ignored by the
    default algorithms. Instances are immutable and safe to share across
    worker processes.
    """

    node_count: int
    edges: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray | None = None

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        weights: Sequence[float] | None = None,
    ) -> "Graph":
        """Build a graph from unique undirected edges.

        Raises ValueError on self-loops, duplicate edges (in either
        orientation) or out-of-range endpoints; use :func:`load_edge_list`
        for inputs that need cleanup.
        """
        edge_arr = np.asarray(list(edges), dtype=np.int64)
        if edge_arr.size == 0:
            edge_arr = edge_arr.reshape(0, 2)
        m = edge_arr.shape[0]
        if m and (edge_arr.min() < 0 or edge_arr.max() >= node_count):
            raise ValueError("edge endpoint out of range")
        if m and np.any(edge_arr[:, 0] == edge_arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = edge_arr.min(axis=1) if m else edge_arr[:, 0]
        hi = edge_arr.max(axis=1) if m else edge_arr[:, 1]
        order = np.lexsort((hi, lo))
        canon = np.column_stack((lo, hi))[order]
        if m > 1 and np.any(np.all(canon[1:] == canon[:-1], axis=1)):
            raise ValueError("duplicate edges are not allowed")

        w = None
        if weights is not None:
            w_arr = np.asarray(weights, dtype=np.float64)
            if w_arr.shape != (m,):
                raise ValueError("weights must align with edges")
            w = _frozen(w_arr[order])

        # symmetric CSR with sorted neighbor lists
        deg = np.zeros(node_count, dtype=np.int64)
        if m:
            np.add.at(deg, canon[:, 0], 1)
            np.add.at(deg, canon[:, 1], 1)
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.zeros(2 * m, dtype=np.int64)
        fill = indptr[:-1].copy()
        for u, v in canon:
            indices[fill[u]] = v
            fill[u] += 1
            indices[fill[v]] = u
            fill[v] += 1
        for v in range(node_count):
            indices[indptr[v] : indptr[v + 1]].sort()

        return cls(
            node_count=int(node_count),
            edges=_frozen(canon),
            indptr=_frozen(indptr),
            indices=_frozen(indices),
            weights=w,
        )

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.diff(self.indptr))

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor indices of ``v`` (read-only view)."""
        self._check_index(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        pos = np.searchsorted(nbrs, v)
        return bool(pos < len(nbrs) and nbrs[pos] == v)

    def _check_index(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise IndexError(f"node index {v} out of range [0, {self.node_count})")


@dataclass(frozen=True)
class NodeTable:
    """Bijective mapping between external string IDs and internal indices."""

    ids: tuple[str, ...]
    metadata: dict[str, dict[str, str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        index = {node_id: i for i, node_id in enumerate(self.ids)}
        if len(index) != len(self.ids):
            raise ValueError("duplicate external node IDs")
        object.__setattr__(self, "_index", index)

    @classmethod
    def identity(cls, n: int) -> "NodeTable":
        """Table whose external IDs are the stringified indices."""
        return cls(ids=tuple(str(i) for i in range(n)))

    def __len__(self) -> int:
        return len(self.ids)

    def index_of(self, node_id: str) -> int:
        try:
            return self._index[node_id]  # type: ignore[attr-defined]
        except KeyError:
            raise KeyError(f"unknown node ID {node_id!r}") from None

    def id_of(self, index: int) -> str:
        return self.ids[index]


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to exactly one dense community label."""

    labels: np.ndarray
    community_count: int

    def __post_init__(self) -> None:
        labels = _frozen(np.asarray(self.labels, dtype=np.int64))
        object.__setattr__(self, "labels", labels)
        if labels.size and (labels.min() < 0 or labels.max() >= self.community_count):
            raise ValueError("labels must be dense in [0, community_count)")

    @classmethod
    def from_labels(cls, raw: Sequence) -> "Partition":
        """Relabel arbitrary per-node labels densely, by first appearance."""
        mapping: dict = {}
        dense = np.zeros(len(raw), dtype=np.int64)
        for i, label in enumerate(raw):
            if label not in mapping:
                mapping[label] = len(mapping)
            dense[i] = mapping[label]
        return cls(labels=dense, community_count=len(mapping))

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def community_of(self, v: int) -> int:
        return int(self.labels[v])

    def members(self, community: int) -> np.ndarray:
        return np.flatnonzero(self.labels == community)


def _split_line(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None:
        return line.split()
    return [tok.strip() for tok in line.split(delimiter)]


def load_edge_list(
    stream: IO[str] | Iterable[str],
    *,
    delimiter: str | None = None,
    has_weights: bool = False,
    skip_comments: bool = True,
) -> tuple[Graph, NodeTable]:
    """Parse ``src dst [weight]`` lines into a simple undirected graph.

    Duplicate edges (in either orientation) are collapsed keeping the first
    weight; self-loops are dropped. Both are reported through a single
    warning with counts. ``delimiter=None`` splits on whitespace.
    """
    ids: list[str] = []
    index: dict[str, int] = {}
    edge_index: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int]] = []
    weights: list[float] = []
    self_loops = 0
    duplicates = 0

    def intern(token: str) -> int:
        if token not in index:
            index[token] = len(ids)
            ids.append(token)
        return index[token]

    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if skip_comments and line.startswith("#"):
            continue
        tokens = _split_line(line, delimiter)
        expected = 3 if has_weights else 2
        if len(tokens) != expected:
            raise EdgeListError(
                f"line {lineno}: expected {expected} fields, got {len(tokens)}: {line!r}"
            )
        u = intern(tokens[0])
        v = intern(tokens[1])
        w = 1.0
        if has_weights:
            try:
                w = float(tokens[2])
            except ValueError:
                raise EdgeListError(f"line {lineno}: bad weight {tokens[2]!r}") from None
            if w <= 0:
                raise EdgeListError(f"line {lineno}: weight must be positive, got {w}")
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in edge_index:
            duplicates += 1
            continue
        edge_index[key] = len(edges)
        edges.append(key)
        weights.append(w)

    if self_loops or duplicates:
        logger.warning(
            "edge list cleanup: dropped %d self-loop(s), collapsed %d duplicate edge(s)",
            self_loops,
            duplicates,
        )

    graph = Graph.from_edges(
        len(ids), edges, weights=weights if has_weights else None
    )
    return graph, NodeTable(ids=tuple(ids))


def write_edge_list(
    graph: Graph,
    table: NodeTable,
    stream: IO[str],
    *,
    delimiter: str = " ",
    include_weights: bool = False,
) -> None:
    """Write one ``src dst [weight]`` line per edge, reloadable by ``load_edge_list``."""
    weights = graph.weights
    for i, (u, v) in enumerate(graph.edges):
        row = f"{table.id_of(int(u))}{delimiter}{table.id_of(int(v))}"
        if include_weights:
            w = 1.0 if weights is None else float(weights[i])
            row += f"{delimiter}{w:g}"
        stream.write(row + "\n")


def load_partition(stream: IO[str] | Iterable[str], table: NodeTable) -> Partition:
    """Parse ``node_id,community_label`` lines covering every node in ``table``.

    Labels are relabeled densely (order of first appearance by internal
    index). Unknown or missing node IDs raise :class:`PartitionError`;
    duplicate assignments do too, since they are ambiguous.
    """
    raw: dict[int, str] = {}
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [tok.strip() for tok in line.split(",")]
        if len(parts) != 2:
            raise PartitionError(f"line {lineno}: expected 'node_id,community': {line!r}")
        node_id, label = parts
        try:
            idx = table.index_of(node_id)
        except KeyError:
            raise PartitionError(f"line {lineno}: unknown node ID {node_id!r}") from None
        if idx in raw:
            raise PartitionError(f"line {lineno}: duplicate assignment for {node_id!r}")
        raw[idx] = label

    missing = [table.id_of(i) for i in range(len(table)) if i not in raw]
    if missing:
        shown = ", ".join(repr(x) for x in missing[:10])
        suffix = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise PartitionError(f"partition is missing {len(missing)} node(s): {shown}{suffix}")

    return Partition.from_labels([raw[i] for i in range(len(table))])


def write_partition(partition: Partition, table: NodeTable, stream: IO[str]) -> None:
    """Write ``node_id,community`` lines in internal index order."""
    for i, label in enumerate(partition.labels):
        stream.write(f"{table.id_of(i)},{int(label)}\n")


def degree(graph: Graph, v: int) -> int:
    """Neighbor count of ``v``."""
    graph._check_index(v)
    return int(graph.degrees[v])


def clustering_coefficient(graph: Graph, v: int) -> float:
    """Fraction of realized links among the neighbors of ``v``; 0 when deg < 2."""
    graph._check_index(v)
    nbrs = graph.neighbors(v)
    k = len(nbrs)
    if k < 2:
        return 0.0
    nbr_set = set(int(x) for x in nbrs)
    links = 0
    for u in nbrs:
        for w in graph.neighbors(int(u)):
            if int(w) in nbr_set:
                links += 1
    links //= 2  # each neighbor-neighbor edge seen from both sides
    return links / (k * (k - 1) / 2)
