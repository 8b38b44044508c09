"""Ranking-comparison harness: cumulative-ratio curves and per-node reports.

The curve protocol: rank nodes by a candidate score, take the running sum of
the reference G values in that order, and divide by the running sum obtained
when ranking by G itself (the best achievable at every prefix). A candidate
that reproduces the reference ranking sits at ratio 1 everywhere.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import IO, Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from .centrality import CentralityResult
from .graph import Graph, NodeTable, Partition
from .indicator import GlobalIndicatorResult

REPORT_COLUMNS = ("node_id", "G", "community", "bc", "bridgeness", "degree")


@dataclass(frozen=True)
class RankingCurve:
    """Cumulative-sum ratio per rank position (x starts at 1)."""

    x: np.ndarray
    y: np.ndarray
    name: str = "candidate"
    window: int | None = None


def _descending_order(scores: np.ndarray) -> np.ndarray:
    # ties broken by ascending node index
    return np.lexsort((np.arange(len(scores)), -np.asarray(scores, dtype=np.float64)))


def cumulative_ratio_curve(
    reference: np.ndarray,
    candidate: np.ndarray,
    *,
    name: str = "candidate",
) -> RankingCurve:
    """Ratio of candidate-ranked to reference-ranked cumulative G sums.

    Prefix positions where the reference cumulative sum is zero (all-zero
    reference prefixes) are defined as ratio 1.
    """
    reference = np.asarray(reference, dtype=np.float64)
    candidate = np.asarray(candidate, dtype=np.float64)
    if reference.shape != candidate.shape:
        raise ValueError("reference and candidate must score the same nodes")
    n = len(reference)
    if n == 0:
        raise ValueError("need at least one node")
    by_candidate = np.cumsum(reference[_descending_order(candidate)])
    by_reference = np.cumsum(reference[_descending_order(reference)])
    y = np.where(by_reference > 0, by_candidate / np.where(by_reference > 0, by_reference, 1.0), 1.0)
    return RankingCurve(x=np.arange(1, n + 1), y=y, name=name)


def smooth(curve: RankingCurve, window: int = 200) -> RankingCurve:
    """Trailing moving average, truncated at the left boundary."""
    if window < 1:
        raise ValueError("window must be >= 1")
    if window == 1:
        return replace(curve, window=1)
    csum = np.concatenate(([0.0], np.cumsum(curve.y)))
    n = len(curve.y)
    idx = np.arange(n)
    lo = np.maximum(idx - window + 1, 0)
    y = (csum[idx + 1] - csum[lo]) / (idx + 1 - lo)
    return replace(curve, y=y, window=window)


def curve_advantage(a: RankingCurve, b: RankingCurve) -> float:
    """Signed mean of a.y - b.y; positive when ``a`` tracks the reference better."""
    if len(a.y) != len(b.y):
        raise ValueError("curves have different lengths")
    return float(np.mean(a.y - b.y))


def locterm_correlation(maps: Iterable[Mapping[int, float]]) -> tuple[float, float]:
    """Pearson correlation (r, p) between degree and mean local-term ratio.

    Points from several runs may be pooled by passing multiple mappings.
    """
    xs: list[float] = []
    ys: list[float] = []
    for mapping in maps:
        for k in sorted(mapping):
            xs.append(float(k))
            ys.append(float(mapping[k]))
    if len(xs) < 3:
        raise ValueError("need at least three (degree, ratio) points")
    r, p = stats.pearsonr(xs, ys)
    return float(r), float(p)


def node_report(
    graph: Graph,
    partition: Partition,
    centrality: CentralityResult,
    indicator: GlobalIndicatorResult,
    *,
    table: NodeTable | None = None,
    sort_by: str | None = None,
    descending: bool = True,
) -> list[dict]:
    """Per-node table with columns node_id, G, community, bc, bridgeness, degree."""
    n = graph.node_count
    if len(partition) != n or len(centrality.bc) != n or len(indicator.g) != n:
        raise ValueError("inputs cover different node sets")
    table = table or NodeTable.identity(n)
    degrees = graph.degrees
    rows = [
        {
            "node_id": table.id_of(v),
            "G": float(indicator.g[v]),
            "community": int(partition.labels[v]),
            "bc": float(centrality.bc[v]),
            "bridgeness": float(centrality.bridgeness[v]),
            "degree": int(degrees[v]),
        }
        for v in range(n)
    ]
    if sort_by is not None:
        if sort_by not in REPORT_COLUMNS:
            raise ValueError(f"unknown sort column {sort_by!r}")
        rows.sort(key=lambda row: row[sort_by], reverse=descending)
    return rows


def write_node_report(rows: Sequence[Mapping], stream: IO[str]) -> None:
    stream.write(",".join(REPORT_COLUMNS) + "\n")
    for row in rows:
        stream.write(
            "%s,%.12g,%d,%.12g,%.12g,%d\n"
            % (row["node_id"], row["G"], row["community"], row["bc"],
               row["bridgeness"], row["degree"])
        )


def write_curve_csv(curve: RankingCurve, path: str) -> None:
    """Two-column CSV (rank, ratio) plus a JSON metadata sidecar."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rank,ratio\n")
        for x, y in zip(curve.x, curve.y):
            fh.write(f"{int(x)},{y:.12g}\n")
    meta = {"name": curve.name, "window": curve.window, "points": int(len(curve.x))}
    with open(path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
