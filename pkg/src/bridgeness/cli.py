"""Batch command-line frontend.

Subcommands wire ingestion, generation, centrality, the community indicator,
community detection and the ranking evaluation into reproducible file-in /
file-out pipelines. Every run writes a provenance JSON (inputs hash, config,
seed, tool version) next to its outputs; outputs contain no timestamps, so a
repeated command reproduces its files byte for byte.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .centrality import (
    CentralityResult,
    betweenness,
    bridgeness_bruteforce,
    bridgeness_exact,
    bridgeness_si_compat,
    default_workers,
    locterm_by_degree,
    write_centrality_csv,
    write_centrality_json,
)
from .community import LouvainConfig, louvain
from .evaluation import (
    cumulative_ratio_curve,
    curve_advantage,
    locterm_correlation,
    node_report,
    smooth,
    write_curve_csv,
    write_node_report,
)
from .graph import (
    EdgeListError,
    NodeTable,
    PartitionError,
    load_edge_list,
    load_partition,
    write_edge_list,
    write_partition,
)
from .indicator import global_indicator, write_indicator_csv
from .netgen import GenerationError, LfrConfig, generate

BRUTEFORCE_WARN_NODES = 2000

_DELIMITERS = {"whitespace": None, "comma": ","}


class CliError(Exception):
    """User-facing failure; message goes to stderr and the exit code is 1."""


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def _write_provenance(path: Path, command: str, args: argparse.Namespace,
                      inputs: list[Path], extra: dict | None = None) -> None:
    record = {
        "tool": "bridgeness",
        "version": __version__,
        "command": command,
        "config": {
            k: v for k, v in sorted(vars(args).items()) if k != "func" and v is not None
        },
        "inputs": {str(p): _sha256(p) for p in inputs},
    }
    if extra:
        record.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_graph(args: argparse.Namespace):
    path = Path(args.input)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return load_edge_list(
                fh,
                delimiter=_DELIMITERS[args.delimiter],
                has_weights=getattr(args, "weighted", False),
            )
    except OSError as exc:
        raise CliError(f"cannot read edge list: {exc}") from exc
    except EdgeListError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _load_partition_file(path_str: str, table: NodeTable):
    path = Path(path_str)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return load_partition(fh, table)
    except OSError as exc:
        raise CliError(f"cannot read partition: {exc}") from exc
    except PartitionError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _compute_variant(graph, variant: str, workers: int) -> CentralityResult:
    if variant == "exact":
        return bridgeness_exact(graph, workers=workers)
    if variant == "si-compat":
        si = bridgeness_si_compat(graph, workers=workers)
        bc = betweenness(graph, workers=workers)
        return CentralityResult(bc=bc, bridgeness=si, local=bc - si)
    if variant == "bruteforce":
        if graph.node_count > BRUTEFORCE_WARN_NODES:
            print(
                f"warning: brute-force variant on {graph.node_count} nodes is "
                "quadratic in memory and very slow",
                file=sys.stderr,
            )
        return bridgeness_bruteforce(graph)
    raise CliError(f"unknown variant {variant!r}")


def cmd_centrality(args: argparse.Namespace) -> int:
    graph, table = _load_graph(args)
    result = _compute_variant(graph, args.variant, args.workers)
    out = Path(args.output)
    with open(out, "w", encoding="utf-8") as fh:
        write_centrality_csv(result, graph, fh, table)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            write_centrality_json(result, graph, fh, table)
    _write_provenance(out.with_suffix(out.suffix + ".provenance.json"),
                      "centrality", args, [Path(args.input)])
    top_bc = int(result.bc.argmax()) if graph.node_count else -1
    top_bri = int(result.bridgeness.argmax()) if graph.node_count else -1
    print(f"nodes: {graph.node_count}")
    print(f"edges: {graph.edge_count}")
    if graph.node_count:
        print(f"max bc: {table.id_of(top_bc)} ({result.bc[top_bc]:.6g})")
        print(f"max bridgeness: {table.id_of(top_bri)} ({result.bridgeness[top_bri]:.6g})")
    return 0


def cmd_indicator(args: argparse.Namespace) -> int:
    graph, table = _load_graph(args)
    partition = _load_partition_file(args.partition, table)
    result = global_indicator(graph, partition)
    out = Path(args.output)
    with open(out, "w", encoding="utf-8") as fh:
        write_indicator_csv(result, partition, fh, table)
    _write_provenance(out.with_suffix(out.suffix + ".provenance.json"),
                      "indicator", args, [Path(args.input), Path(args.partition)])
    return 0


def cmd_communities(args: argparse.Namespace) -> int:
    graph, table = _load_graph(args)
    config = LouvainConfig(seed=args.seed, max_passes=args.max_passes, min_gain=args.min_gain)
    try:
        partition = louvain(graph, config)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out = Path(args.output)
    with open(out, "w", encoding="utf-8") as fh:
        write_partition(partition, table, fh)
    _write_provenance(out.with_suffix(out.suffix + ".provenance.json"),
                      "communities", args, [Path(args.input)])
    print(f"communities: {partition.community_count}")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        config = LfrConfig(
            n=args.n,
            communities=args.communities,
            mu=args.mu,
            seed=args.seed,
            exponent=args.exponent,
            min_degree=args.min_degree,
            max_degree=args.max_degree,
            mean_degree=args.mean_degree,
            selection=args.selection,
        )
        net = generate(config)
    except (ValueError, GenerationError) as exc:
        raise CliError(f"generation failed: {exc}") from exc

    prefix = Path(args.output_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    table = NodeTable.identity(net.graph.node_count)
    edges_path = prefix.with_suffix(".edges")
    partition_path = prefix.with_suffix(".communities.csv")
    with open(edges_path, "w", encoding="utf-8") as fh:
        write_edge_list(net.graph, table, fh)
    with open(partition_path, "w", encoding="utf-8") as fh:
        write_partition(net.ground_truth, table, fh)
    _write_provenance(
        prefix.with_suffix(".provenance.json"),
        "generate",
        args,
        [],
        extra={
            "achieved_mu": net.achieved_mu,
            "edge_count": net.graph.edge_count,
            "rewired_node_count": len(net.rewired_nodes),
        },
    )
    print(f"wrote {edges_path} ({net.graph.edge_count} edges)")
    print(f"wrote {partition_path} ({net.ground_truth.community_count} communities)")
    print(f"achieved_mu: {net.achieved_mu:.4f}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    if args.partition and args.detect:
        raise CliError("give either --partition or --detect, not both")
    if not args.partition and not args.detect:
        raise CliError("a partition is required: pass --partition FILE or --detect louvain")
    graph, table = _load_graph(args)
    inputs = [Path(args.input)]
    if args.partition:
        partition = _load_partition_file(args.partition, table)
        inputs.append(Path(args.partition))
    else:
        if args.detect != "louvain":
            raise CliError(f"unknown detection method {args.detect!r}")
        if args.seed is None:
            raise CliError("--detect louvain requires --seed")
        partition = louvain(graph, LouvainConfig(seed=args.seed))

    result = bridgeness_exact(graph, workers=args.workers)
    indicator_result = global_indicator(graph, partition)
    g = indicator_result.g

    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "g_scores.csv", "w", encoding="utf-8") as fh:
        write_indicator_csv(indicator_result, partition, fh, table)

    curves = {
        "g": cumulative_ratio_curve(g, g, name="g"),
        "bc": cumulative_ratio_curve(g, result.bc, name="bc"),
        "bridgeness": cumulative_ratio_curve(g, result.bridgeness, name="bridgeness"),
    }
    for name, curve in curves.items():
        write_curve_csv(curve, str(out_dir / f"curve_{name}.csv"))
        write_curve_csv(smooth(curve, args.window), str(out_dir / f"curve_{name}_smoothed.csv"))

    locterm = locterm_by_degree(result, graph)
    with open(out_dir / "locterm_by_degree.csv", "w", encoding="utf-8") as fh:
        fh.write("degree,mean_local_ratio\n")
        for k in sorted(locterm):
            fh.write(f"{k},{locterm[k]:.12g}\n")

    advantage = curve_advantage(curves["bridgeness"], curves["bc"])
    metrics = {
        "nodes": graph.node_count,
        "edges": graph.edge_count,
        "communities": partition.community_count,
        "curve_advantage_bridgeness_vs_bc": advantage,
        "locterm_pearson_r": None,
        "locterm_pearson_p": None,
    }
    if len(locterm) >= 3:
        r, p = locterm_correlation([locterm])
        metrics["locterm_pearson_r"] = r
        metrics["locterm_pearson_p"] = p
    with open(out_dir / "metrics.json", "w", encoding="utf-8") as fh:
        json.dump(metrics, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_provenance(out_dir / "provenance.json", "evaluate", args, inputs)
    print(f"curve_advantage(bridgeness, bc): {advantage:.6g}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    graph, table = _load_graph(args)
    partition = _load_partition_file(args.partition, table)
    result = bridgeness_exact(graph, workers=args.workers)
    indicator_result = global_indicator(graph, partition)
    rows = node_report(
        graph, partition, result, indicator_result,
        table=table, sort_by=args.sort_by, descending=not args.ascending,
    )
    out = Path(args.output)
    with open(out, "w", encoding="utf-8") as fh:
        write_node_report(rows, fh)
    _write_provenance(out.with_suffix(out.suffix + ".provenance.json"),
                      "report", args, [Path(args.input), Path(args.partition)])
    return 0


def _add_graph_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="edge-list file")
    parser.add_argument("--delimiter", choices=sorted(_DELIMITERS), default="whitespace")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bridgeness",
        description="Bridgeness centrality and community-bridge analysis",
    )
    parser.add_argument("--version", action="version", version=f"bridgeness {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("centrality", help="betweenness / bridgeness / local scores")
    _add_graph_input(p)
    p.add_argument("--weighted", action="store_true", help="input lines carry a weight column")
    p.add_argument("--output", required=True, help="CSV output path")
    p.add_argument("--json", help="optional JSON records output path")
    p.add_argument("--variant", choices=["exact", "si-compat", "bruteforce"], default="exact")
    p.add_argument("--workers", type=int, default=default_workers())
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("indicator", help="community-based global bridging scores")
    _add_graph_input(p)
    p.add_argument("--partition", required=True, help="node_id,community CSV")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_indicator)

    p = sub.add_parser("communities", help="Louvain modularity partition")
    _add_graph_input(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-passes", type=int, default=20)
    p.add_argument("--min-gain", type=float, default=1e-7)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("generate", help="synthetic community network with planted partition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--communities", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mean-degree", type=float, default=15.0)
    p.add_argument("--exponent", type=float, default=2.5)
    p.add_argument("--min-degree", type=int, default=12)
    p.add_argument("--max-degree", type=int, default=50)
    p.add_argument("--selection", choices=["node", "link"], default="node")
    p.add_argument("--output-prefix", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="ranking curves against the community indicator")
    _add_graph_input(p)
    p.add_argument("--partition", help="node_id,community CSV")
    p.add_argument("--detect", choices=["louvain"], help="detect the partition instead")
    p.add_argument("--seed", type=int, help="seed for --detect louvain")
    p.add_argument("--window", type=int, default=200)
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="per-node table: id, G, community, bc, bridgeness, degree")
    _add_graph_input(p)
    p.add_argument("--partition", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--sort-by", default="bc",
                   choices=["node_id", "G", "community", "bc", "bridgeness", "degree"])
    p.add_argument("--ascending", action="store_true")
    p.add_argument("--workers", type=int, default=default_workers())
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
