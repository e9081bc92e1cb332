"""Command-line interface.

Exit codes: 0 success, 1 unreadable or malformed input, 2 invalid
configuration (argparse usage errors also exit 2).
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from .dataio import EdgeListError, load_multiplex_edgelist, write_multiplex_edgelist, write_results
from .evaluation import ALL_METHODS, DEFAULT_COMPARISONS, SplitSpec, run_benchmark
from .graph import GraphError, MultiplexNetwork, universal_pairs
from .interlayer import layer_similarity_report
from .predictor import PredictionConfig, allocate_scores
from .synthetic import SyntheticSpec, generate_synthetic

DEFAULT_SEED = 12345

EXIT_OK, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def _load(path: str) -> MultiplexNetwork:
    try:
        return load_multiplex_edgelist(path)
    except (OSError, EdgeListError) as exc:
        raise _InputError(str(exc)) from exc


class _InputError(Exception):
    pass


def _fmt_num(x, width=8) -> str:
    if x is None:
        return "undef".rjust(width)
    return f"{x:{width}.4f}"


def _matrix(title: str, names: Sequence[str], rows, out) -> None:
    print(title, file=out)
    print("        " + "".join(n[:8].rjust(9) for n in names), file=out)
    for name, row in zip(names, rows):
        print(f"{name[:8]:>8}" + "".join(" " + _fmt_num(x) for x in row), file=out)


def print_report(net: MultiplexNetwork, out=None):
    """Print per-layer statistics and interlayer matrices; return the report."""
    out = out or sys.stdout
    rep = layer_similarity_report(net)
    names = rep.layer_names
    print(f"nodes: {rep.node_count}  layers: {len(names)}", file=out)
    for name, e, d in zip(names, rep.edge_counts, rep.densities):
        print(f"  layer {name}: {e} edges, density {d:.6f}", file=out)
    _matrix("S_CW (centrality similarity)", names, rep.s_cw, out)
    _matrix("AASN (row layer vs column layer)", names, rep.aasn, out)
    for a in rep.undefined_aasn_rows:
        print(f"  AASN row {names[a]}: undefined (layer has no edges)", file=out)
    _matrix("likelihood (row target, column predictor)", names, rep.likelihood, out)
    return rep


def _parse_weights(text: str | None) -> dict[int, float]:
    if not text:
        return {}
    vals = [float(x) for x in text.split(",")]
    return {i: w for i, w in enumerate(vals)}


def _config(args) -> PredictionConfig:
    return PredictionConfig(
        target_layer=args.target,
        base_method=args.base_method,
        rho_damping=not args.no_rho_damping,
        behavior_weights=_parse_weights(args.behavior_weights),
    )


def cmd_inspect(args) -> int:
    net = _load(args.input)
    rep = print_report(net)
    if args.out:
        write_results(rep, args.format, args.out)
    return EXIT_OK


def cmd_predict(args) -> int:
    net = _load(args.input)
    cfg = _config(args)
    cfg.validate(net)
    if args.top_k < 1:
        raise ConfigError("--top-k must be at least 1")
    training = net.layer(cfg.target_layer).edges()
    candidates = universal_pairs(net) - training
    if args.top_k > len(candidates):
        raise ConfigError(f"--top-k {args.top_k} exceeds the {len(candidates)} candidate pairs")
    ranking = allocate_scores(net, cfg, training, candidates)
    for w in ranking.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"{'rank':>4}  {'u':>10}  {'v':>10}  score")
    for rank, (a, b, s) in enumerate(ranking.top(args.top_k), start=1):
        print(f"{rank:>4}  {net.labels[a]!s:>10}  {net.labels[b]!s:>10}  {s:.6g}")
    if args.out:
        write_results(ranking.head(args.top_k), args.format, args.out, labels=net.labels)
    return EXIT_OK


def _run_eval(args, default_methods) -> int:
    net = _load(args.input)
    cfg = _config(args)
    methods = args.methods.split(",") if args.methods else list(default_methods)
    spec = SplitSpec(
        holdout_fraction=args.holdout,
        holdout_count=args.split_count,
        trials=args.trials,
        seed=args.seed,
    )
    results = run_benchmark(net, cfg, spec, methods, comparisons=args.comparisons)
    print(f"{'method':<8} {'AUC mean':>9} {'AUC std':>8} {'Prec mean':>10} {'Prec std':>9}")
    for name, res in results.items():
        agg = res.aggregate
        print(
            f"{name:<8} {agg['auc_mean']:9.4f} {agg['auc_std']:8.4f} "
            f"{agg['precision_mean']:10.4f} {agg['precision_std']:9.4f}"
        )
    if args.out:
        write_results(results, args.format, args.out, meta={"input": str(args.input)})
    return EXIT_OK


def cmd_evaluate(args) -> int:
    return _run_eval(args, ["nlflp"])


def cmd_benchmark(args) -> int:
    return _run_eval(args, ALL_METHODS)


def cmd_generate(args) -> int:
    spec = SyntheticSpec(
        nodes=args.nodes,
        layers=args.layers,
        base_density=args.density,
        correlation=args.correlation,
        target_layer_density=args.target_density,
        seed=args.seed,
    )
    net = generate_synthetic(spec)
    write_multiplex_edgelist(net, args.out)
    print(f"wrote {net!r} to {args.out}")
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="multiplex edge list: 'layer node node [weight]' per line")
    p.add_argument("--out", help="write machine-readable results to this path")
    p.add_argument("--format", choices=["csv", "json"], help="output format (default: from --out suffix)")


def _add_predictor(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target", type=int, default=0, help="target layer index (0-based, after remapping)")
    p.add_argument("--base-method", default="cn", choices=["cn", "jc", "aa", "lhn", "hdi"],
                   help="similarity index feeding the weighted score")
    p.add_argument("--no-rho-damping", action="store_true", help="disable halving of edge ratios above 1")
    p.add_argument("--behavior-weights", help="comma-separated per-layer weight multipliers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multiplex-lp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="layer statistics and interlayer similarity")
    _add_common(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("predict", help="rank missing links of the target layer")
    _add_common(p)
    _add_predictor(p)
    p.add_argument("--top-k", type=int, default=10)
    p.set_defaults(func=cmd_predict)

    for name, func, default in (
        ("evaluate", cmd_evaluate, "nlflp"),
        ("benchmark", cmd_benchmark, ",".join(ALL_METHODS)),
    ):
        p = sub.add_parser(name, help=f"hold-out AUC/precision (default methods: {default})")
        _add_common(p)
        _add_predictor(p)
        p.add_argument("--methods", help=f"comma-separated subset of {','.join(ALL_METHODS)}")
        split = p.add_mutually_exclusive_group()
        split.add_argument("--holdout", type=float, default=0.1, help="fraction of target edges held out")
        split.add_argument("--split-count", type=int, help="number of target edges held out")
        p.add_argument("--trials", type=int, default=20)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--comparisons", type=int, default=DEFAULT_COMPARISONS,
                       help="sampled AUC comparisons per trial")
        p.set_defaults(func=func)

    p = sub.add_parser("generate", help="write a synthetic correlated multiplex network")
    p.add_argument("--nodes", type=int, default=500)
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--density", type=float, default=0.02)
    p.add_argument("--correlation", type=float, default=0.8)
    p.add_argument("--target-density", type=float, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
