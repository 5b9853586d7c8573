"""Command line interface.

Subcommands: infer, synth, curve, eval, bench.  Data goes to files or stdout;
diagnostics go to stderr.  Exit codes: 0 success, 1 usage error, 2 data error,
3 algorithmic error (e.g. no connected threshold exists).

The worker count comes from --workers or the TOPOCAUSAL_WORKERS environment
variable; results are bit-identical for any setting.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import DataError, NoConnectedThresholdError
from .dataset import load_csv, write_csv
from .graph import read_edge_tsv, write_edge_tsv
from .inference import DAG, SKELETON, InferenceConfig, infer
from .measures import FISHER, NI, weight_matrix
from .threshold import (CONNECTED, KNEE, connected_threshold, knee_threshold,
                        curve_from_ranked, ranked_edges, write_curve_csv)
from .evaluation import (PcConfig,bench, confusion, mcc, write_bench_csv,
                         write_bench_summary)
from .synth import GenSpec, generate, load_ground_truth, save_ground_truth
from . import __version__


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise _UsageError(message)


def _workers(args) -> int | None:
    if getattr(args, "workers", None) is not None:
        return args.workers
    env = os.environ.get("TOPOCAUSAL_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise _UsageError(f"TOPOCAUSAL_WORKERS must be an integer, got {env!r}") from None
    return None


def _threshold_report(thr, names) -> dict:
    return {
        "epsilon": thr.epsilon,
        "threshold_method": thr.method,
        "fell_back": thr.fell_back,
        "dropped_nodes": [names[v] for v in sorted(thr.dropped_nodes)],
    }


def _cmd_infer(args) -> int:
    ds = load_csv(args.data)
    cfg = InferenceConfig(measure=args.measure, threshold_method=args.threshold,
                          mode=args.mode, max_order=args.max_order)
    result = infer(ds, cfg, workers=_workers(args))
    names = ds.names()
    write_edge_tsv(result.network, args.out, names)
    report = {
        "config": {"measure": cfg.measure, "threshold": cfg.threshold_method,
                   "mode": cfg.mode, "max_order": cfg.max_order},
        "n_nodes": ds.n_vars,
        "n_rows": ds.n_rows,
        **_threshold_report(result.epsilon, names),
        "edges_zeroth": result.stats.edges_zeroth,
        "edges_final": result.stats.edges_final,
        "removed_first_order": [
            {"src": names[r.source], "dst": names[r.target],
             "given": names[r.given], "weight": r.weight}
            for r in result.removed_first_order
        ],
        "two_cycles": result.stats.two_cycles,
        "acyclic": result.acyclic,
        "timings_s": {
            "weights": result.stats.t_weights_s,
            "threshold": result.stats.t_threshold_s,
            "constrain": result.stats.t_constrain_s,
            "total": result.stats.t_total_s,
        },
    }
    with open(args.report, "w", encoding="utf-8", newline="") as fh:
        json.dump(report, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {result.network.n_edges} edges to {args.out}; report in {args.report}",
          file=sys.stderr)
    return 0


def _cmd_synth(args) -> int:
    spec = GenSpec(n_nodes=args.nodes, mean_degree=args.mean_degree,
                   method=args.method, n_rows=args.rows, seed=args.seed)
    gt, ds = generate(spec)
    write_csv(ds, args.out_data)
    save_ground_truth(gt, args.out_truth, names=ds.names())
    print(f"wrote {ds.n_rows} rows x {ds.n_vars} vars to {args.out_data}; "
          f"truth ({gt.dag.n_edges} edges) in {args.out_truth}", file=sys.stderr)
    return 0


def _cmd_curve(args) -> int:
    ds = load_csv(args.data)
    wm = weight_matrix(ds, args.measure, workers=_workers(args))
    ranked = ranked_edges(wm)
    curve = curve_from_ranked(ranked)
    write_curve_csv(curve, args.out)
    thr = (knee_threshold(curve, ranked) if args.threshold == KNEE
           else connected_threshold(wm))
    sidecar = {"measure": args.measure, "n_edges_ranked": len(ranked),
               **_threshold_report(thr, ds.names())}
    with open(args.report, "w", encoding="utf-8", newline="") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(curve.points)} curve points to {args.out}; "
          f"epsilon={thr.epsilon!r} in {args.report}", file=sys.stderr)
    return 0


def _cmd_eval(args) -> int:
    gt, names = load_ground_truth(args.truth)
    mode = args.mode
    inferred = read_edge_tsv(args.inferred, gt.dag.n_nodes,
                             mode="directed" if mode == DAG else "undirected",
                             names=names)
    counts = confusion(gt.dag, inferred, mode)
    report = {
        "mode": mode,
        "tp": counts.tp, "fp": counts.fp, "fn": counts.fn, "tn": counts.tn,
        "fpr": counts.fpr, "fnr": counts.fnr, "mcc": mcc(counts),
    }
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise _UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise _UsageError(f"{flag} expects comma-separated numbers, got {text!r}") from None


_CONFIG_NAMES = {
    "niknee": InferenceConfig(measure=NI, threshold_method=KNEE),
    "niconnected": InferenceConfig(measure=NI, threshold_method=CONNECTED),
    "fisherknee": InferenceConfig(measure=FISHER, threshold_method=KNEE),
    "fisherconnected": InferenceConfig(measure=FISHER, threshold_method=CONNECTED),
}


def _cmd_bench(args) -> int:
    nodes = _parse_int_list(args.nodes, "--nodes")
    degrees = _parse_float_list(args.mean_degree, "--mean-degree")
    rows_list = _parse_int_list(args.rows, "--rows")
    if not nodes or not degrees or not rows_list:
        raise _UsageError("--nodes, --mean-degree, and --rows need at least one value")
    configs = []
    for token in (t.strip().lower() for t in args.configs.split(",")):
        if token == "pc":
            configs.append(PcConfig(alpha=args.alpha, mode=args.mode))
        elif token in _CONFIG_NAMES:
            base = _CONFIG_NAMES[token]
            configs.append(InferenceConfig(measure=base.measure,
                                           threshold_method=base.threshold_method,
                                           mode=args.mode, max_order=args.max_order))
        else:
            raise _UsageError(
                f"unknown config {token!r}; choose from "
                f"{', '.join([*_CONFIG_NAMES, 'pc'])}")
    sweep = []
    cell = 0
    for n in nodes:
        for d in degrees:
            for r in rows_list:
                sweep.append(GenSpec(n_nodes=n, mean_degree=d, method=args.method,
                                     n_rows=r, seed=cell))
                cell += 1
    report = bench(sweep, configs, reps=args.reps, base_seed=args.seed,
                   workers=_workers(args))
    write_bench_csv(report, args.out)
    write_bench_summary(report, args.summary)
    n_err = sum(1 for row in report.rows if row["error"])
    print(f"wrote {len(report.rows)} rows to {args.out} "
          f"({n_err} failures); summary in {args.summary}", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="topocausal",
                     description="Causal network inference with topology-derived thresholds")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer", help="infer a network from a CSV dataset")
    p.add_argument("--data", required=True, help="input CSV (header row mandatory)")
    p.add_argument("--measure", choices=[NI, FISHER], default=NI)
    p.add_argument("--threshold", choices=[CONNECTED, KNEE], default=KNEE)
    p.add_argument("--mode", choices=[DAG, SKELETON], default=DAG)
    p.add_argument("--max-order", type=int, choices=[0, 1], default=1)
    p.add_argument("--out", default="network.tsv", help="edge-list TSV output")
    p.add_argument("--report", default="inference.json", help="JSON report output")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("synth", help="generate a synthetic network and dataset")
    p.add_argument("--method", type=int, choices=[1, 2], default=2)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--mean-degree", type=float, required=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-data", default="synth_data.csv")
    p.add_argument("--out-truth", default="synth_truth.json")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("curve", help="emit the LCC decay curve and chosen threshold")
    p.add_argument("--data", required=True)
    p.add_argument("--measure", choices=[NI, FISHER], default=NI)
    p.add_argument("--threshold", choices=[CONNECTED, KNEE], default=KNEE)
    p.add_argument("--out", default="curve.csv")
    p.add_argument("--report", default="threshold.json")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_curve)

    p = sub.add_parser("eval", help="score an inferred edge list against ground truth")
    p.add_argument("--truth", required=True, help="ground-truth JSON from synth")
    p.add_argument("--inferred", required=True, help="edge-list TSV")
    p.add_argument("--mode", choices=[DAG, SKELETON], default=DAG)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="sweep synthetic settings and score every config")
    p.add_argument("--nodes", required=True, help="comma-separated node counts")
    p.add_argument("--mean-degree", default="3", help="comma-separated mean degrees")
    p.add_argument("--rows", default="10000", help="comma-separated row counts")
    p.add_argument("--method", type=int, choices=[1, 2], default=2)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--configs", default="niknee,niconnected,fisherknee,fisherconnected,pc")
    p.add_argument("--mode", choices=[DAG, SKELETON], default=DAG)
    p.add_argument("--max-order", type=int, choices=[0, 1], default=1)
    p.add_argument("--alpha", type=float, default=0.05, help="PC baseline test size")
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--summary", default="bench_summary.json")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except NoConnectedThresholdError as err:
        print(f"algorithmic error: {err}", file=sys.stderr)
        return 3
    except DataError as err:
        print(f"data error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"data error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
