"""Benchmark sweep: influence-threshold pipelines against a PC-stable baseline.

Runs a small repeated sweep and prints the aggregated score table -- the
same rows the `topocausal bench` command writes to CSV.

Run with:  python3 demos/pc_comparison.py
"""
from topocausal.evaluation import PcConfig, bench
from topocausal.inference import CONNECTED, DAG, KNEE, NI, InferenceConfig
from topocausal.synth import GenSpec


def main():
    sweep = [GenSpec(n_nodes=20, mean_degree=2.5, method=2, n_rows=5_000, seed=0)]
    configs = [
        InferenceConfig(NI, KNEE, DAG),
        InferenceConfig(NI, CONNECTED, DAG),
        PcConfig(mode=DAG),
    ]
    print("sweep: 20 nodes, mean degree 2.5, 5000 rows, 5 repetitions\n")
    report = bench(sweep, configs, reps=5, base_seed=1)

    header = f"{'config':>12} {'mcc':>7} {'fpr':>8} {'fnr':>7} {'t_total_s':>10}"
    print(header)
    print("-" * len(header))
    order = ["ni-knee", "ni-connected", "pc-none"]
    cells = {f"{c['measure']}-{c['threshold']}": c for c in report.summary["cells"]}
    for key in order:
        cell = cells[key]
        print(f"{key:>12} {cell['mcc']['mean']:7.3f} "
              f"{cell['fpr']['mean']:8.4f} {cell['fnr']['mean']:7.3f} "
              f"{cell['t_total_s']['mean']:10.3f}")

    failures = [r for r in report.rows if r["error"]]
    print(f"\n{len(report.rows)} runs, {len(failures)} recorded failures")


if __name__ == "__main__":
    main()
