"""Structure-recovery metrics and the benchmark harness.

DAG mode scores all n(n-1) ordered pairs, so a reversed edge costs one false
positive and one false negative; skeleton mode scores the n(n-1)/2 unordered
pairs.  FPR = fp / (fp + tn), FNR = fn / (fn + tp), and MCC uses the standard
four-count formula; whenever a denominator factor is zero the metric is
undefined and reported as None (CSV: empty field), never coerced to 0.

`bench` sweeps generation specs x configurations, scoring each repetition
against its ground truth.  Seeds derive from (base_seed, cell seed, rep), so
the full table is reproducible and independent of the worker count; per-run
failures are recorded in the row's `error` column without aborting the sweep.
"""
from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .graph import DIRECTED, Network, to_skeleton
from .inference import DAG, SKELETON, InferenceConfig, _infer_with_weights
from .measures import weight_matrix
from .pc import pc_baseline
from .synth import GenSpec, generate

BENCH_COLUMNS = (
    "method", "measure", "threshold", "mode", "n_nodes", "mean_degree", "n_rows",
    "rep", "fpr", "fnr", "mcc",
    "t_weights_s", "t_threshold_s", "t_constrain_s", "t_total_s", "error",
)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int
    mode: str

    @property
    def fpr(self) -> float | None:
        return self.fp / (self.fp + self.tn) if (self.fp + self.tn) > 0 else None

    @property
    def fnr(self) -> float | None:
        return self.fn / (self.fn + self.tp) if (self.fn + self.tp) > 0 else None


def confusion(truth: Network, inferred: Network, mode: str) -> ConfusionCounts:
    """Count edge decisions over ordered (dag) or unordered (skeleton) pairs."""
    if truth.n_nodes != inferred.n_nodes:
        raise DataError("networks must share the node count")
    if mode not in (DAG, SKELETON):
        raise DataError(f"unknown mode {mode!r}")
    n = truth.n_nodes
    if mode == SKELETON:
        t = to_skeleton(truth) if truth.mode == DIRECTED else truth
        g = to_skeleton(inferred) if inferred.mode == DIRECTED else inferred
        pairs = ((a, b) for a in range(n) for b in range(a + 1, n))
    else:
        if truth.mode != DIRECTED or inferred.mode != DIRECTED:
            raise DataError("dag-mode scoring needs directed networks")
        t, g = truth, inferred
        pairs = ((a, b) for a in range(n) for b in range(n) if a != b)
    tp = fp = fn = tn = 0
    for a, b in pairs:
        in_t = t.has_edge(a, b)
        in_g = g.has_edge(a, b)
        if in_t and in_g:
            tp += 1
        elif in_t:
            fn += 1
        elif in_g:
            fp += 1
        else:
            tn += 1
    return ConfusionCounts(tp, fp, fn, tn, mode)


def mcc(counts: ConfusionCounts) -> float | None:
    """Matthews correlation; None when any denominator factor is zero."""
    tp, fp, fn, tn = counts.tp, counts.fp, counts.fn, counts.tn
    for factor in (tp + fp, tp + fn, tn + fp, tn + fn):
        if factor == 0:
            return None
    denom = math.sqrt(tp + fp) * math.sqrt(tp + fn) * math.sqrt(tn + fp) * math.sqrt(tn + fn)
    return (tp * tn - fp * fn) / denom


@dataclass(frozen=True)
class PcConfig:
    alpha: float = 0.05
    mode: str = DAG

    def label(self) -> str:
        return "PC"


@dataclass
class EvalReport:
    """Raw per-run rows plus per-cell aggregates."""

    rows: list[dict]
    summary: dict


def config_label(cfg) -> str:
    return cfg.label()


def _score(gt_dag: Network, net: Network, mode: str) -> tuple[float | None, float | None, float | None]:
    counts = confusion(gt_dag, net, mode)
    return counts.fpr, counts.fnr, mcc(counts)


def run_once(spec: GenSpec, configs, rep: int, base_seed: int = 0) -> list[dict]:
    """One repetition of one sweep cell: generate, fit every config, score."""
    rows = []
    gt, ds = generate(spec, seed=[base_seed, spec.seed, rep])
    cell = {
        "method": spec.method,
        "n_nodes": spec.n_nodes,
        "mean_degree": spec.mean_degree,
        "n_rows": spec.n_rows,
        "rep": rep,
    }
    matrices: dict[str, tuple] = {}
    for cfg in configs:
        row = dict(cell)
        row.update({
            "fpr": None, "fnr": None, "mcc": None,
            "t_weights_s": None, "t_threshold_s": None, "t_constrain_s": None,
            "t_total_s": None, "error": "",
        })
        try:
            if isinstance(cfg, PcConfig):
                row.update({"measure": "pc", "threshold": "none", "mode": cfg.mode})
                t0 = time.perf_counter()
                net = pc_baseline(ds, alpha=cfg.alpha, mode=cfg.mode)
                row["t_total_s"] = time.perf_counter() - t0
            else:
                row.update({"measure": cfg.measure, "threshold": cfg.threshold_method,
                            "mode": cfg.mode})
                if cfg.measure not in matrices:
                    t0 = time.perf_counter()
                    wm = weight_matrix(ds, cfg.measure)
                    matrices[cfg.measure] = (wm, time.perf_counter() - t0)
                wm, t_weights = matrices[cfg.measure]
                result = _infer_with_weights(ds, cfg, wm, t_weights)
                net = result.network
                st = result.stats
                row.update({
                    "t_weights_s": st.t_weights_s, "t_threshold_s": st.t_threshold_s,
                    "t_constrain_s": st.t_constrain_s, "t_total_s": st.t_total_s,
                })
            fpr, fnr, mcc_value = _score(gt.dag, net, row["mode"])
            row.update({"fpr": fpr, "fnr": fnr, "mcc": mcc_value})
        except Exception as err:  # recorded, never aborts the sweep
            row["error"] = f"{type(err).__name__}: {err}"
        rows.append(row)
    return rows


def _aggregate(values: list[float]) -> dict | None:
    if not values:
        return None
    return {
        "mean": float(np.mean(values)),
        "min": float(np.min(values)),
        "max": float(np.max(values)),
    }


def bench(sweep, configs, reps: int, base_seed: int = 0,
          workers: int | None = None) -> EvalReport:
    """Run the full sweep; deterministic for any worker count."""
    sweep = list(sweep)
    configs = list(configs)
    if reps < 1:
        raise DataError(f"reps must be >= 1, got {reps}")
    tasks = [(spec, rep) for spec in sweep for rep in range(reps)]
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(
                lambda t: run_once(t[0], configs, t[1], base_seed), tasks))
    else:
        batches = [run_once(spec, configs, rep, base_seed) for spec, rep in tasks]
    rows = [row for batch in batches for row in batch]

    cells: dict[tuple, dict] = {}
    for row in rows:
        key = (row["method"], row["measure"], row["threshold"], row["mode"],
               row["n_nodes"], row["mean_degree"], row["n_rows"])
        cell = cells.setdefault(key, {"rows": [], "errors": []})
        cell["rows"].append(row)
        if row["error"]:
            cell["errors"].append({"rep": row["rep"], "error": row["error"]})

    summary_cells = []
    for key in sorted(cells, key=lambda k: tuple(map(str, k))):
        bucket = cells[key]
        ok = [r for r in bucket["rows"] if not r["error"]]
        entry = {
            "method": key[0], "measure": key[1], "threshold": key[2], "mode": key[3],
            "n_nodes": key[4], "mean_degree": key[5], "n_rows": key[6],
            "n_runs": len(bucket["rows"]), "n_ok": len(ok),
            "n_mcc_undefined": sum(1 for r in ok if r["mcc"] is None),
            "errors": bucket["errors"],
        }
        for metric in ("fpr", "fnr", "mcc", "t_total_s"):
            entry[metric] = _aggregate([r[metric] for r in ok if r[metric] is not None])
        summary_cells.append(entry)

    # normalize runtimes by the PC cell sharing the same generation settings
    pc_means = {
        (c["method"], c["mode"], c["n_nodes"], c["mean_degree"], c["n_rows"]):
            c["t_total_s"]["mean"]
        for c in summary_cells if c["measure"] == "pc" and c["t_total_s"]
    }
    for c in summary_cells:
        ref = pc_means.get((c["method"], c["mode"], c["n_nodes"], c["mean_degree"], c["n_rows"]))
        if c["t_total_s"] and ref:
            c["time_vs_pc"] = c["t_total_s"]["mean"] / ref
        else:
            c["time_vs_pc"] = None

    summary = {"base_seed": base_seed, "reps": reps, "cells": summary_cells}
    return EvalReport(rows, summary)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_bench_csv(report: EvalReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_COLUMNS)
        for row in report.rows:
            writer.writerow([_format_cell(row.get(col)) for col in BENCH_COLUMNS])


def write_bench_summary(report: EvalReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(report.summary, fh, sort_keys=True, indent=1)
        fh.write("\n")
