"""topocausal: causal network inference from discrete data.

Pipeline: estimate pairwise influence weights (the asymmetric net-influence
measure or symmetric Fisher z weights), pick a significance threshold from the
topology of the weighted graph (connected or knee of the LCC decay curve),
then apply zeroth- and first-order constraint stages.  Ships with synthetic
ground-truth generators, structure-recovery metrics, a PC-stable baseline,
and a benchmark harness; `topocausal --help` lists the CLI.
"""

from .dataset import (Assignment, Condition, Dataset, Variable, combine, count,
                      load_csv, prob, write_csv)
from .errors import DataError, NoConnectedThresholdError
from .evaluation import (BENCH_COLUMNS, ConfusionCounts, EvalReport, PcConfig,
                         bench, confusion, mcc, run_once, write_bench_csv,
                         write_bench_summary)
from .graph import (DIRECTED, UNDIRECTED, Network, Triad, UnionFind, is_acyclic,
                    lcc, read_edge_tsv, to_skeleton, topological_order, triads,
                    write_edge_tsv)
from .inference import (DAG, SKELETON, InferenceConfig, InferenceResult,
                        RemovedEdge, StageStats, count_two_cycles,
                        first_constraint, infer, zeroth_constraint)
from .measures import (FISHER, NI, EdgeWeight, InfluenceValue, WeightMatrix,
                       dump_weights, edge_weight_ni, edge_weight_ni_given,
                       fisher_weight, influence_distance, net_influence,
                       weight_matrix)
from .pc import pc_baseline, pc_skeleton
from .synth import (GenSpec, GroundTruth, attach_cpts, exact_joint,
                    exact_pair_conditionals, gen_method1, gen_method2, generate,
                    load_ground_truth, sample, save_ground_truth)
from .threshold import (CONNECTED, KNEE, LccCurve, RankedEdges, Threshold,
                        connected_threshold, curve_from_ranked, knee_threshold,
                        lcc_curve, ranked_edges, write_curve_csv)

__version__ = "0.1.0"

__all__ = [
    "Assignment", "BENCH_COLUMNS", "CONNECTED", "Condition", "ConfusionCounts",
    "DAG", "DIRECTED", "DataError", "Dataset", "EdgeWeight", "EvalReport",
    "FISHER", "GenSpec", "GroundTruth", "InferenceConfig", "InferenceResult",
    "InfluenceValue", "KNEE", "LccCurve", "NI", "Network",
    "NoConnectedThresholdError", "PcConfig", "RankedEdges", "RemovedEdge",
    "SKELETON", "StageStats", "Threshold", "Triad", "UNDIRECTED", "UnionFind",
    "Variable", "attach_cpts", "bench", "combine", "confusion",
    "connected_threshold", "count", "count_two_cycles", "curve_from_ranked",
    "dump_weights", "edge_weight_ni", "edge_weight_ni_given", "exact_joint",
    "exact_pair_conditionals", "first_constraint", "fisher_weight",
    "gen_method1", "gen_method2", "generate", "infer", "influence_distance",
    "is_acyclic", "knee_threshold", "lcc", "lcc_curve", "load_csv",
    "load_ground_truth", "mcc", "net_influence", "pc_baseline", "pc_skeleton",
    "prob", "ranked_edges", "read_edge_tsv", "run_once", "sample",
    "save_ground_truth", "to_skeleton", "topological_order", "triads",
    "weight_matrix", "write_bench_csv", "write_bench_summary", "write_csv",
    "write_curve_csv", "write_edge_tsv", "zeroth_constraint",
]
