"""Choosing the edge-weight cutoff from the connectivity curve.

Removes edges weakest-first from a pairwise weight matrix, tracks the size
of the largest connected component, and compares the two built-in cutoff
rules: keep the graph connected vs. stop at the knee of the curve.

Run with:  python3 demos/threshold_curve.py
"""
from topocausal.inference import CONNECTED, KNEE, NI
from topocausal.measures import weight_matrix
from topocausal.synth import GenSpec, generate
from topocausal.threshold import (connected_threshold, curve_from_ranked,
                                  knee_threshold, ranked_edges)


def sketch(curve, width=60):
    """Plain-text plot of LCC size against edges removed."""
    points = curve.points
    max_k = points[-1][0]
    step = max(1, len(points) // 24)
    for k, size in points[::step]:
        bar = "#" * round(width * size / curve.n_nodes)
        print(f"  removed {k:5d}  lcc {size:3d}  {bar}")


def main():
    gt, ds = generate(GenSpec(n_nodes=25, mean_degree=2.5, method=2,
                              n_rows=8_000, seed=1))
    wm = weight_matrix(ds, NI)
    ranked = ranked_edges(wm)
    print(f"{len(ranked)} positive-weight pairs over {wm.n} nodes "
          f"(true skeleton has {gt.dag.n_edges} edges)")

    curve = curve_from_ranked(ranked)
    sketch(curve)

    conn = connected_threshold(wm)
    knee = knee_threshold(curve, ranked)
    for t in (conn, knee):
        kept = sum(1 for _, _, w in ranked.entries if w > t.epsilon)
        print(f"\n{t.method:>9}: epsilon = {t.epsilon:.4f}, keeps {kept} pairs"
              + (f", removes {t.knee_removed} before the knee" if t.method == KNEE else ""))
        if t.dropped_nodes:
            print(f"           drops nodes {sorted(t.dropped_nodes)} from the LCC")

    assert conn.method == CONNECTED and knee.method == KNEE
    assert knee.epsilon >= conn.epsilon  # the knee never keeps more than connected


if __name__ == "__main__":
    main()
