"""Net influence on a small hand-built dataset.

Walks through the pairwise measure step by step: the two conditional
probabilities it subtracts, the sign convention, the source/target
asymmetry, and the exact zero it produces on a factorized table.

Run with:  python3 demos/influence_basics.py
"""
import numpy as np

from topocausal.dataset import Assignment, Condition, Dataset, Variable, prob
from topocausal.inference import NI
from topocausal.measures import net_influence, weight_matrix


def dataset_from_counts(names, alphabets, counts):
    """Expand a {state tuple: count} table into an encoded dataset."""
    rows = []
    for states, c in sorted(counts.items()):
        rows.extend([list(states)] * c)
    variables = tuple(
        Variable(name, tuple(alphabet), k)
        for k, (name, alphabet) in enumerate(zip(names, alphabets)))
    return Dataset(variables, np.array(rows))


def main():
    # P(wet | rain) = 0.9 and P(wet | no rain) = 0.3 by construction.
    ds = dataset_from_counts(
        names=["rain", "grass"],
        alphabets=[("no", "yes"), ("dry", "wet")],
        counts={(0, 0): 70, (0, 1): 30, (1, 0): 10, (1, 1): 90},
    )
    wet = Assignment((Condition(1, 1),))
    rain = Assignment((Condition(0, 1),))
    no_rain = Assignment((Condition(0, 1, negated=True),))

    p_if = prob(ds, wet, rain)
    p_else = prob(ds, wet, no_rain)
    print(f"P(grass=wet | rain=yes)      = {p_if:.3f}")
    print(f"P(grass=wet | rain is other) = {p_else:.3f}")

    w = net_influence(ds, target=Condition(1, 1), source=Condition(0, 1))
    print(f"net influence W(wet | rain)  = {w.value:+.3f}  "
          f"(the difference of the two, so +{p_if - p_else:.3f})")
    assert w.value == p_if - p_else

    # The measure is asymmetric: swapping source and target reads the same
    # table the other way around and lands on a different number.
    w_rev = net_influence(ds, target=Condition(0, 1), source=Condition(1, 1))
    print(f"reversed   W(rain | wet)     = {w_rev.value:+.3f}")

    # On a factorized table (independent margins) every state pair gives
    # exactly zero -- same counts cancel on both sides of the subtraction.
    marg_a, marg_b = [3, 1], [1, 3]
    rows = []
    for a, ka in enumerate(marg_a):
        for b, kb in enumerate(marg_b):
            rows.extend([[a, b]] * (ka * kb))
    ds_ind = Dataset(
        (Variable("a", ("0", "1"), 0), Variable("b", ("0", "1"), 1)),
        np.array(rows))
    w_ind = net_influence(ds_ind, Condition(1, 1), Condition(0, 0))
    print(f"independent margins          = {w_ind.value:+.3f} (exact zero: "
          f"{w_ind.value == 0.0})")

    # weight_matrix scans every ordered pair and keeps, per pair, the state
    # combination with the largest magnitude.
    rng = np.random.default_rng(7)
    codes = np.column_stack([
        rng.integers(0, 2, size=500),
        rng.integers(0, 3, size=500),
        rng.integers(0, 2, size=500),
    ])
    ds_rand = Dataset(
        (Variable("x", ("0", "1"), 0),
         Variable("y", ("0", "1", "2"), 1),
         Variable("z", ("0", "1"), 2)),
        codes)
    wm = weight_matrix(ds_rand, NI)
    print("\npairwise weight matrix on 500 independent rows (noise floor):")
    with np.printoptions(precision=3, suppress=True):
        print(wm.weights)


if __name__ == "__main__":
    main()
