"""Ground-truth generators, CPT attachment, ancestral sampling, serialization."""
import numpy as np
import pytest

from topocausal.dataset import write_csv
from topocausal.errors import DataError
from topocausal.graph import DIRECTED, Network, is_acyclic
from topocausal.synth import (GenSpec, GroundTruth, attach_cpts, exact_joint,
                              exact_pair_conditionals, gen_method1,
                              gen_method2, generate, load_ground_truth, sample,
                              save_ground_truth)


# ---------------------------------------------------------------- specs

def test_genspec_validation():
    with pytest.raises(DataError):
        GenSpec(1, 3.0, 2, 100, 0)
    with pytest.raises(DataError):
        GenSpec(10, 0.0, 2, 100, 0)
    with pytest.raises(DataError):
        GenSpec(10, 3.0, 5, 100, 0)
    with pytest.raises(DataError):
        GenSpec(10, 12.0, 2, 100, 0)  # p would exceed 1


def test_ground_truth_validation():
    dag = Network(2, DIRECTED)
    dag.add_edge(0, 1)
    bad_row = [np.array([[0.5, 0.5]]), np.array([[0.7, 0.7], [0.5, 0.5]])]
    with pytest.raises(DataError):
        GroundTruth(dag, [2, 2], bad_row, seed=0)
    cyc = Network(2, DIRECTED)
    cyc.add_edge(0, 1)
    cyc.add_edge(1, 0)
    ok_rows = [np.array([[0.5, 0.5], [0.5, 0.5]])] * 2
    with pytest.raises(DataError):
        GroundTruth(cyc, [2, 2], ok_rows, seed=0)


# ---------------------------------------------------------------- method 1

def test_method1_two_nodes():
    net = gen_method1(GenSpec(2, 3.0, 1, 10, seed=4))
    assert net.n_edges == 1 and net.has_edge(1, 0)


def test_method1_single_sink():
    """Every generated network has exactly one out-degree-0 node."""
    for seed in range(40):
        net = gen_method1(GenSpec(25, 3.0, 1, 10, seed=seed))
        sinks = [v for v in range(25) if not net.children(v)]
        assert sinks == [0]
        assert is_acyclic(net)


def test_method1_mean_degree_band():
    """Realized mean total degree lands in [2.5, 3.5] for mean_degree 3."""
    degs = []
    for seed in range(100):
        net = gen_method1(GenSpec(60, 3.0, 1, 10, seed=seed))
        degs.append(2 * net.n_edges / 60)
    assert 2.5 <= np.mean(degs) <= 3.5


def test_method1_low_degree_degenerates_to_tree():
    """mean_degree <= 2 forces out-degree 1: a random recursive tree."""
    for seed in range(10):
        net = gen_method1(GenSpec(30, 1.3, 1, 10, seed=seed))
        assert net.n_edges == 29
        assert all(len(net.children(v)) == 1 for v in range(1, 30))


def test_method1_edges_point_to_older_nodes():
    net = gen_method1(GenSpec(40, 3.0, 1, 10, seed=3))
    assert all(s > t for s, t in net.edges())


# ---------------------------------------------------------------- method 2

def test_method2_expected_edge_count():
    """n * mean_degree / 2 = 90 expected edges; empirical mean within 10%."""
    counts = [
        gen_method2(GenSpec(60, 3.0, 2, 10, seed=seed)).n_edges
        for seed in range(100)
    ]
    assert abs(np.mean(counts) - 90) < 9


def test_method2_triangular_and_acyclic():
    for seed in range(20):
        net = gen_method2(GenSpec(30, 3.0, 2, 10, seed=seed))
        assert all(a < b for a, b in net.edges())
        assert is_acyclic(net)


def test_method_dispatch_guard():
    with pytest.raises(DataError):
        gen_method1(GenSpec(10, 3.0, 2, 10, seed=0))
    with pytest.raises(DataError):
        gen_method2(GenSpec(10, 3.0, 1, 10, seed=0))


# ---------------------------------------------------------------- cpts

def test_attach_cpts_shapes():
    dag = Network(3, DIRECTED)
    dag.add_edge(0, 2)
    dag.add_edge(1, 2)
    gt = attach_cpts(dag, seed=12)
    assert all(2 <= s <= 4 for s in gt.states_per_node)
    assert gt.cpts[0].shape == (1, gt.states_per_node[0])  # root: single row
    assert gt.cpts[1].shape == (1, gt.states_per_node[1])
    n_cfg = gt.states_per_node[0] * gt.states_per_node[1]
    assert gt.cpts[2].shape == (n_cfg, gt.states_per_node[2])


def test_attach_cpts_rows_normalized():
    rng = np.random.default_rng(31)
    for seed in range(20):
        spec = GenSpec(12, 3.0, 2, 10, seed=seed)
        gt = attach_cpts(gen_method2(spec), seed=seed)
        for table in gt.cpts:
            np.testing.assert_allclose(table.sum(axis=1), 1.0, atol=1e-12)


def test_attach_cpts_state_count_coverage():
    seen = set()
    for seed in range(30):
        gt = attach_cpts(Network(6, DIRECTED), seed=seed)
        seen.update(gt.states_per_node)
    assert seen == {2, 3, 4}


def test_attach_cpts_concentration_guard():
    with pytest.raises(DataError):
        attach_cpts(Network(2, DIRECTED), seed=0, concentration=0.0)


# ---------------------------------------------------------------- sampling

def test_sample_root_frequency():
    dag = Network(1, DIRECTED)
    gt = GroundTruth(dag, [2], [np.array([[0.7, 0.3]])], seed=0)
    ds = sample(gt, 100_000, seed=6)
    freq = np.mean(ds.codes[:, 0] == 0)
    assert abs(freq - 0.7) < 0.01


def test_sample_deterministic_chain_exact():
    """One-hot CPTs: every sampled row obeys the deterministic relations."""
    dag = Network(3, DIRECTED)
    dag.add_edge(0, 1)
    dag.add_edge(1, 2)
    cpts = [
        np.array([[0.4, 0.6]]),
        np.array([[0.0, 1.0], [1.0, 0.0]]),   # node1 = NOT node0
        np.array([[1.0, 0.0], [0.0, 1.0]]),   # node2 = node1
    ]
    gt = GroundTruth(dag, [2, 2, 2], cpts, seed=0)
    ds = sample(gt, 5000, seed=8)
    assert np.all(ds.codes[:, 1] == 1 - ds.codes[:, 0])
    assert np.all(ds.codes[:, 2] == ds.codes[:, 1])


def test_sample_reproducible():
    gt, _ = generate(GenSpec(10, 3.0, 2, 10, seed=44))
    a = sample(gt, 1000, seed=3)
    b = sample(gt, 1000, seed=3)
    c = sample(gt, 1000, seed=4)
    assert np.array_equal(a.codes, b.codes)
    assert not np.array_equal(a.codes, c.codes)


def test_sample_respects_parent_configurations():
    """Empirical conditionals track the CPT rows they were drawn from."""
    dag = Network(2, DIRECTED)
    dag.add_edge(0, 1)
    cpts = [
        np.array([[0.5, 0.5]]),
        np.array([[0.9, 0.1], [0.2, 0.8]]),
    ]
    gt = GroundTruth(dag, [2, 2], cpts, seed=0)
    ds = sample(gt, 50_000, seed=13)
    mask0 = ds.codes[:, 0] == 0
    assert abs(np.mean(ds.codes[mask0, 1] == 0) - 0.9) < 0.01
    assert abs(np.mean(ds.codes[~mask0, 1] == 0) - 0.2) < 0.01


# ---------------------------------------------------------------- generate

def test_generate_deterministic_files(tmp_path):
    """Same spec, two runs: byte-identical CSV and ground-truth JSON."""
    spec = GenSpec(15, 3.0, 2, 500, seed=7)
    for tag in ("a", "b"):
        gt, ds = generate(spec)
        write_csv(ds, tmp_path / f"{tag}.csv")
        save_ground_truth(gt, tmp_path / f"{tag}.json", names=ds.names())
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_generate_seed_changes_output():
    gt1, ds1 = generate(GenSpec(15, 3.0, 2, 500, seed=7))
    gt2, ds2 = generate(GenSpec(15, 3.0, 2, 500, seed=8))
    assert gt1.dag != gt2.dag or not np.array_equal(ds1.codes, ds2.codes)


def test_generate_list_seed():
    gt, ds = generate(GenSpec(10, 3.0, 2, 100, seed=0), seed=[5, 2, 1])
    assert ds.n_rows == 100


def test_ground_truth_round_trip(tmp_path):
    gt, ds = generate(GenSpec(12, 3.0, 2, 50, seed=19))
    p = tmp_path / "t.json"
    save_ground_truth(gt, p, names=ds.names())
    gt2, names = load_ground_truth(p)
    assert names == ds.names()
    assert gt2.dag == gt.dag
    assert gt2.states_per_node == gt.states_per_node
    for a, b in zip(gt.cpts, gt2.cpts):
        assert np.array_equal(a, b)


# ---------------------------------------------------------------- exact

def test_exact_joint_normalizes_and_matches_hand_case():
    dag = Network(2, DIRECTED)
    dag.add_edge(0, 1)
    cpts = [
        np.array([[0.25, 0.75]]),
        np.array([[0.9, 0.1], [0.2, 0.8]]),
    ]
    gt = GroundTruth(dag, [2, 2], cpts, seed=0)
    joint = exact_joint(gt)
    expect = np.array([[0.25 * 0.9, 0.25 * 0.1], [0.75 * 0.2, 0.75 * 0.8]])
    np.testing.assert_allclose(joint, expect, atol=1e-15)
    assert joint.sum() == pytest.approx(1.0, abs=1e-12)


def test_exact_joint_random_networks_normalize():
    for seed in range(10):
        gt, _ = generate(GenSpec(6, 2.0, 2, 10, seed=seed))
        assert exact_joint(gt).sum() == pytest.approx(1.0, abs=1e-12)


def test_exact_joint_respects_limit():
    gt, _ = generate(GenSpec(30, 3.0, 2, 10, seed=0))
    with pytest.raises(DataError):
        exact_joint(gt, limit=1000)


def test_exact_pair_conditionals_against_joint():
    """W table from the closed-form joint equals the marginalization oracle."""
    for seed in range(8):
        gt, _ = generate(GenSpec(5, 2.0, 2, 10, seed=seed))
        joint = exact_joint(gt)
        for src, dst in [(0, 1), (3, 2), (4, 0)]:
            table = exact_pair_conditionals(gt, src, dst)
            axes = tuple(v for v in range(5) if v not in (src, dst))
            pair = joint.sum(axis=axes)
            if src > dst:
                pair = pair.T  # orient as [source, target]
            p_src = pair.sum(axis=1)
            for j in range(gt.states_per_node[src]):
                for i in range(gt.states_per_node[dst]):
                    on = pair[j, i] / p_src[j] if p_src[j] > 0 else np.nan
                    rest = p_src.sum() - p_src[j]
                    off = (pair[:, i].sum() - pair[j, i]) / rest if rest > 0 else np.nan
                    want = on - off
                    got = table[j, i]
                    if np.isnan(want):
                        assert np.isnan(got)
                    else:
                        assert got == pytest.approx(want, abs=1e-12)
