import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import oracles
from coalesce_lab import arrows, crw, verify, voter
from coalesce_lab.graph import GraphFamily, GraphSpec, OffspringDistribution, build

K2 = build(GraphSpec("complete", n=2))
K3 = build(GraphSpec("complete", n=3))


def test_dual_at_time_zero_is_identity():
    a = arrows.sample(K3, 2.0, seed=1)
    assert voter.dual_voter(K3, a, 0.0).opinion == [0, 1, 2]


def test_k2_single_arrow():
    f = arrows.ArrowField.from_events(K2, 1.0, [((0, 1), 0.5)])
    assert voter.forward_voter(K2, f, 1.0).opinion == [1, 1]
    assert voter.forward_voter(K2, f, 0.4).opinion == [0, 1]
    assert voter.dual_voter(K2, f, 1.0).opinion == [1, 1]


def test_k3_forward_copy_chain():
    # 0 copies 1, then 1 copies 2: 0 keeps the old opinion of 1
    f = arrows.ArrowField.from_events(K3, 1.0, [((0, 1), 0.2), ((1, 2), 0.6)])
    st_ = voter.forward_voter(K3, f, 1.0)
    assert st_.opinion == [1, 2, 2]
    assert st_.clusters() == {1: frozenset({0}), 2: frozenset({1, 2})}
    assert st_.size(0) == 0


def test_time_out_of_range():
    a = arrows.sample(K2, 1.0, seed=0)
    with pytest.raises(ValueError):
        voter.dual_voter(K2, a, 1.5)
    with pytest.raises(ValueError):
        voter.forward_voter(K2, a, -0.1)


def test_k2_root_opinion_survives_alone():
    sizes = verify.sample_voter_sizes(K2, 1.0, 100_000, seed=2)
    p = math.exp(-2)
    se = math.sqrt(p * (1 - p) / sizes.size)
    assert abs((sizes == 1).mean() - p) <= 3 * se


def test_k2_cluster_at_root_mean():
    # size-biased K2 law at t = 1: 1 w.p. e^-2, else 2
    sizes = verify.sample_root_cluster_sizes(K2, 1.0, 100_000, seed=3)
    target = 2 - math.exp(-2)
    se = sizes.std(ddof=1) / math.sqrt(sizes.size)
    assert abs(sizes.mean() - target) <= 3 * se


def test_run_cluster_k2_law():
    cs = verify.sample_cluster_sizes(GraphFamily.fixed(K2), [1.0], 50_000, seed=4)
    counts = np.bincount(cs.column(0), minlength=3)
    law = oracles.k2_cluster_law(1.0)
    assert stats.chisquare(counts, law * counts.sum()).pvalue > 0.01


def test_run_cluster_complete_graph_law():
    g = build(GraphSpec("complete", n=5))
    cs = verify.sample_cluster_sizes(GraphFamily.fixed(g), [0.5], 50_000, seed=5)
    counts = np.bincount(cs.column(0), minlength=6)
    law = oracles.complete_cluster_law(5, 0.5)
    assert np.all(law * counts.sum() >= 5)
    assert stats.chisquare(counts, law * counts.sum()).pvalue > 0.01


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_run_cluster_unit_steps(seed):
    g = build(GraphSpec("torus", d=2, n=5))
    tr = voter.run_cluster(g, 5.0, seed=seed, record_members=True)
    steps = np.diff([s for _, s in tr.sizes])
    assert np.all(np.abs(steps) == 1)
    assert np.all(np.diff([t for t, _ in tr.sizes]) > 0)
    assert len(tr.members_at_end) == tr.final_size
    if tr.absorbed:
        assert tr.final_size in (0, g.num_vertices)


def test_run_cluster_cap():
    g = build(GraphSpec("augmented_gw", offspring=OffspringDistribution.poisson(3.0), seed=1))
    tr = voter.run_cluster(g, 1e9, size_cap=20, seed=0)
    assert tr.capped or tr.extinct
    if tr.capped:
        with pytest.raises(ValueError):
            tr.size_at(tr.stop_time + 1)


def test_half_line_mean_one():
    # deterministic offspring 1 makes the augmented tree a bi-infinite line
    spec = GraphSpec("augmented_gw", offspring=OffspringDistribution.from_pmf({1: 1.0}))
    rows = verify.check_martingale(spec, [1.0, 4.0], 20_000, seed=6)
    assert all(r.passed for r in rows)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), t=st.floats(0, 2))
def test_duality_pathwise(seed, t):
    g = build(GraphSpec("erdos_renyi", n=20, p=0.2, seed=seed))
    a = arrows.sample(g, 2.0, seed=seed)
    assert verify.check_duality_pathwise(g, a)
    tr = crw.run_crw(g, a)
    dual = voter.dual_voter(g, a, a.T)
    assert voter.cluster_at_root(tr) == dual.size(dual.opinion[g.root])
    # every vertex sits in exactly one cluster at every time
    state = voter.dual_voter(g, a, t)
    assert sum(len(c) for c in state.clusters().values()) == g.num_vertices


@pytest.mark.parametrize("spec,t", [
    (GraphSpec("complete", n=3), 0.7),
    (GraphSpec("cycle", n=5), 1.5),
])
def test_forward_and_dual_agree_in_law(spec, t):
    g = build(spec)
    fwd = verify.sample_voter_sizes(g, t, 20_000, seed=7, method="forward")
    dual = verify.sample_voter_sizes(g, t, 20_000, seed=8, method="dual")
    top = g.num_vertices + 1
    table = np.array([np.bincount(fwd, minlength=top), np.bincount(dual, minlength=top)])
    table = table[:, table.sum(axis=0) > 0]
    assert stats.chi2_contingency(table).pvalue > 0.01


def test_weight_tree_find():
    tree = voter._WeightTree(capacity=4)
    for i, w in enumerate([3, 0, 2, 5]):
        tree.add(i, w)
    picks = [tree.find(x) for x in [0, 2.9, 3.0, 4.9, 5.0, 9.9]]
    assert picks == [0, 0, 2, 2, 3, 3]
    tree.grow()
    tree.add(5, 1)
    assert tree.find(10.5) == 5


def test_run_cluster_stops_at_huge_rates():
    # multiplicity 2**(400 n) passes the float range at the third edge
    from coalesce_lab.graph import from_edges

    g = from_edges(5, [(i, i + 1, 2 ** (400 * i)) for i in range(4)])
    caps = [voter.run_cluster(g, 10.0, seed=s).capped for s in range(200)]
    assert any(caps)
