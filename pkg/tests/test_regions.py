import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_binary_network, random_inputs
from zdcut.errors import GuardError
from zdcut.infocalc import (
    brute_force_joint_mi,
    crossing_edges,
    dmc_cut_value,
    dmc_region,
    dmc_region_membership,
    edge_capacities,
    enumerate_cuts,
    product_cutset_membership,
    product_cutset_mi,
    product_joint,
    uniform_inputs,
)
from zdcut.network import MulticastDemand
from zdcut.sim.scenarios import bsc_if, trn_cn, trn_in

C_BSC01 = 0.5310044064107188


def test_cut_enumeration_order_and_guard():
    cuts = enumerate_cuts(3, MulticastDemand({1}, {3}))
    assert cuts == [frozenset({1}), frozenset({1, 2})]
    with pytest.raises(GuardError):
        enumerate_cuts(21, MulticastDemand({1}, {2}))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.data())
def test_cut_enumeration_brute_force(n, data):
    nodes = range(1, n + 1)
    V = set(data.draw(st.sets(st.sampled_from(nodes), min_size=1)))
    D = set(data.draw(st.sets(st.sampled_from(nodes), min_size=1)))
    expected = {
        frozenset(T)
        for r in range(n + 1)
        for T in itertools.combinations(nodes, r)
        if set(T) & V and D - set(T)
    }
    got = enumerate_cuts(n, MulticastDemand(V, D))
    assert set(got) == expected and len(got) == len(expected)


def test_crossing_edges():
    assert crossing_edges({1, 3}, 3) == [(1, 2), (3, 2)]


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_dmc_cut_function_submodular(n, seed):
    C = np.random.default_rng(seed).random((n, n))
    f = {}
    for mask in range(2**n):
        T = frozenset(v for v in range(1, n + 1) if mask >> (v - 1) & 1)
        f[T] = dmc_cut_value(T, C)
    for A in f:
        for B in f:
            assert f[A] + f[B] >= f[A | B] + f[A & B] - 1e-12


def test_bsc_if_dmc_region():
    net = bsc_if().network
    C = edge_capacities(net)
    assert C[0, 1] == pytest.approx(C_BSC01, abs=1e-6)
    assert C[0, 0] == 0.0
    region = dmc_region(C, net.demand)
    assert [sorted(T) for T, _ in region] == [[1], [2]]


def test_trn_in_boundary():
    net = trn_in().network
    C = edge_capacities(net)
    assert C[0, 3] == pytest.approx(C_BSC01, abs=1e-6)
    assert C[0, 1] == pytest.approx(0.0, abs=1e-9)
    inside = dmc_region_membership([C_BSC01 - 1e-7, 0, 0, 0], C, net.demand)
    assert inside.inside
    out = dmc_region_membership([C_BSC01 + 1e-3, 0, 0, 0], C, net.demand)
    assert out.verdict == "outside" and out.cut is not None
    assert out.slack == pytest.approx(-1e-3, abs=1e-6)


def test_rates_must_respect_sources():
    net = trn_in().network
    C = edge_capacities(net)
    with pytest.raises(ValueError):
        dmc_region_membership([0.1, 0.1, 0, 0], C, net.demand)
    with pytest.raises(ValueError):
        dmc_region_membership([-0.1, 0, 0, 0], C, net.demand)


def test_edge_capacities_need_singletons():
    with pytest.raises(ValueError):
        edge_capacities(trn_cn().network)


def test_trn_in_product_matches_dmc():
    net = trn_in().network
    p = [np.array([0.5, 0.5]) if ch.kind == "dmc" else None for ch in net.channels]
    C = edge_capacities(net)
    for T in enumerate_cuts(4, net.demand):
        assert product_cutset_mi(T, p, net) == pytest.approx(dmc_cut_value(T, C), abs=1e-6)


def test_trn_cn_classical_bound_is_zero():
    net = trn_cn().network
    m = product_cutset_membership([1e-3, 0, 0, 0], net, uniform_inputs(net))
    assert m.verdict == "outside"
    assert sorted(m.cut) == [1, 2]


def test_product_joint_is_distribution(rng):
    net = random_binary_network(rng, 2)
    joint = product_joint(net, random_inputs(rng, net))
    assert joint.shape == (2,) * 8
    assert joint.sum() == pytest.approx(1.0)


def test_decomposition_random_networks(rng):
    checked = 0
    for _ in range(120):
        n = int(rng.integers(1, 4))
        net = random_binary_network(rng, n)
        inputs = random_inputs(rng, net)
        joint = product_joint(net, inputs)
        for T in enumerate_cuts(n, net.demand):
            assert abs(product_cutset_mi(T, inputs, net) - brute_force_joint_mi(joint, net, T)) < 1e-9
            checked += 1
    assert checked > 100
