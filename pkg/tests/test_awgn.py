import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import awgn_relay_network, relay_grid_oracle
from zdcut.infocalc import (
    awgn_capacity,
    awgn_max_min_slack,
    awgn_region_membership,
    network_awgn_membership,
)
from zdcut.network import MulticastDemand, PowerConstraints

HALF_LOG = {1.0: 0.5, 3.0: 1.0, 10.0: 1.7297158093186487}


def single_edge(snr):
    power = PowerConstraints.uniform(2, total=snr)
    sig = np.full((2, 2), np.inf)
    sig[0, 1] = 1.0
    return power, sig, MulticastDemand({1}, {2})


@pytest.mark.parametrize("snr", sorted(HALF_LOG))
def test_single_edge_boundary(snr):
    power, sig, demand = single_edge(snr)
    res = awgn_max_min_slack([0.0, 0.0], power, sig, demand)
    assert abs(res.slack - HALF_LOG[snr]) < 1e-6
    assert awgn_capacity(snr, 1.0) == pytest.approx(HALF_LOG[snr])


def test_single_edge_verdicts():
    power, sig, demand = single_edge(3.0)
    m = awgn_region_membership([1.0 - 1e-6, 0.0], power, sig, demand)
    assert m.inside
    assert power.contains(m.witness)
    m = awgn_region_membership([1.001, 0.0], power, sig, demand)
    assert m.verdict == "outside"
    assert m.witness is None
    assert sorted(m.cut) == [1]


@pytest.mark.parametrize("caps", [(4.0, 3.0, 3.0), (4.0, 0.5, 0.5), (2.0, 0.2, 1.5)])
def test_relay_network_against_grid(caps):
    net = awgn_relay_network(caps + (0.0,), total=sum(caps))
    m = network_awgn_membership([1.0, 0.0, 0.0, 0.0], net)
    assert abs(m.slack - relay_grid_oracle(1.0, caps)) < 1e-3
    assert m.slack >= relay_grid_oracle(1.0, caps) - 1e-9
    assert net.power.contains(m.witness)


def test_awgn_capacity_rejects_bad_variance():
    with pytest.raises(ValueError):
        awgn_capacity(1.0, 0.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(1.0, 3.0))
def test_slack_monotone_in_power(p, factor):
    a = network_awgn_membership([0.5, 0, 0, 0], awgn_relay_network((p, 1.0, 1.0, 0.0), total=p + 2.0))
    b = network_awgn_membership(
        [0.5, 0, 0, 0], awgn_relay_network((p * factor, 1.0, 1.0, 0.0), total=p * factor + 2.0)
    )
    assert b.slack >= a.slack - 1e-7


def test_deterministic_for_seed():
    net = awgn_relay_network()
    a = network_awgn_membership([1.0, 0, 0, 0], net, seed=3)
    b = network_awgn_membership([1.0, 0, 0, 0], net, seed=3)
    assert a.slack == b.slack
    np.testing.assert_array_equal(a.witness, b.witness)
