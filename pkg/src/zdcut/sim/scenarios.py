"""Built-in networks: two-way channels and two-relay networks.

``bsc_if`` and ``trn_in`` consist of independent channels.  ``bsc_cf`` and
``trn_cn`` have channel outputs that are correlated across edges; their
:class:`~zdcut.network.Network` is a single joint block (all the cut-set
machinery sees), while the simulator runs them through a staged
:class:`~zdcut.sim.laws.CorrelatedLaw` so that zero-delay reads are possible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..network import ChannelModel, EdgePartition, MulticastDemand, Network, all_edges
from ..schedule import DelayProfile, positive_profile
from .laws import CorrelatedLaw, TableLaw

SCENARIOS = ("bsc_if", "bsc_cf", "trn_cn", "trn_in")


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    network: Network
    law: object
    sequence: tuple
    profile: DelayProfile
    independent: bool

    @property
    def partition(self) -> EdgePartition:
        return self.law.partition

    @property
    def demand(self) -> MulticastDemand:
        return self.network.demand


def _check_p(name, p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


def bsc_if(p: float = 0.1, q=None) -> Scenario:
    """Two-way channel: BSC(``p``) on ``(1,2)``, independent DMC ``q`` on ``(2,1)``.

    ``q`` is a crossover probability or a 2x2 transition matrix (default
    BSC(``p``)).  Self-loops form a trivial third block.  Default sequence
    ``(1,2,3)`` with the only zero delay on ``(1,2,1)``.
    """
    _check_p("p", p)
    if q is None:
        reverse = ChannelModel.bsc(p)
    elif np.isscalar(q):
        _check_p("q", q)
        reverse = ChannelModel.bsc(float(q))
    else:
        reverse = ChannelModel.dmc(q)
    partition = EdgePartition(2, (((1, 2),), ((2, 1),), ((1, 1), (2, 2))))
    network = Network(
        2,
        partition,
        (ChannelModel.bsc(p), reverse, ChannelModel.trivial(2)),
        MulticastDemand({1, 2}, {1, 2}),
    )
    profile = DelayProfile(2, frozenset({(1, 2, 1)}))
    return Scenario("bsc_if", network, TableLaw(network), (1, 2, 3), profile, True)


def _joint_network(law: CorrelatedLaw) -> Network:
    n = law.n_nodes
    partition = EdgePartition(n, (tuple(all_edges(n)),))
    return Network(n, partition, (law.joint_channel(),), law.demand)


def bsc_cf(p: float = 0.1) -> Scenario:
    """Two-way channel with correlated feedback: ``Y21 = X21 + Y12`` (mod 2)."""
    _check_p("p", p)
    partition = EdgePartition(2, (((1, 2),), ((2, 1),), ((1, 1), (2, 2))))
    law = CorrelatedLaw(
        partition,
        MulticastDemand({1, 2}, {1, 2}),
        {(1, 2): 2, (2, 1): 2},
        {(1, 2): 2, (2, 1): 2},
        {"z": np.array([1.0 - p, p])},
        (
            lambda x, y, z: {(1, 2): x[(1, 2)] ^ z["z"]},
            lambda x, y, z: {(2, 1): x[(2, 1)] ^ y[(1, 2)]},
            lambda x, y, z: {},
        ),
    )
    profile = DelayProfile(2, frozenset({(1, 2, 1)}))
    return Scenario("bsc_cf", _joint_network(law), law, (1, 2, 3), profile, False)


#: Zero delays from (1,2) to (2,4) and from (2,3) to (3,4).
TRN_ZERO_DELAYS = frozenset({(1, 2, 4), (2, 3, 4)})
_TRN_LIVE = [(1, 2), (2, 3), (1, 4), (2, 4), (3, 4)]


def trn_cn() -> Scenario:
    """Two-relay network with correlated noises.

    ``Y12 = U``, ``Y23 = V`` and ``Y14 = Y24 = Y34 = X14 + X24 + X34 + U + V``
    (mod 2) with ``U``, ``V`` independent fair bits drawn afresh each slot.
    """
    n = 4
    sink = ((1, 4), (2, 4), (3, 4))
    rest = tuple(e for e in all_edges(n) if e not in _TRN_LIVE)
    partition = EdgePartition(n, (((1, 2),), ((2, 3),), sink, rest))

    def sink_stage(x, y, z):
        s = x[(1, 4)] ^ x[(2, 4)] ^ x[(3, 4)] ^ z["u"] ^ z["v"]
        return {e: s for e in sink}

    law = CorrelatedLaw(
        partition,
        MulticastDemand({1}, {4}),
        {e: 2 for e in _TRN_LIVE},
        {e: 2 for e in _TRN_LIVE},
        {"u": np.array([0.5, 0.5]), "v": np.array([0.5, 0.5])},
        (
            lambda x, y, z: {(1, 2): z["u"]},
            lambda x, y, z: {(2, 3): z["v"]},
            sink_stage,
            lambda x, y, z: {},
        ),
    )
    profile = DelayProfile(n, TRN_ZERO_DELAYS)
    return Scenario("trn_cn", _joint_network(law), law, (1, 2, 3, 4), profile, False)


def trn_in(noise: float = 0.1, other_noise: float = 0.5, relay_sum: bool = False) -> Scenario:
    """Two-relay network with independent noises.

    By default a network of independent DMCs: ``(1,4)`` is BSC(``noise``),
    every other non-loop edge outputs Bernoulli(``other_noise``) noise, and
    self-loops are trivial; one block per edge, in row-major order.

    With ``relay_sum=True`` the edges into node 4 form one block with
    ``Y14 = X14 + X24 + X34 + Z14`` (mod 2) and pure-noise ``Y24``, ``Y34``;
    that block is placed last.
    """
    _check_p("noise", noise)
    _check_p("other_noise", other_noise)
    n = 4
    blocks, channels = [], []
    sink = ((1, 4), (2, 4), (3, 4))
    for e in all_edges(n):
        if relay_sum and e in sink:
            continue
        blocks.append((e,))
        if e[0] == e[1]:
            channels.append(ChannelModel.trivial())
        elif e == (1, 4):
            channels.append(ChannelModel.bsc(noise))
        else:
            channels.append(ChannelModel.noise(other_noise))
    if relay_sum:
        table = np.zeros((2,) * 6)
        pz = {(1, 4): noise, (2, 4): other_noise, (3, 4): other_noise}
        for x14, x24, x34, z14, z24, z34 in itertools.product((0, 1), repeat=6):
            prob = 1.0
            for e, z in zip(sink, (z14, z24, z34)):
                prob *= pz[e] if z else 1.0 - pz[e]
            table[x14, x24, x34, x14 ^ x24 ^ x34 ^ z14, z24, z34] += prob
        blocks.append(sink)
        channels.append(ChannelModel.dmc(table, (2, 2, 2), (2, 2, 2)))
    partition = EdgePartition(n, tuple(blocks))
    network = Network(n, partition, tuple(channels), MulticastDemand({1}, {4}))
    seq = tuple(range(1, partition.alpha + 1))
    profile = DelayProfile(n, TRN_ZERO_DELAYS)
    return Scenario("trn_in", network, TableLaw(network), seq, profile, True)


def builtin_scenario(name: str, **params) -> Scenario:
    """Look up a built-in scenario by name and build it with ``params``."""
    factories = {"bsc_if": bsc_if, "bsc_cf": bsc_cf, "trn_cn": trn_cn, "trn_in": trn_in}
    if name not in factories:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    try:
        return factories[name](**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name}: {exc}") from None


def scenario_positive(s: Scenario) -> Scenario:
    """Same scenario under the all-one delay profile."""
    return Scenario(s.name, s.network, s.law, s.sequence, positive_profile(s.network.n_nodes), s.independent)


def default_code(s: Scenario, n: int, bits: Optional[int] = None):
    """A reasonable shipped code for each scenario."""
    from .codes import CancellationCode, RepetitionCode

    if s.name == "trn_cn":
        return CancellationCode(n)
    if s.name == "trn_in":
        return RepetitionCode({(1, 4): bits or 1}, n)
    return RepetitionCode({(1, 2): bits or 1, (2, 1): bits or 1}, n)
