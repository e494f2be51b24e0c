import itertools

import numpy as np
import pytest

from zdcut.network import ChannelModel, EdgePartition, MulticastDemand, Network, all_edges


def random_partition(rng, n, max_blocks=4):
    edges = all_edges(n)
    k = int(rng.integers(1, min(max_blocks, len(edges)) + 1))
    labels = np.concatenate([np.arange(k), rng.integers(0, k, len(edges) - k)])
    rng.shuffle(labels)
    return EdgePartition(n, tuple(tuple(e for e, b in zip(edges, labels) if b == h) for h in range(k)))


def random_binary_network(rng, n, max_blocks=4):
    """Random network with binary alphabets on every edge."""
    part = random_partition(rng, n, max_blocks)
    channels = []
    for block in part.blocks:
        m = len(block)
        W = rng.dirichlet(np.ones(2**m), size=2**m)
        channels.append(ChannelModel.dmc(W.reshape((2,) * (2 * m)), (2,) * m, (2,) * m))
    sources = {v for v in range(1, n + 1) if rng.random() < 0.6} or {1}
    dests = {v for v in range(1, n + 1) if rng.random() < 0.6} or {n}
    return Network(n, part, tuple(channels), MulticastDemand(sources, dests))


def random_inputs(rng, network):
    return [rng.dirichlet(np.ones(int(np.prod(ch.input_sizes)))) for ch in network.channels]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


RELAY_LIVE = [(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)]


def awgn_relay_network(node_caps=(4.0, 3.0, 3.0, 0.0), total=10.0, variance=1.0):
    """Source 1 reaches sink 4 directly and through relays 2 and 3 over unit-variance AWGN edges."""
    from zdcut.network import PowerConstraints

    n = 4
    rest = tuple(e for e in all_edges(n) if e not in RELAY_LIVE)
    part = EdgePartition(n, tuple((e,) for e in RELAY_LIVE) + (rest,))
    channels = tuple(ChannelModel.awgn([variance]) for _ in RELAY_LIVE) + (ChannelModel.trivial(len(rest)),)
    power = PowerConstraints.uniform(n, total=total, node=np.array(node_caps))
    return Network(n, part, channels, MulticastDemand({1}, {4}), power)


def relay_grid_oracle(rate, node_caps=(4.0, 3.0, 3.0), step=1e-3):
    """Grid search of the source's split of its power; the relays spend their full caps."""
    P1, P2, P3 = node_caps
    k = int(round(1 / step))
    a, b = np.meshgrid(np.arange(k + 1), np.arange(k + 1), indexing="ij")
    keep = a + b <= k
    s12, s13 = a[keep] * step * P1, b[keep] * step * P1
    s14 = P1 - s12 - s13
    c = lambda s: 0.5 * np.log2(1 + s)
    cuts = np.stack([
        c(s12) + c(s13) + c(s14),
        c(s13) + c(s14) + c(P2),
        c(s12) + c(s14) + c(P3),
        c(s14) + c(P2) + c(P3),
    ])
    return float((cuts.min(axis=0) - rate).max())


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
