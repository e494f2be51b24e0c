"""Slot-level channel laws driven by the simulator.

A law exposes the firing partition, per-edge alphabet sizes and two hooks:
``draw(rng, n)`` pre-draws all randomness of one trial, and
``sample(h, x, y, noise)`` produces the outputs of block ``h`` for the
current slot of a batch of trials.  ``x`` and ``y`` map edges to the inputs
and outputs already generated in the slot.

:class:`TableLaw` runs a network of independent blocks straight from its
transition tables.  :class:`CorrelatedLaw` runs a joint channel that has been
split into stages sharing per-slot latent noise; this is how networks whose
block outputs are correlated are executed in a prescribed order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from ..network import ChannelModel, EdgePartition, MulticastDemand, Network


class TableLaw:
    def __init__(self, network: Network):
        self.network = network
        self.partition = network.partition
        self.n_nodes = network.n_nodes
        self.demand = network.demand
        self.power = network.power
        self._cdf = {}
        for h, ch in enumerate(network.channels, start=1):
            if ch.kind == "dmc":
                self._cdf[h] = np.cumsum(ch.matrix, axis=1)

    def input_size(self, edge):
        return self.network.input_size(edge)

    def output_size(self, edge):
        return self.network.output_size(edge)

    def is_trivial(self, edge) -> bool:
        return self.network.is_trivial(edge)

    def is_continuous(self, edge) -> bool:
        return self.network.channel_of(edge).kind == "awgn"

    def draw(self, rng: np.random.Generator, n: int) -> dict:
        noise = {}
        for h, ch in enumerate(self.network.channels, start=1):
            if ch.kind == "dmc":
                noise[h] = rng.random(n)
            elif ch.kind == "awgn":
                noise[h] = rng.standard_normal(n)
        return noise

    def sample(self, h: int, x: Mapping, y: Mapping, noise: Mapping) -> dict:
        ch: ChannelModel = self.network.channels[h - 1]
        block = self.partition.blocks[h - 1]
        if ch.kind == "awgn":
            (e,) = block
            return {e: x[e] + np.sqrt(ch.variances[0]) * noise[h]}
        xs = [x[e] for e in block]
        row = np.ravel_multi_index(xs, ch.input_sizes)
        cdf = self._cdf[h][row]
        joint_y = (cdf <= noise[h][:, None]).sum(axis=1)
        joint_y = np.minimum(joint_y, cdf.shape[1] - 1)
        ys = np.unravel_index(joint_y, ch.output_sizes)
        return {e: y.astype(np.int32) for e, y in zip(block, ys)}


StageFn = Callable[[Mapping, Mapping, Mapping], Mapping]


@dataclass(frozen=True, eq=False)
class CorrelatedLaw:
    """A joint channel realized as ordered stages with shared latent noise.

    ``latent`` maps a name to the pmf of a per-slot latent variable (drawn
    independently each slot).  ``stages[h-1](x, y, latent)`` returns the
    outputs of block ``h`` of ``partition`` as a deterministic function of
    the slot's inputs, the outputs of earlier stages and the latent values.
    """

    partition: EdgePartition
    demand: MulticastDemand
    input_sizes: Mapping
    output_sizes: Mapping
    latent: Mapping
    stages: tuple

    power = None

    @property
    def n_nodes(self) -> int:
        return self.partition.n_nodes

    def input_size(self, edge):
        return self.input_sizes.get(edge, 1)

    def output_size(self, edge):
        return self.output_sizes.get(edge, 1)

    def is_trivial(self, edge) -> bool:
        return self.input_size(edge) == 1 and self.output_size(edge) == 1

    def is_continuous(self, edge) -> bool:
        return False

    def draw(self, rng: np.random.Generator, n: int) -> dict:
        out = {}
        for name in sorted(self.latent):
            cdf = np.cumsum(self.latent[name])
            u = rng.random(n)
            out[name] = np.minimum((cdf[None, :] <= u[:, None]).sum(axis=1), len(cdf) - 1)
        return out

    def sample(self, h: int, x: Mapping, y: Mapping, noise: Mapping) -> dict:
        out = self.stages[h - 1](x, y, noise)
        return {
            e: np.broadcast_to(np.asarray(out.get(e, 0)), np.shape(x[e])).astype(np.int32)
            for e in self.partition.blocks[h - 1]
        }

    def joint_channel(self) -> ChannelModel:
        """The single-block law ``q(y_E | x_E)`` over all edges in row-major order.

        Obtained by enumerating every input tuple and latent outcome and
        running the stages in partition order.
        """
        n = self.n_nodes
        edges = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        in_sizes = tuple(self.input_size(e) for e in edges)
        out_sizes = tuple(self.output_size(e) for e in edges)
        table = np.zeros(in_sizes + out_sizes)
        names = sorted(self.latent)
        for xt in itertools.product(*[range(s) for s in in_sizes]):
            for z in itertools.product(*[range(len(self.latent[k])) for k in names]):
                prob = float(np.prod([self.latent[k][v] for k, v in zip(names, z)]))
                if prob == 0:
                    continue
                x = {e: np.array([v]) for e, v in zip(edges, xt)}
                noise = {k: np.array([v]) for k, v in zip(names, z)}
                y = {}
                for h in range(1, self.partition.alpha + 1):
                    y.update(self.sample(h, x, y, noise))
                yt = tuple(int(y[e][0]) for e in edges)
                table[xt + yt] += prob
        return ChannelModel.dmc(table, in_sizes, out_sizes)
