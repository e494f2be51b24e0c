"""Codes that plug into the simulator.

A code declares ``message_bits`` (``log2 M_i`` per source node) and two
callbacks, both vectorized over a batch of trials:

``encode(edge, slot, message, view)``
    returns the symbols sent on ``edge = (i, j)`` in ``slot``.  ``message``
    is node ``i``'s message bits, shape ``(batch, bits)``; ``view`` is a
    :class:`~zdcut.sim.engine.ReceiveView` exposing only what node ``i`` is
    allowed to have received.
``decode(node, message, received)``
    returns ``{source: estimated bits}`` from the node's own message and
    ``received[(l, node)]``, the full output blocks of its incoming edges.
"""

from __future__ import annotations

import numpy as np


class CodePlugin:
    """Base class: sends 0 everywhere and decodes nothing."""

    name = "base"
    message_bits: dict = {}

    def encode(self, edge, slot, message, view):
        return 0

    def decode(self, node, message, received):
        return {}


class SilentCode(CodePlugin):
    """Rate-zero code; every message set has a single element."""

    name = "silent"

    def __init__(self):
        self.message_bits = {}


def _blocks(bits, n):
    reps = n // bits if bits else 0
    if bits and reps == 0:
        raise ValueError(f"{bits} bits do not fit in {n} slots")
    return reps


class RepetitionCode(CodePlugin):
    """Each link ``(i, j)`` carries node ``i``'s bits, each repeated ``n // bits`` times.

    The receiver takes a majority vote over the output symbols 0 and 1 of its
    copies; other output symbols (erasures) abstain and ties decode to 0.
    A source may drive only one link.
    """

    name = "repetition"

    def __init__(self, links: dict, n: int):
        self.links = {tuple(e): int(b) for e, b in links.items()}
        sources = [i for i, _ in self.links]
        if len(set(sources)) != len(sources):
            raise ValueError("one link per source")
        self.n = n
        self.reps = {e: _blocks(b, n) for e, b in self.links.items()}
        self.message_bits = {i: b for (i, _), b in self.links.items()}

    def encode(self, edge, slot, message, view):
        if edge not in self.links:
            return 0
        reps, bits = self.reps[edge], self.links[edge]
        idx = (slot - 1) // reps
        if idx >= bits:
            return 0
        return message[:, idx]

    def decode(self, node, message, received):
        out = {}
        for (i, j), bits in self.links.items():
            if j != node:
                continue
            reps = self.reps[(i, j)]
            y = received[(i, j)][:, : bits * reps].reshape(-1, bits, reps)
            ones = (y == 1).sum(axis=2)
            zeros = (y == 0).sum(axis=2)
            out[i] = (ones > zeros).astype(np.uint8)
        return out


class AntipodalRepetitionCode(RepetitionCode):
    """Repetition over AWGN links: bit ``b`` is sent as ``(2b - 1) * amplitude``.

    Decodes by the sign of the summed outputs.  Slots after the last copy
    carry 0, so the average power on a link is at most ``amplitude**2``.
    """

    name = "antipodal"

    def __init__(self, links: dict, n: int, amplitude: float = 1.0):
        super().__init__(links, n)
        self.amplitude = float(amplitude)

    def encode(self, edge, slot, message, view):
        bit = super().encode(edge, slot, message, view)
        if edge not in self.links or (slot - 1) // self.reps[edge] >= self.links[edge]:
            return 0.0
        return (2.0 * bit - 1.0) * self.amplitude

    def decode(self, node, message, received):
        out = {}
        for (i, j), bits in self.links.items():
            if j != node:
                continue
            reps = self.reps[(i, j)]
            y = received[(i, j)][:, : bits * reps].reshape(-1, bits, reps)
            out[i] = (y.sum(axis=2) > 0).astype(np.uint8)
        return out


class CancellationCode(CodePlugin):
    """Noise cancellation for the two-relay network with correlated noises.

    Node 1 sends one message bit per slot on ``(1, 4)``.  Relay 2 forwards
    ``Y(1,2)`` on ``(2, 4)`` and relay 3 forwards ``Y(2,3)`` on ``(3, 4)``, read
    ``lag`` slots back.  With ``lag=0`` (needs zero delay from ``(1,2)`` to
    ``(2,4)`` and from ``(2,3)`` to ``(3,4)``) both noise terms cancel and node 4
    reads the bit off ``Y(1,4)``.  ``lag=1`` runs under unit delays but cancels
    nothing.
    """

    name = "cancellation"

    def __init__(self, n: int, lag: int = 0):
        if lag not in (0, 1):
            raise ValueError("lag is 0 or 1")
        self.n = n
        self.lag = lag
        self.message_bits = {1: n}

    def _forward(self, view, edge, slot):
        src = slot - self.lag
        if src < 1:
            return 0
        return view.symbol(edge, src)

    def encode(self, edge, slot, message, view):
        if edge == (1, 4):
            return message[:, slot - 1]
        if edge == (2, 4):
            return self._forward(view, (1, 2), slot)
        if edge == (3, 4):
            return self._forward(view, (2, 3), slot)
        return 0

    def decode(self, node, message, received):
        if node != 4:
            return {}
        return {1: received[(1, 4)].astype(np.uint8)}


class SameSlotProbe(CodePlugin):
    """Diagnostic code whose encoder for ``edge`` reads ``incoming`` in the current slot.

    Under a profile that gives ``incoming`` a unit delay on ``edge`` the
    simulator must refuse the read.
    """

    name = "probe"

    def __init__(self, edge, incoming):
        self.edge = tuple(edge)
        self.incoming = tuple(incoming)
        self.message_bits = {}

    def encode(self, edge, slot, message, view):
        if edge == self.edge:
            return view.symbol(self.incoming, slot)
        return 0
