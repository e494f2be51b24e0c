"""Channel operation sequences, edge-delay profiles and feasibility.

Within one time slot the blocks of an edge partition fire in the order given
by an operation sequence (a permutation of ``1..alpha``).  A delay profile
assigns each triple ``(l, i, j)`` a delay ``b in {0, 1}``: with ``b = 0`` node
``i`` may read ``Y(l, i)`` of the current slot before encoding ``X(i, j)``.
Such a read is only well defined when block ``(l, i)`` fires strictly before
block ``(i, j)``.

Delay profile files list the zero entries, one triple per line; every other
entry is 1.  ``#`` starts a comment::

    # node 2 hears Y(1,2) before encoding X(2,1)
    nodes 2
    1 2 1
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GuardError, InfeasibleProfileError
from .network import Edge, EdgePartition

Triple = tuple[int, int, int]

#: Largest block count for which all sequences are enumerated.
MAX_ENUM_ALPHA = 8


def operation_sequence(order: Iterable[int], alpha: Optional[int] = None) -> tuple[int, ...]:
    """Validate a 1-based permutation of ``1..alpha`` and return it as a tuple."""
    order = tuple(int(h) for h in order)
    alpha = len(order) if alpha is None else alpha
    if sorted(order) != list(range(1, alpha + 1)):
        raise ValueError(f"{order} is not a permutation of 1..{alpha}")
    return order


def parse_sequence(text: str, alpha: Optional[int] = None) -> tuple[int, ...]:
    """Parse ``"1,2,3"`` into an operation sequence."""
    try:
        order = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise ValueError(f"malformed operation sequence {text!r}") from None
    return operation_sequence(order, alpha)


@dataclass(frozen=True)
class DelayProfile:
    """Binary delays ``b(l, i, j)`` stored sparsely as the set of zero triples."""

    n_nodes: int
    zeros: frozenset = frozenset()

    def __post_init__(self):
        zeros = frozenset((int(l), int(i), int(j)) for l, i, j in self.zeros)
        for t in zeros:
            if not all(1 <= v <= self.n_nodes for v in t):
                raise ValueError(f"triple {t} out of range 1..{self.n_nodes}")
        object.__setattr__(self, "zeros", zeros)

    def b(self, l: int, i: int, j: int) -> int:
        return 0 if (l, i, j) in self.zeros else 1

    @property
    def is_positive(self) -> bool:
        return not self.zeros

    def as_array(self) -> np.ndarray:
        """Dense ``(N, N, N)`` array of delays, indexed ``[l-1, i-1, j-1]``."""
        arr = np.ones((self.n_nodes,) * 3, dtype=np.int8)
        for l, i, j in self.zeros:
            arr[l - 1, i - 1, j - 1] = 0
        return arr

    @classmethod
    def from_array(cls, arr) -> "DelayProfile":
        arr = np.asarray(arr)
        n = arr.shape[0]
        if arr.shape != (n, n, n) or not np.isin(arr, (0, 1)).all():
            raise ValueError("delay array must be (N, N, N) with entries in {0, 1}")
        zeros = {tuple(int(v) + 1 for v in idx) for idx in np.argwhere(arr == 0)}
        return cls(n, frozenset(zeros))

    def with_delay(self, triple: Triple, value: int) -> "DelayProfile":
        zeros = set(self.zeros)
        if value == 0:
            zeros.add(tuple(triple))
        elif value == 1:
            zeros.discard(tuple(triple))
        else:
            raise ValueError("delays are 0 or 1")
        return DelayProfile(self.n_nodes, frozenset(zeros))


def positive_profile(n_nodes: int) -> DelayProfile:
    """The all-one profile (every edge incurs a unit delay on every edge)."""
    if n_nodes < 1:
        raise ValueError("node count must be at least 1")
    return DelayProfile(n_nodes)


def channel_position(edge: Edge, partition: EdgePartition, seq: Sequence[int]) -> int:
    """Slot-internal firing position of ``edge``: the ``t`` with edge in block ``seq[t-1]``."""
    h = partition.block_of(tuple(edge))
    return tuple(seq).index(h) + 1


def _positions(partition: EdgePartition, seq: Sequence[int]) -> dict[Edge, int]:
    rank = {h: t for t, h in enumerate(seq, start=1)}
    return {e: rank[h] for h, block in enumerate(partition.blocks, start=1) for e in block}


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: Optional[Triple] = None

    def __bool__(self):
        return self.feasible


def is_feasible(profile: DelayProfile, seq: Sequence[int], partition: EdgePartition) -> Feasibility:
    """Check that every zero-delay pair fires in order.

    The witness of an infeasible profile is the lexicographically smallest
    ``(l, i, j)`` with ``b = 0`` whose block ``(l, i)`` does not fire before
    block ``(i, j)``.
    """
    seq = operation_sequence(seq, partition.alpha)
    if profile.n_nodes != partition.n_nodes:
        raise ValueError("profile and partition disagree on node count")
    pos = _positions(partition, seq)
    for l, i, j in sorted(profile.zeros):
        if not pos[(l, i)] < pos[(i, j)]:
            return Feasibility(False, (l, i, j))
    return Feasibility(True)


def feasible_sequences(profile: DelayProfile, partition: EdgePartition) -> list[tuple[int, ...]]:
    """All operation sequences for which ``profile`` is feasible, in lexicographic order."""
    if partition.alpha > MAX_ENUM_ALPHA:
        raise GuardError(
            f"sequence enumeration unsupported for alpha={partition.alpha} (limit {MAX_ENUM_ALPHA})"
        )
    return [
        seq
        for seq in itertools.permutations(range(1, partition.alpha + 1))
        if is_feasible(profile, seq, partition)
    ]


@dataclass(frozen=True)
class AvailabilityRow:
    """Received streams node ``i`` may read when encoding ``X(i, j)`` in slot ``k``.

    Every incoming edge ``(l, i)`` is readable up to slot ``k - delay[(l, i)]``;
    ``same_slot`` lists the edges with delay 0.
    """

    edge: Edge
    delay: dict

    @property
    def same_slot(self) -> frozenset:
        return frozenset(e for e, d in self.delay.items() if d == 0)

    @property
    def incoming(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.delay))

    def latest_slot(self, incoming: Edge, k: int) -> int:
        """Last readable slot of ``incoming`` when encoding in slot ``k`` (1-based)."""
        return k - self.delay[incoming]

    def allows(self, incoming: Edge, slot: int, k: int) -> bool:
        return incoming in self.delay and 1 <= slot <= k - self.delay[incoming]


def available_inputs(
    edge: Edge, partition: EdgePartition, seq: Sequence[int], profile: DelayProfile
) -> AvailabilityRow:
    """Which received symbols the encoder of ``edge`` may use.

    Rejects a profile that is infeasible for ``seq``; for a feasible one every
    same-slot edge lies in a block fired earlier in the slot.
    """
    verdict = is_feasible(profile, seq, partition)
    if not verdict:
        raise InfeasibleProfileError(verdict.witness)
    i, j = edge
    delay = {(l, i): profile.b(l, i, j) for l in range(1, partition.n_nodes + 1)}
    pos = _positions(partition, seq)
    for incoming, d in delay.items():
        assert d == 1 or pos[incoming] < pos[(i, j)]
    return AvailabilityRow((i, j), delay)


# ---------------------------------------------------------------------------
# profile files


def parse_profile(text: str, n_nodes: Optional[int] = None) -> DelayProfile:
    """Parse the sparse zero-entry format described in the module docstring."""
    zeros = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.replace(",", " ").split()
        if toks[0] == "nodes":
            if len(toks) != 2:
                raise ValueError(f"line {lineno}: expected 'nodes N'")
            declared = int(toks[1])
            if n_nodes is not None and declared != n_nodes:
                raise ValueError(f"line {lineno}: profile declares {declared} nodes, expected {n_nodes}")
            n_nodes = declared
            continue
        if len(toks) != 3:
            raise ValueError(f"line {lineno}: expected a triple 'l i j'")
        try:
            zeros.append(tuple(int(t) for t in toks))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer entry") from None
    if n_nodes is None:
        raise ValueError("node count unknown: add a 'nodes N' line")
    return DelayProfile(n_nodes, frozenset(zeros))


def format_profile(profile: DelayProfile) -> str:
    lines = [f"nodes {profile.n_nodes}"]
    lines += [f"{l} {i} {j}" for l, i, j in sorted(profile.zeros)]
    return "\n".join(lines) + "\n"


def load_profile(path, n_nodes: Optional[int] = None) -> DelayProfile:
    with open(path) as fh:
        return parse_profile(fh.read(), n_nodes)
