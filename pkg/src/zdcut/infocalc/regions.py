"""Cut enumeration, cut-set regions and membership tests.

A cut is a set ``T`` of 1-based node labels whose complement contains a
destination.  Each cut contributes the inequality

    sum_{i in T} R_i  <=  bound(T)

where the bound is a sum of per-edge capacities over ``T x T^c`` (independent
DMCs), or a sum over blocks of conditional mutual informations under a
product input law (general independent channels).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import GuardError
from ..network import MAX_TABLE_ENTRIES, MulticastDemand, Network, edge_index
from .blahut import blahut_arimoto
from .measures import check_distribution, conditional_mi

MAX_CUT_NODES = 20
#: Absolute tolerance, in bits, for every membership comparison.
MEMBERSHIP_TOL = 1e-9

Cut = frozenset


def enumerate_cuts(n_nodes: int, demand: MulticastDemand) -> list[Cut]:
    """Every ``T`` with ``T & V`` nonempty and ``T^c & D`` nonempty.

    Cuts without a source give the vacuous ``0 <= bound`` and are skipped.
    Order: increasing bitmask with node 1 as the lowest bit.
    """
    if n_nodes > MAX_CUT_NODES:
        raise GuardError(f"cut enumeration limited to {MAX_CUT_NODES} nodes, got {n_nodes}")
    nodes = range(1, n_nodes + 1)
    cuts = []
    for mask in range(1, 2**n_nodes):
        T = frozenset(v for v in nodes if mask >> (v - 1) & 1)
        if T & demand.sources and demand.destinations - T:
            cuts.append(T)
    return cuts


def crossing_edges(T, n_nodes: int) -> list[tuple[int, int]]:
    """Edges ``(i, j)`` with ``i`` in ``T`` and ``j`` outside."""
    return [(i, j) for i in sorted(T) for j in range(1, n_nodes + 1) if j not in T]


def dmc_cut_value(T, capacities) -> float:
    """``sum over (i, j) in T x T^c`` of ``capacities[i-1, j-1]``."""
    C = np.asarray(capacities, dtype=float)
    n = C.shape[0]
    inside = np.zeros(n, dtype=bool)
    inside[[v - 1 for v in T]] = True
    return float(C[np.ix_(inside, ~inside)].sum())


def check_rates(rates, n_nodes: int, demand: MulticastDemand) -> np.ndarray:
    r = np.asarray(rates, dtype=float)
    if r.shape != (n_nodes,):
        raise ValueError(f"rate tuple must have {n_nodes} entries")
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise ValueError("rates must be finite and nonnegative")
    for v in range(1, n_nodes + 1):
        if v not in demand.sources and r[v - 1] != 0:
            raise ValueError(f"node {v} is not a source, its rate must be 0")
    return r


@dataclass(frozen=True)
class CutBound:
    cut: Cut
    rate_sum: float
    bound: float

    @property
    def slack(self) -> float:
        return self.bound - self.rate_sum


@dataclass(frozen=True)
class Membership:
    """Verdict of a region membership query.

    ``cut`` is the cut with the smallest slack (the violated one when outside).
    ``witness`` is the power allocation certifying an AWGN inside verdict.
    """

    verdict: str
    slack: float
    cut: Optional[Cut]
    bounds: tuple
    witness: Optional[np.ndarray] = None

    @property
    def inside(self) -> bool:
        return self.verdict == "inside"

    def __bool__(self):
        return self.inside


def _verdict_from_bounds(bounds: list) -> Membership:
    if not bounds:
        return Membership("inside", np.inf, None, ())
    worst = min(bounds, key=lambda b: b.slack)
    verdict = "inside" if worst.slack >= -MEMBERSHIP_TOL else "outside"
    return Membership(verdict, worst.slack, worst.cut, tuple(bounds))


def edge_capacities(network: Network, tol: float = 1e-9, max_iter: int = 100_000) -> np.ndarray:
    """``(N, N)`` array of per-edge DMC capacities.

    Requires every non-trivial block to be a single edge, as in a network of
    independent DMCs.  Trivial edges have capacity 0.
    """
    n = network.n_nodes
    C = np.zeros((n, n))
    for block, ch in zip(network.partition.blocks, network.channels):
        if ch.kind == "trivial":
            continue
        if ch.kind != "dmc" or len(block) != 1:
            raise ValueError("per-edge capacities need singleton DMC blocks")
        (i, j), = block
        C[i - 1, j - 1] = blahut_arimoto(ch, tol, max_iter).capacity
    return C


def dmc_region(capacities, demand: MulticastDemand) -> list[tuple[Cut, float]]:
    """Inequality list ``(T, sum_{T x T^c} C)`` of the independent-DMC region."""
    n = np.asarray(capacities).shape[0]
    return [(T, dmc_cut_value(T, capacities)) for T in enumerate_cuts(n, demand)]


def dmc_region_membership(rates, capacities, demand: MulticastDemand) -> Membership:
    """Test ``rates`` against every cut inequality with tolerance ``MEMBERSHIP_TOL``."""
    C = np.asarray(capacities, dtype=float)
    r = check_rates(rates, C.shape[0], demand)
    bounds = [
        CutBound(T, float(sum(r[v - 1] for v in T)), value) for T, value in dmc_region(C, demand)
    ]
    return _verdict_from_bounds(bounds)


# ---------------------------------------------------------------------------
# product-form cut-set bound for general independent blocks


def uniform_inputs(network: Network) -> list[np.ndarray]:
    """Uniform joint input law on every block."""
    out = []
    for ch in network.channels:
        if ch.kind == "trivial":
            out.append(np.ones(()))
            continue
        size = int(np.prod(ch.input_sizes))
        out.append(np.full(ch.input_sizes, 1.0 / size))
    return out


def _check_inputs(network: Network, inputs) -> list[np.ndarray]:
    if network.is_awgn:
        raise ValueError("product-form bound is defined for discrete blocks only")
    if len(inputs) != network.alpha:
        raise ValueError(f"need one input law per block ({network.alpha})")
    checked = []
    for h, (p, ch) in enumerate(zip(inputs, network.channels), start=1):
        if ch.kind == "trivial":
            checked.append(np.ones(()))
            continue
        p = np.asarray(p, dtype=float)
        if p.shape != ch.input_sizes:
            p = p.reshape(ch.input_sizes)
        checked.append(check_distribution(p))
    return checked


def block_joint(channel, p_inputs: np.ndarray) -> np.ndarray:
    """``p(x_block) q(y_block | x_block)`` with input axes first."""
    k = channel.n_edges
    return p_inputs.reshape(channel.input_sizes + (1,) * k) * channel.table


def product_cutset_mi(T, inputs, network: Network) -> float:
    """Cut value under a product input law, computed block by block.

    For each block ``h`` this is ``I(X_A; Y_B | X_C)`` with ``A`` the block
    edges leaving ``T``, ``B`` the block edges entering ``T^c`` and ``C`` the
    block edges leaving ``T^c``; blocks are independent, so the values add.
    """
    inputs = _check_inputs(network, inputs)
    T = frozenset(T)
    total = 0.0
    for block, ch, p in zip(network.partition.blocks, network.channels, inputs):
        if ch.kind == "trivial":
            continue
        k = len(block)
        a = tuple(pos for pos, (i, j) in enumerate(block) if i in T)
        c = tuple(pos for pos, (i, j) in enumerate(block) if i not in T)
        b = tuple(k + pos for pos, (i, j) in enumerate(block) if j not in T)
        if not a or not b:
            continue
        total += conditional_mi(block_joint(ch, p), a, b, c)
    return total


def product_cutset_region(network: Network, inputs) -> list[tuple[Cut, float]]:
    """Inequality list of the cut-set bound for one product input law."""
    return [
        (T, product_cutset_mi(T, inputs, network))
        for T in enumerate_cuts(network.n_nodes, network.demand)
    ]


def product_cutset_membership(rates, network: Network, inputs) -> Membership:
    r = check_rates(rates, network.n_nodes, network.demand)
    bounds = [
        CutBound(T, float(sum(r[v - 1] for v in T)), value)
        for T, value in product_cutset_region(network, inputs)
    ]
    return _verdict_from_bounds(bounds)


# ---------------------------------------------------------------------------
# explicit joint law over every edge (oracle path)


def product_joint(network: Network, inputs) -> np.ndarray:
    """Full joint table over all ``N**2`` inputs followed by all ``N**2`` outputs.

    Axis ``edge_index(e)`` is ``X_e`` and axis ``N**2 + edge_index(e)`` is
    ``Y_e``.
    """
    inputs = _check_inputs(network, inputs)
    n, m = network.n_nodes, network.n_nodes**2
    shape = [1] * (2 * m)
    for e in network.edges:
        shape[edge_index(e, n)] = network.input_size(e)
        shape[m + edge_index(e, n)] = network.output_size(e)
    size = int(np.prod(shape))
    if size > MAX_TABLE_ENTRIES:
        raise GuardError(f"joint table would have {size} entries (limit {MAX_TABLE_ENTRIES})")
    joint = np.ones([1] * (2 * m))
    for block, ch, p in zip(network.partition.blocks, network.channels, inputs):
        if ch.kind == "trivial":
            continue
        local = block_joint(ch, p)
        targets = [edge_index(e, n) for e in block] + [m + edge_index(e, n) for e in block]
        order = np.argsort(targets)
        local = local.transpose(order)
        bshape = [1] * (2 * m)
        for axis, t in enumerate(sorted(targets)):
            bshape[t] = local.shape[axis]
        joint = joint * local.reshape(bshape)
    return joint


def _entropy_of(joint: np.ndarray, axes) -> float:
    axes = set(axes)
    drop = tuple(ax for ax in range(joint.ndim) if ax not in axes)
    p = joint.sum(axis=drop) if drop else joint
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def brute_force_joint_mi(joint, network: Network, T) -> float:
    """``I(X_{T x I}; Y_{I x T^c} | X_{T^c x I})`` from an explicit joint table.

    ``joint`` uses the axis layout of :func:`product_joint`.  Entropies are
    evaluated directly on marginals of the full table.
    """
    joint = np.asarray(joint, dtype=float)
    n, m = network.n_nodes, network.n_nodes**2
    if joint.size > MAX_TABLE_ENTRIES:
        raise GuardError(f"joint table has {joint.size} entries (limit {MAX_TABLE_ENTRIES})")
    if joint.ndim != 2 * m:
        raise ValueError(f"joint table must have {2 * m} axes")
    T = frozenset(T)
    a = [edge_index(e, n) for e in network.edges if e[0] in T]
    c = [edge_index(e, n) for e in network.edges if e[0] not in T]
    b = [m + edge_index(e, n) for e in network.edges if e[1] not in T]
    value = (
        _entropy_of(joint, a + c)
        + _entropy_of(joint, b + c)
        - _entropy_of(joint, a + b + c)
        - _entropy_of(joint, c)
    )
    return max(value, 0.0)
