"""Data model for multimessage multicast networks with independent channels.

A network on ``N`` nodes has all ``N**2`` directed edges ``(i, j)`` (self-loops
included).  The edges are grouped into ``alpha`` blocks; each block is driven by
one channel law.  Node and edge labels are 1-based in every public function;
arrays indexed by node use ``i - 1``.

Network description files are YAML documents::

    nodes: 2
    demand: {sources: [1, 2], destinations: [1, 2]}
    channels:
      - edges: [[1, 2]]
        kind: bsc
        params: {p: 0.1}
      - edges: [[2, 1]]
        kind: dmc
        params: {inputs: [2], outputs: [2], matrix: [[0.9, 0.1], [0.2, 0.8]]}
      - edges: [[1, 1], [2, 2]]
        kind: trivial
    power:                      # AWGN networks only
      total: 10.0
      node: [5.0, 5.0]          # or a scalar applied to every node
      edge: 5.0                 # scalar default ...
      edge_overrides: [[1, 2, 2.5]]   # ... with per-edge exceptions

Channel kinds: ``dmc`` (explicit table), ``bsc`` (``p``), ``bec`` (``eps``),
``identity`` (``size``), ``noise`` (binary input ignored, output Bernoulli
``p``), ``trivial`` and ``awgn`` (``variance``, or ``variances`` per edge).
The shorthand kinds expand to ``dmc`` on load, so a saved network always
spells out its transition tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import yaml

from .errors import GuardError, NetworkError

Edge = tuple[int, int]

#: Largest number of entries allowed in one joint transition table.
MAX_TABLE_ENTRIES = 2**20
#: Row-sum error tolerated (and silently renormalized) on ingestion.
INGEST_TOL = 1e-9
#: Row-sum error tolerated by the validated model.
ROW_SUM_TOL = 1e-12


def all_edges(n_nodes: int) -> list[Edge]:
    """All ``N**2`` edges in row-major order."""
    return [(i, j) for i in range(1, n_nodes + 1) for j in range(1, n_nodes + 1)]


def edge_index(edge: Edge, n_nodes: int) -> int:
    """Row-major position of ``edge`` among ``all_edges(n_nodes)``."""
    i, j = edge
    return (i - 1) * n_nodes + (j - 1)


def validate_partition(blocks: Sequence[Iterable[Edge]], n_nodes: int) -> Optional[str]:
    """Check that ``blocks`` form an ordered partition of ``{1..N}^2``.

    Returns ``None`` when the blocks are valid, otherwise a description of
    the first violated condition.
    """
    if n_nodes < 1:
        return "node count must be at least 1"
    seen: dict[Edge, int] = {}
    for h, block in enumerate(blocks, start=1):
        block = list(block)
        if not block:
            return f"empty block {h}"
        for edge in block:
            i, j = edge
            if not (1 <= i <= n_nodes and 1 <= j <= n_nodes):
                return f"edge {edge} in block {h} out of range"
            if edge in seen:
                return f"overlap at {edge} (blocks {seen[edge]} and {h})"
            seen[edge] = h
    for edge in all_edges(n_nodes):
        if edge not in seen:
            return f"uncovered edge {edge}"
    return None


@dataclass(frozen=True)
class EdgePartition:
    """Ordered tuple of disjoint, nonempty edge blocks covering ``{1..N}^2``."""

    n_nodes: int
    blocks: tuple[tuple[Edge, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple((int(i), int(j)) for i, j in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        problem = validate_partition(blocks, self.n_nodes)
        if problem is not None:
            raise NetworkError(problem, "partition")

    @property
    def alpha(self) -> int:
        return len(self.blocks)

    def block_of(self, edge: Edge) -> int:
        """1-based index of the block containing ``edge``."""
        for h, block in enumerate(self.blocks, start=1):
            if edge in block:
                return h
        raise KeyError(edge)

    @classmethod
    def singletons(cls, n_nodes: int) -> "EdgePartition":
        """One block per edge, block ``(i-1)N + j`` holding ``(i, j)``."""
        return cls(n_nodes, tuple((e,) for e in all_edges(n_nodes)))


@dataclass(frozen=True, eq=False)
class ChannelModel:
    """Law of one block.

    ``kind`` is ``"dmc"``, ``"awgn"`` or ``"trivial"``.  For a DMC the table has
    shape ``input_sizes + output_sizes``: one axis per edge input, then one per
    edge output, in the block's edge order.  AWGN blocks carry one noise
    variance per edge and no table; trivial blocks carry neither.
    """

    kind: str
    input_sizes: tuple[int, ...]
    output_sizes: tuple[int, ...]
    table: Optional[np.ndarray] = None
    variances: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in ("dmc", "awgn", "trivial"):
            raise NetworkError(f"unknown channel kind {self.kind!r}", "kind")
        if self.kind == "awgn":
            if self.variances is None or len(self.variances) != len(self.input_sizes):
                raise NetworkError("one variance per edge required", "variances")
            for v in self.variances:
                if not (math.isfinite(v) and v > 0):
                    raise NetworkError(f"noise variance must be positive, got {v}", "variances")
            return
        if self.kind == "trivial":
            if set(self.input_sizes) | set(self.output_sizes) != {1} or len(self.input_sizes) != len(self.output_sizes):
                raise NetworkError("trivial channels have singleton alphabets", "table")
            object.__setattr__(self, "table", None)
            return
        table = np.array(self.table, dtype=float)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        shape = tuple(self.input_sizes) + tuple(self.output_sizes)
        if table.shape != shape:
            raise NetworkError(f"table shape {table.shape} != {shape}", "table")
        if table.size > MAX_TABLE_ENTRIES:
            raise GuardError(f"joint table has {table.size} entries (limit {MAX_TABLE_ENTRIES})")
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            raise NetworkError("probabilities must be finite and nonnegative", "table")
        err = np.max(np.abs(self.matrix.sum(axis=1) - 1.0))
        if err > ROW_SUM_TOL:
            raise NetworkError(f"rows must sum to 1 (max error {err:.3e})", "table")

    @property
    def n_edges(self) -> int:
        return len(self.input_sizes)

    @property
    def matrix(self) -> np.ndarray:
        """Table reshaped to (joint input index, joint output index)."""
        if self.kind == "trivial":
            return np.ones((1, 1))
        return self.table.reshape(int(np.prod(self.input_sizes)), int(np.prod(self.output_sizes)))

    def __eq__(self, other):
        if not isinstance(other, ChannelModel):
            return NotImplemented
        if (self.kind, self.input_sizes, self.output_sizes, self.variances) != (
            other.kind, other.input_sizes, other.output_sizes, other.variances
        ):
            return False
        if self.table is None or other.table is None:
            return self.table is other.table
        return bool(np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.kind, self.input_sizes, self.output_sizes))

    # constructors -------------------------------------------------------

    @classmethod
    def dmc(cls, matrix, input_sizes=None, output_sizes=None, renormalize=True):
        """Build a DMC from a row-stochastic matrix or a full table.

        A 2-D ``matrix`` without sizes is read as a single-edge channel.  Rows
        off by less than ``INGEST_TOL`` are renormalized; larger errors are
        rejected.
        """
        arr = np.array(matrix, dtype=float)
        if input_sizes is None:
            if arr.ndim != 2:
                raise NetworkError("alphabet sizes needed for a multi-edge table", "table")
            input_sizes, output_sizes = (arr.shape[0],), (arr.shape[1],)
        input_sizes = tuple(int(s) for s in input_sizes)
        output_sizes = tuple(int(s) for s in output_sizes)
        if len(input_sizes) != len(output_sizes):
            raise NetworkError("input and output size lists differ in length", "table")
        if any(s < 1 for s in input_sizes + output_sizes):
            raise NetworkError("alphabet sizes must be positive", "table")
        n_in, n_out = int(np.prod(input_sizes)), int(np.prod(output_sizes))
        if n_in == n_out == 1 and arr.size == 1 and abs(float(arr.ravel()[0]) - 1.0) < INGEST_TOL:
            return cls.trivial(len(input_sizes))
        if n_in * n_out > MAX_TABLE_ENTRIES:
            raise GuardError(f"joint table has {n_in * n_out} entries (limit {MAX_TABLE_ENTRIES})")
        if arr.size != n_in * n_out:
            raise NetworkError(f"table has {arr.size} entries, expected {n_in * n_out}", "table")
        mat = arr.reshape(n_in, n_out)
        if np.any(mat < 0):
            raise NetworkError("probabilities must be nonnegative", "table")
        sums = mat.sum(axis=1)
        err = np.max(np.abs(sums - 1.0))
        if err >= INGEST_TOL:
            raise NetworkError(f"rows must sum to 1 (max error {err:.3e})", "table")
        if renormalize and err > 0:
            mat = mat / sums[:, None]
        return cls("dmc", input_sizes, output_sizes, mat.reshape(input_sizes + output_sizes))

    @classmethod
    def trivial(cls, n_edges: int = 1) -> "ChannelModel":
        ones = (1,) * n_edges
        return cls("trivial", ones, ones)

    @classmethod
    def awgn(cls, variances) -> "ChannelModel":
        variances = tuple(float(v) for v in np.atleast_1d(variances))
        ones = (1,) * len(variances)
        return cls("awgn", ones, ones, None, variances)

    @classmethod
    def bsc(cls, p: float) -> "ChannelModel":
        _check_prob(p, "p")
        return cls.dmc([[1 - p, p], [p, 1 - p]])

    @classmethod
    def bec(cls, eps: float) -> "ChannelModel":
        """Binary erasure channel; output symbol 2 is the erasure."""
        _check_prob(eps, "eps")
        return cls.dmc([[1 - eps, 0.0, eps], [0.0, 1 - eps, eps]])

    @classmethod
    def identity(cls, size: int = 2) -> "ChannelModel":
        return cls.dmc(np.eye(int(size)))

    @classmethod
    def noise(cls, p: float = 0.5) -> "ChannelModel":
        """Binary input, output Bernoulli(``p``) regardless of the input."""
        _check_prob(p, "p")
        return cls.dmc([[1 - p, p], [1 - p, p]])


def _check_prob(p, name):
    if not (0.0 <= p <= 1.0):
        raise NetworkError(f"{name} must lie in [0, 1], got {p}", name)


@dataclass(frozen=True)
class MulticastDemand:
    """Sources ``V`` and destinations ``D``; every destination wants every source."""

    sources: frozenset
    destinations: frozenset

    def __post_init__(self):
        object.__setattr__(self, "sources", frozenset(int(v) for v in self.sources))
        object.__setattr__(self, "destinations", frozenset(int(d) for d in self.destinations))
        if not self.sources or not self.destinations:
            raise NetworkError("sources and destinations must be nonempty", "demand")

    def check(self, n_nodes: int):
        for v in self.sources | self.destinations:
            if not 1 <= v <= n_nodes:
                raise NetworkError(f"node {v} out of range 1..{n_nodes}", "demand")


@dataclass(frozen=True, eq=False)
class PowerConstraints:
    """Average power caps: per edge ``(N, N)``, per node ``(N,)`` and total."""

    per_edge: np.ndarray
    per_node: np.ndarray
    total: float

    def __post_init__(self):
        pe = np.array(self.per_edge, dtype=float)
        pn = np.array(self.per_node, dtype=float)
        if pe.ndim != 2 or pe.shape[0] != pe.shape[1] or pn.shape != (pe.shape[0],):
            raise NetworkError("per-edge caps must be (N, N) and per-node caps (N,)", "power")
        for name, arr in (("edge", pe), ("node", pn), ("total", np.array([self.total]))):
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise NetworkError("power caps must be finite and nonnegative", f"power.{name}")
        pe.setflags(write=False)
        pn.setflags(write=False)
        object.__setattr__(self, "per_edge", pe)
        object.__setattr__(self, "per_node", pn)
        object.__setattr__(self, "total", float(self.total))

    @property
    def n_nodes(self) -> int:
        return self.per_node.shape[0]

    @classmethod
    def uniform(cls, n_nodes: int, total: float, node=None, edge=None) -> "PowerConstraints":
        """Caps defaulting to ``total`` wherever a finer cap is not given.

        ``node`` and ``edge`` may be scalars or full ``(N,)`` / ``(N, N)`` arrays.
        """
        node = total if node is None else node
        edge = total if edge is None else edge
        pe = np.broadcast_to(np.asarray(edge, dtype=float), (n_nodes, n_nodes)).copy()
        pn = np.broadcast_to(np.asarray(node, dtype=float), (n_nodes,)).copy()
        return cls(pe, pn, total)

    def contains(self, allocation, atol: float = 1e-12) -> bool:
        """Whether ``allocation`` (an ``(N, N)`` array) lies in the power polytope."""
        s = np.asarray(allocation, dtype=float)
        return bool(
            np.all(s >= -atol)
            and np.all(s <= self.per_edge + atol)
            and np.all(s.sum(axis=1) <= self.per_node + atol)
            and s.sum() <= self.total + atol
        )

    def __eq__(self, other):
        if not isinstance(other, PowerConstraints):
            return NotImplemented
        return (
            np.array_equal(self.per_edge, other.per_edge)
            and np.array_equal(self.per_node, other.per_node)
            and self.total == other.total
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Network:
    """A network: node count, edge partition, one channel per block, demand."""

    n_nodes: int
    partition: EdgePartition
    channels: tuple[ChannelModel, ...]
    demand: MulticastDemand
    power: Optional[PowerConstraints] = None
    _block_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if self.partition.n_nodes != self.n_nodes:
            raise NetworkError("partition node count differs from network", "partition")
        if len(self.channels) != self.partition.alpha:
            raise NetworkError(
                f"{len(self.channels)} channels for {self.partition.alpha} blocks", "channels"
            )
        self.demand.check(self.n_nodes)
        for h, (block, ch) in enumerate(zip(self.partition.blocks, self.channels)):
            if ch.n_edges != len(block):
                raise NetworkError(
                    f"channel covers {ch.n_edges} edges, block has {len(block)}", f"channels[{h}]"
                )
        kinds = {ch.kind for ch in self.channels}
        if "awgn" in kinds:
            if "dmc" in kinds:
                raise NetworkError("AWGN and DMC blocks cannot be mixed", "channels")
            for h, ch in enumerate(self.channels):
                if ch.kind == "awgn" and ch.n_edges != 1:
                    raise NetworkError("AWGN blocks must hold a single edge", f"channels[{h}]")
            if self.power is None:
                raise NetworkError("AWGN networks need power constraints", "power")
            if self.power.n_nodes != self.n_nodes:
                raise NetworkError("power constraints sized for a different network", "power")
        elif self.power is not None:
            raise NetworkError("power constraints are only meaningful for AWGN networks", "power")
        index = {}
        for h, block in enumerate(self.partition.blocks, start=1):
            for pos, edge in enumerate(block):
                index[edge] = (h, pos)
        object.__setattr__(self, "_block_index", index)

    @property
    def alpha(self) -> int:
        return self.partition.alpha

    @property
    def edges(self) -> list[Edge]:
        return all_edges(self.n_nodes)

    @property
    def is_awgn(self) -> bool:
        return any(ch.kind == "awgn" for ch in self.channels)

    def block_of(self, edge: Edge) -> int:
        """1-based block index of ``edge``."""
        return self._block_index[edge][0]

    def channel_of(self, edge: Edge) -> ChannelModel:
        return self.channels[self.block_of(edge) - 1]

    def input_size(self, edge: Edge) -> int:
        h, pos = self._block_index[edge]
        return self.channels[h - 1].input_sizes[pos]

    def output_size(self, edge: Edge) -> int:
        h, pos = self._block_index[edge]
        return self.channels[h - 1].output_sizes[pos]

    def is_trivial(self, edge: Edge) -> bool:
        ch = self.channel_of(edge)
        if ch.kind == "awgn":
            return False
        return self.input_size(edge) == 1 and self.output_size(edge) == 1

    def noise_variances(self) -> np.ndarray:
        """``(N, N)`` array of AWGN noise variances; ``inf`` on non-AWGN edges."""
        out = np.full((self.n_nodes, self.n_nodes), np.inf)
        for block, ch in zip(self.partition.blocks, self.channels):
            if ch.kind == "awgn":
                (i, j), = block
                out[i - 1, j - 1] = ch.variances[0]
        return out

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and self.partition == other.partition
            and self.channels == other.channels
            and self.demand == other.demand
            and self.power == other.power
        )

    __hash__ = None


# ---------------------------------------------------------------------------
# description files


def _edge_list(raw, path) -> list[Edge]:
    try:
        edges = [(int(e[0]), int(e[1])) for e in raw]
    except (TypeError, ValueError, IndexError):
        raise NetworkError("edges must be a list of [i, j] pairs", path) from None
    if any(len(e) != 2 for e in raw):
        raise NetworkError("edges must be a list of [i, j] pairs", path)
    return edges


def _channel_from_spec(entry: dict, n_edges: int, path: str) -> ChannelModel:
    kind = entry.get("kind")
    params = entry.get("params") or {}
    try:
        if kind == "trivial":
            return ChannelModel.trivial(n_edges)
        if kind == "awgn":
            if "variances" in params:
                variances = params["variances"]
            else:
                variances = [params["variance"]] * n_edges
            if n_edges != 1:
                raise NetworkError("AWGN blocks must hold a single edge", path)
            return ChannelModel.awgn(variances)
        if kind == "dmc":
            inputs = params.get("inputs")
            outputs = params.get("outputs")
            return ChannelModel.dmc(params["matrix"], inputs, outputs)
        shorthand = {
            "bsc": lambda: ChannelModel.bsc(float(params["p"])),
            "bec": lambda: ChannelModel.bec(float(params["eps"])),
            "identity": lambda: ChannelModel.identity(int(params.get("size", 2))),
            "noise": lambda: ChannelModel.noise(float(params.get("p", 0.5))),
        }
        if kind in shorthand:
            if n_edges != 1:
                raise NetworkError(f"{kind} channels hold a single edge", path)
            return shorthand[kind]()
    except KeyError as exc:
        raise NetworkError(f"missing parameter {exc.args[0]!r}", f"{path}.params") from None
    except NetworkError as exc:
        raise NetworkError(str(exc), f"{path}.params") from None
    raise NetworkError(f"unknown channel kind {kind!r}", f"{path}.kind")


def _power_from_spec(raw: dict, n_nodes: int) -> PowerConstraints:
    if "total" not in raw:
        raise NetworkError("total power required", "power.total")
    total = float(raw["total"])
    node = raw.get("node", total)
    per_node = np.full(n_nodes, float(node)) if np.isscalar(node) else np.array(node, dtype=float)
    edge = raw.get("edge", total)
    if np.isscalar(edge):
        per_edge = np.full((n_nodes, n_nodes), float(edge))
    else:
        per_edge = np.array(edge, dtype=float)
    for entry in raw.get("edge_overrides", []) or []:
        i, j, value = entry
        per_edge[int(i) - 1, int(j) - 1] = float(value)
    return PowerConstraints(per_edge, per_node, total)


def build_network(spec: dict) -> Network:
    """Build and validate a :class:`Network` from a parsed description."""
    if not isinstance(spec, dict):
        raise NetworkError("description must be a mapping")
    try:
        n_nodes = int(spec["nodes"])
        demand_raw = spec["demand"]
        channel_specs = spec["channels"]
    except KeyError as exc:
        raise NetworkError(f"missing field {exc.args[0]!r}") from None
    demand = MulticastDemand(demand_raw.get("sources", []), demand_raw.get("destinations", []))
    blocks, channels = [], []
    for h, entry in enumerate(channel_specs):
        path = f"channels[{h}]"
        edges = _edge_list(entry.get("edges", []), f"{path}.edges")
        blocks.append(tuple(edges))
        channels.append(_channel_from_spec(entry, len(edges), path))
    partition = EdgePartition(n_nodes, tuple(blocks))
    power = _power_from_spec(spec["power"], n_nodes) if spec.get("power") is not None else None
    return Network(n_nodes, partition, tuple(channels), demand, power)


def serialize(network: Network) -> dict:
    """Inverse of :func:`build_network`: a plain dict with explicit tables."""
    channels = []
    for block, ch in zip(network.partition.blocks, network.channels):
        entry = {"edges": [list(e) for e in block], "kind": ch.kind}
        if ch.kind == "dmc":
            entry["params"] = {
                "inputs": list(ch.input_sizes),
                "outputs": list(ch.output_sizes),
                "matrix": ch.matrix.tolist(),
            }
        elif ch.kind == "awgn":
            entry["params"] = {"variances": list(ch.variances)}
        channels.append(entry)
    out = {
        "nodes": network.n_nodes,
        "demand": {
            "sources": sorted(network.demand.sources),
            "destinations": sorted(network.demand.destinations),
        },
        "channels": channels,
    }
    if network.power is not None:
        out["power"] = {
            "total": network.power.total,
            "node": network.power.per_node.tolist(),
            "edge": network.power.per_edge.tolist(),
        }
    return out


def loads(text: str) -> Network:
    try:
        spec = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise NetworkError(f"malformed description: {exc}") from None
    return build_network(spec)


def dumps(network: Network) -> str:
    return yaml.safe_dump(serialize(network), sort_keys=False, default_flow_style=None)


def load_network(path) -> Network:
    with open(path) as fh:
        return loads(fh.read())


def save_network(network: Network, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(network))
