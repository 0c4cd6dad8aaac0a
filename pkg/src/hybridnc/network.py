"""Acyclic unit-capacity networks with random linear coding over noisy edges."""

from __future__ import annotations

import graphlib
from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .field import FieldSpec


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Topology:
    """Directed multigraph with one source and a list of receivers.

    Edge indices are positions in ``edges``; parallel edges are distinct
    unit-capacity links.
    """

    source: str
    receivers: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    vertices: tuple[str, ...] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "receivers", tuple(self.receivers))
        object.__setattr__(self, "edges", tuple((str(a), str(b)) for a, b in self.edges))
        seen = {self.source: None}
        for a, b in self.edges:
            seen.setdefault(a, None)
            seen.setdefault(b, None)
        for r in self.receivers:
            seen.setdefault(r, None)
        object.__setattr__(self, "vertices", tuple(seen))

    def in_edges(self, v: str) -> list[int]:
        return [i for i, (_, head) in enumerate(self.edges) if head == v]

    def out_edges(self, v: str) -> list[int]:
        return [i for i, (tail, _) in enumerate(self.edges) if tail == v]

    @property
    def source_edges(self) -> list[int]:
        return self.out_edges(self.source)

    def receiver_edges(self) -> list[int]:
        return sorted({i for r in self.receivers for i in self.in_edges(r)})

    def successors(self, v: str) -> list[str]:
        return [b for a, b in self.edges if a == v]

    def reachable_from(self, v: str) -> set[str]:
        seen = {v}
        todo = deque([v])
        while todo:
            u = todo.popleft()
            for w in self.successors(u):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def vertex_order(self) -> list[str]:
        ts = graphlib.TopologicalSorter({v: set() for v in self.vertices})
        for a, b in self.edges:
            ts.add(b, a)
        return list(ts.static_order())

    def edge_order(self) -> list[int]:
        rank = {v: i for i, v in enumerate(self.vertex_order())}
        return sorted(range(len(self.edges)), key=lambda i: (rank[self.edges[i][0]], i))


def validate(topology: Topology) -> str | None:
    """First violated structural constraint, or None if the topology is usable."""
    t = topology
    if not t.receivers:
        return "no receivers"
    if t.source in t.receivers:
        return "source is also a receiver"
    if len(set(t.receivers)) != len(t.receivers):
        return "duplicate receiver"
    if t.in_edges(t.source):
        return "source has incoming edge"
    if any(a == b for a, b in t.edges):
        return "cycle"
    try:
        t.vertex_order()
    except graphlib.CycleError:
        return "cycle"
    reach = t.reachable_from(t.source)
    for r in t.receivers:
        if r not in reach:
            return f"receiver {r} is unreachable from the source"
    return None


def check(topology: Topology) -> Topology:
    problem = validate(topology)
    if problem is not None:
        raise TopologyError(problem)
    return topology


def min_cut_size(topology: Topology, receiver: str) -> int:
    """Maximum number of edge-disjoint source-receiver paths."""
    if receiver not in topology.receivers:
        raise ValueError(f"{receiver} is not a receiver")
    g = nx.DiGraph()
    g.add_nodes_from(topology.vertices)
    for a, b in topology.edges:
        if g.has_edge(a, b):
            g[a][b]["capacity"] += 1
        else:
            g.add_edge(a, b, capacity=1)
    return int(nx.maximum_flow_value(g, topology.source, receiver))


def k_of_edge(topology: Topology, edge: int) -> int:
    """Number of edges lying on some source-receiver path that ends with ``edge``."""
    tail, head = topology.edges[edge]
    if head not in topology.receivers:
        raise ValueError(f"edge {edge} does not end at a receiver")
    from_source = topology.reachable_from(topology.source)
    if tail not in from_source:
        return 0
    count = 0
    for j, (x, y) in enumerate(topology.edges):
        if j == edge:
            count += 1
        elif x in from_source and tail in topology.reachable_from(y):
            count += 1
    return count


def k_max(topology: Topology) -> int:
    return max(k_of_edge(topology, i) for i in topology.receiver_edges())


@dataclass(frozen=True)
class EdgeNoiseModel:
    """Memoryless q-ary symmetric noise with per-symbol error probability p."""

    p: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")


def qsc_corrupt(vec, noise: EdgeNoiseModel, f: FieldSpec, rng: np.random.Generator):
    """Replace each symbol, with probability p, by a uniformly random different one.

    Returns the corrupted vector and the additive error vector.
    """
    vec = np.asarray(vec, dtype=np.int64)
    err = _qsc_error(vec.shape[0], noise, f, rng)
    return vec ^ err, err


def _qsc_error(length: int, noise: EdgeNoiseModel, f: FieldSpec, rng: np.random.Generator):
    hit = rng.random(length) < noise.p
    err = np.zeros(length, dtype=np.int64)
    # xor with a nonzero offset gives a uniformly random different symbol
    err[hit] = rng.integers(1, f.order, size=int(hit.sum()), dtype=np.int64)
    return err


@dataclass
class TransmissionResult:
    edge_vectors: dict[int, np.ndarray]
    error_vectors: dict[int, np.ndarray]
    coefficients: dict[tuple[int, int], int]
    received: dict[str, list[tuple[int, np.ndarray]]]

    def received_matrix(self, receiver: str) -> np.ndarray:
        rows = [v for _, v in self.received[receiver]]
        return np.array(rows, dtype=np.int64)


def draw_coefficients(topology: Topology, f: FieldSpec, rng: np.random.Generator, fixed=None):
    """Local coding coefficients f_(i,j), drawn in edge-index order of j then i."""
    fixed = fixed or {}
    out = {}
    for j, (tail, _) in enumerate(topology.edges):
        if tail == topology.source:
            continue
        for i in topology.in_edges(tail):
            if (i, j) in fixed:
                out[(i, j)] = int(fixed[(i, j)])
            else:
                out[(i, j)] = int(rng.integers(0, f.order))
    return out


def simulate(
    topology: Topology,
    injected,
    noise: EdgeNoiseModel,
    f: FieldSpec,
    rng: np.random.Generator,
    *,
    coefficients=None,
    forced_errors=None,
) -> TransmissionResult:
    """Push ``injected`` vectors through the network.

    ``injected`` maps each outgoing edge of the source to its vector (a
    sequence is taken in source-edge order).  ``coefficients`` fixes chosen
    f_(i,j) instead of drawing them; ``forced_errors`` replaces the channel
    draw on the given edges with a fixed error vector.
    """
    src_edges = topology.source_edges
    if not isinstance(injected, dict):
        injected = list(injected)
        if len(injected) != len(src_edges):
            raise ValueError("one injected vector is needed per outgoing source edge")
        injected = dict(zip(src_edges, injected))
    if set(injected) != set(src_edges):
        raise ValueError("injected vectors must cover exactly the source's outgoing edges")
    vecs = {j: np.asarray(v, dtype=np.int64) for j, v in injected.items()}
    lengths = {v.shape for v in vecs.values()}
    if len(lengths) > 1:
        raise ValueError("injected vectors differ in length")
    length = lengths.pop()[0] if lengths else 0
    forced_errors = forced_errors or {}

    coeffs = draw_coefficients(topology, f, rng, coefficients)
    errors = {}
    for j in range(len(topology.edges)):
        if j in forced_errors:
            errors[j] = np.asarray(forced_errors[j], dtype=np.int64)
        else:
            errors[j] = _qsc_error(length, noise, f, rng)

    ys: dict[int, np.ndarray] = {}
    for j in topology.edge_order():
        tail = topology.edges[j][0]
        if tail == topology.source:
            base = vecs[j]
        else:
            base = np.zeros(length, dtype=np.int64)
            for i in topology.in_edges(tail):
                c = coeffs[(i, j)]
                if c:
                    base = base ^ f.mul(c, ys[i])
        ys[j] = base ^ errors[j]

    received = {
        r: [(i, ys[i]) for i in topology.in_edges(r)] for r in topology.receivers
    }
    return TransmissionResult(ys, errors, coeffs, received)

