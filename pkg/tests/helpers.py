"""Random fixtures shared by several test modules."""

from __future__ import annotations

import numpy as np

from hybridnc.network import Topology, validate
from hybridnc.subspace import erase_operator, erasures_errors, span, sum_space


def random_dag(rng: np.random.Generator, max_vertices: int = 8) -> Topology:
    """A valid random topology: vertex 0 is the source, edges go forward only."""
    while True:
        n = int(rng.integers(2, max_vertices + 1))
        names = [f"v{i}" for i in range(n)]
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.45:
                    edges += [(names[i], names[j])] * int(rng.integers(1, 3))
        order = rng.permutation(len(edges))
        edges = [edges[i] for i in order]
        heads = sorted({b for _, b in edges}, key=names.index)
        if not heads:
            continue
        count = int(rng.integers(1, min(3, len(heads)) + 1))
        receivers = tuple(str(r) for r in rng.choice(heads, size=count, replace=False))
        t = Topology(names[0], receivers, tuple(edges))
        if validate(t) is None:
            return t


def corrupt(v, rho: int, t: int, rng: np.random.Generator):
    """Drop ``rho`` dimensions of ``v`` and add ``t`` dimensions from outside it."""
    kept = erase_operator(v, v.dim - rho, rng)
    while True:
        extra = v.field.random(rng, (t, v.ambient_dim))
        u = sum_space(kept, span(extra, v.ambient_dim, v.field)) if t else kept
        if erasures_errors(v, u) == (rho, t):
            return u
