import numpy as np
import pytest

from hybridnc.cli import load_topology
from hybridnc.field import FieldSpec
from hybridnc.network import (
    EdgeNoiseModel,
    Topology,
    TopologyError,
    check,
    k_max,
    k_of_edge,
    min_cut_size,
    qsc_corrupt,
    simulate,
    validate,
)

import oracles
from helpers import random_dag

GF256 = FieldSpec(8)
BUTTERFLY = load_topology("builtin:butterfly")


def test_butterfly_reference_values():
    assert min_cut_size(BUTTERFLY, "r1") == 2
    assert min_cut_size(BUTTERFLY, "r2") == 2
    d_r1 = BUTTERFLY.edges.index(("d", "r1"))
    assert k_of_edge(BUTTERFLY, d_r1) == 4
    assert k_max(BUTTERFLY) == 4
    assert k_max(load_topology("builtin:path3")) == 3
    assert k_max(load_topology("builtin:parallel4")) == 1


@pytest.mark.parametrize(
    "topology,problem",
    [
        (Topology("s", (), (("s", "a"),)), "no receivers"),
        (Topology("s", ("s",), (("s", "a"),)), "source is also a receiver"),
        (Topology("s", ("a", "a"), (("s", "a"),)), "duplicate receiver"),
        (Topology("s", ("a",), (("s", "a"), ("a", "s"))), "source has incoming edge"),
        (Topology("s", ("b",), (("s", "a"), ("a", "b"), ("b", "a"))), "cycle"),
        (Topology("s", ("a",), (("s", "a"), ("a", "a"))), "cycle"),
        (Topology("s", ("b",), (("s", "a"),)), "receiver b is unreachable from the source"),
    ],
)
def test_validation_reports(topology, problem):
    assert validate(topology) == problem
    with pytest.raises(TopologyError):
        check(topology)


def test_edge_order_is_topological():
    t = Topology("s", ("r",), (("a", "r"), ("s", "a"), ("s", "r")))
    pos = {e: i for i, e in enumerate(t.edge_order())}
    assert pos[1] < pos[0]


def test_graph_quantities_against_path_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(25):
        t = random_dag(rng, 6)
        for r in t.receivers:
            assert min_cut_size(t, r) == oracles.max_disjoint_paths(t.source, r, t.edges)
        for e in t.receiver_edges():
            assert k_of_edge(t, e) == oracles.k_of_edge(t.source, t.edges, e)


def test_k_of_edge_needs_receiver_edge():
    with pytest.raises(ValueError):
        k_of_edge(BUTTERFLY, BUTTERFLY.edges.index(("c", "d")))


def test_noise_statistics():
    rng = np.random.default_rng(0)
    f = FieldSpec(2)
    vec = np.zeros(200_000, dtype=np.int64)
    out, err = qsc_corrupt(vec, EdgeNoiseModel(0.2), f, rng)
    assert np.array_equal(out, err)
    hit = err != 0
    assert abs(hit.mean() - 0.2) < 0.005
    # a corrupted symbol is uniform over the q - 1 other values
    counts = np.bincount(err[hit], minlength=4)[1:] / hit.sum()
    assert np.allclose(counts, 1 / 3, atol=0.01)
    with pytest.raises(ValueError):
        EdgeNoiseModel(1.5)


def test_noiseless_simulation_is_linear_combination():
    rng = np.random.default_rng(1)
    inj = GF256.random(rng, (4, 6))
    res = simulate(BUTTERFLY, inj, EdgeNoiseModel(0.0), GF256, rng)
    e = {pair: i for i, pair in enumerate(BUTTERFLY.edges)}
    y = res.edge_vectors
    c = res.coefficients
    # c -> d combines both s -> c edges
    expect = GF256.mul(c[(1, 4)], y[1]) ^ GF256.mul(c[(2, 4)], y[2])
    assert np.array_equal(y[e[("c", "d")]], expect)
    assert np.array_equal(y[0], inj[0])
    assert [i for i, _ in res.received["r1"]] == [0, 5]
    assert res.received_matrix("r2").shape == (2, 6)
    assert not any(v.any() for v in res.error_vectors.values())


def test_simulation_is_seeded():
    inj = np.arange(24).reshape(4, 6) % 256
    a = simulate(BUTTERFLY, inj, EdgeNoiseModel(0.3), GF256, np.random.default_rng(9))
    b = simulate(BUTTERFLY, inj, EdgeNoiseModel(0.3), GF256, np.random.default_rng(9))
    for j in a.edge_vectors:
        assert np.array_equal(a.edge_vectors[j], b.edge_vectors[j])
    assert a.coefficients == b.coefficients


def test_overrides():
    path = load_topology("builtin:path3")
    rng = np.random.default_rng(2)
    inj = [np.array([1, 2, 3])]
    err = np.array([0, 5, 0])
    res = simulate(
        path, inj, EdgeNoiseModel(0.0), GF256, rng,
        coefficients={(0, 1): 1, (1, 2): 1}, forced_errors={1: err},
    )
    assert res.received_matrix("r").tolist() == [[1, 2 ^ 5, 3]]


def test_injection_checks():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        simulate(BUTTERFLY, np.zeros((3, 4), dtype=np.int64), EdgeNoiseModel(), GF256, rng)
    with pytest.raises(ValueError):
        simulate(BUTTERFLY, [np.zeros(3), np.zeros(3), np.zeros(3), np.zeros(4)],
                 EdgeNoiseModel(), GF256, rng)
