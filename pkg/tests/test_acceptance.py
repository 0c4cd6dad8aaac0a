"""Acceptance criteria A1-A10.

A summary line per criterion (PASS/FAIL) is printed at the end of the run by
the hook in conftest.py.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from hybridnc.cli import load_topology
from hybridnc.field import FieldSpec
from hybridnc.gabidulin import SubspaceCodebook, min_distance
from hybridnc.network import EdgeNoiseModel, k_max, k_of_edge, min_cut_size, simulate
from hybridnc.protocol import ProtocolConfig, effective_error_probability, run_experiment
from hybridnc.reed_solomon import RSSpec, all_codewords, rs_decode, rs_min_distance
from hybridnc.subspace import (
    enumerate_subspaces,
    erasures_errors,
    random_generating_set,
    random_subspace,
    span,
    subspace_distance,
)

import oracles
from helpers import corrupt, random_dag

GF2 = FieldSpec(1)
GF256 = FieldSpec(8)
Z99 = 2.326  # one-sided 99% normal quantile


def check_metric(dist: np.ndarray, same: np.ndarray) -> None:
    assert (dist >= 0).all()
    assert ((dist == 0) == same).all()
    assert (dist == dist.T).all()
    # d(a,c) <= d(a,b) + d(b,c) for every triple
    assert (dist[:, None, :] <= dist[:, :, None] + dist[None, :, :]).all()


@pytest.mark.criterion("A1", "subspace metric axioms, exhaustive F_2^4 and 10^4 random triples in F_2^6")
def test_a1_metric_axioms():
    start = time.perf_counter()
    subs = enumerate_subspaces(GF2, 4)
    assert len(subs) == 67
    n = len(subs)
    dist = np.array([[subspace_distance(a, b) for b in subs] for a in subs])
    same = np.array([[a == b for b in subs] for a in subs])
    check_metric(dist, same)
    # the distance itself agrees with counting vectors
    sets = [oracles.span_elements(s.basis, 2, GF2.mul_int) | {(0,) * 4} for s in subs]
    ref = np.array([[oracles.set_distance(a, b, 2) for b in sets] for a in sets])
    assert np.array_equal(dist, ref)
    assert same.sum() == n

    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        a, b, c = (random_subspace(GF2, 6, int(rng.integers(0, 7)), rng) for _ in range(3))
        dab, dbc, dac = subspace_distance(a, b), subspace_distance(b, c), subspace_distance(a, c)
        assert dab == subspace_distance(b, a)
        assert (dab == 0) == (a == b)
        assert dac <= dab + dbc
    assert time.perf_counter() - start < 60


@pytest.mark.criterion("A2", "lifted Gabidulin q=2 m=4 l=4 k=2 decodes every rho+t <= 2 pattern")
def test_a2_decoding_radius():
    start = time.perf_counter()
    cb = SubspaceCodebook.build(1, 4, 4, 2)
    assert cb.size == 256 and cb.min_distance == 6
    rng = np.random.default_rng(77)
    patterns = [(rho, t) for rho in range(3) for t in range(3) if rho + t <= 2]
    draws = 7
    cases = failures = 0
    for msg in cb.messages():
        v = cb.encode(msg)
        for rho, t in patterns:
            for _ in range(draws):
                u = corrupt(v, rho, t, rng)
                assert erasures_errors(v, u) == (rho, t)
                cases += 1
                failures += cb.decode(u) != msg
    assert cases >= 10_000
    assert failures == 0
    assert time.perf_counter() - start < 300


@pytest.mark.criterion("A3", "minimum distance 2(l-k+1) for every parameter set with |C| <= 2^12")
def test_a3_min_distance_formula():
    checked = 0
    for q_exp in range(1, 13):
        for m in range(1, 13):
            for ell in range(1, m + 1):
                for k in range(1, ell + 1):
                    if q_exp * m * k > 12:
                        continue
                    cb = SubspaceCodebook.build(q_exp, m, ell, k)
                    if cb.size < 2:
                        continue
                    assert min_distance(cb) == 2 * (ell - k + 1), (q_exp, m, ell, k)
                    checked += 1
    assert checked > 0


@pytest.mark.criterion("A4", "noiseless butterfly, q=256 l=2, success >= 0.99 per receiver")
def test_a4_noiseless_recovery():
    start = time.perf_counter()
    cb = SubspaceCodebook.build(8, 2, 2, 1)
    cfg = ProtocolConfig(cb, load_topology("builtin:butterfly"), EdgeNoiseModel(0.0),
                         RSSpec(GF256, 8, 4))
    rows = run_experiment(cfg, ("hybrid", "baseline"), 1000, 4)
    assert len(rows) == 4
    for r in rows:
        assert r.success_rate >= 0.99, r
    assert time.perf_counter() - start < 60


@pytest.mark.criterion("A5", "per-symbol corruption on path3 <= 1-(1-p)^K + 3 sigma")
@pytest.mark.parametrize("p", [0.01, 0.05])
def test_a5_effective_probability(p):
    topo = load_topology("builtin:path3")
    kk = k_max(topo)
    assert kk == 3
    bound = effective_error_probability(p, kk)
    rng = np.random.default_rng(int(p * 1000))
    length, trials = 100, 1000
    corrupted = 0
    for _ in range(trials):
        inj = [GF256.random(rng, length)]
        noisy = simulate(topo, inj, EdgeNoiseModel(p), GF256, rng)
        clean = simulate(topo, inj, EdgeNoiseModel(0.0), GF256, rng,
                         coefficients=noisy.coefficients)
        corrupted += int(np.count_nonzero(noisy.received_matrix("r") != clean.received_matrix("r")))
    total = length * trials
    rate = corrupted / total
    sigma = math.sqrt(bound * (1 - bound) / total)
    assert rate <= bound + 3 * sigma, (rate, bound, sigma)


@pytest.mark.criterion("A6", "one erroneous edge adds at most one error dimension")
def test_a6_single_error():
    names = ["butterfly", "path3", "parallel4"]
    rng = np.random.default_rng(6)
    n = 6
    trials = 0
    worst = 0
    for i in range(10_000):
        topo = load_topology(f"builtin:{names[i % 3]}")
        b = len(topo.source_edges)
        v = random_subspace(GF256, n, min(b, 2), rng)
        inj = random_generating_set(v, b, rng)
        edge = int(rng.integers(0, len(topo.edges)))
        err = GF256.random(rng, n)
        while not err.any():
            err = GF256.random(rng, n)
        res = simulate(topo, inj, EdgeNoiseModel(0.0), GF256, rng, forced_errors={edge: err})
        for r in topo.receivers:
            u = span(res.received_matrix(r), n, GF256)
            worst = max(worst, erasures_errors(v, u)[1])
        trials += 1
    assert trials == 10_000
    assert worst <= 1


@pytest.mark.criterion("A7", "hybrid beats baseline at defaults with 99% confidence, and has fewer rho+t")
def test_a7_hybrid_dominance():
    cb = SubspaceCodebook.build(8, 4, 4, 2)
    cfg = ProtocolConfig(cb, load_topology("builtin:butterfly"), EdgeNoiseModel(0.01),
                         RSSpec(GF256, 16, 8))
    trials = 2000
    rows = {(r.mode, r.receiver): r for r in run_experiment(cfg, ("hybrid", "baseline"), trials, 0)}
    for recv in ("r1", "r2"):
        h, b = rows[("hybrid", recv)], rows[("baseline", recv)]
        pooled = (h.successes + b.successes) / (2 * trials)
        se = math.sqrt(max(pooled * (1 - pooled), 1e-12) * 2 / trials)
        z = (h.success_rate - b.success_rate) / se
        assert z > Z99, (recv, h.success_rate, b.success_rate, z)
        assert b.mean_erasures + b.mean_errors > h.mean_erasures + h.mean_errors


@pytest.mark.criterion("A8", "k_of_edge, k_max and min cut match brute force on 100 random DAGs")
def test_a8_graph_oracles():
    rng = np.random.default_rng(8)
    for _ in range(100):
        t = random_dag(rng, 8)
        assert len(t.vertices) <= 8
        ks = []
        for e in t.receiver_edges():
            k = oracles.k_of_edge(t.source, t.edges, e)
            assert k_of_edge(t, e) == k
            ks.append(k)
        assert k_max(t) == max(ks)
        for r in t.receivers:
            packed = oracles.max_disjoint_paths(t.source, r, t.edges)
            cut = oracles.min_edge_cut(t.source, r, t.vertices, t.edges)
            assert packed == cut == min_cut_size(t, r)


@pytest.mark.criterion("A9", "RS decoding equals exhaustive nearest-codeword search; MDS distance")
@pytest.mark.parametrize("q_exp,n,k", [(2, 4, 2), (3, 5, 3)])
def test_a9_reed_solomon(q_exp, n, k):
    f = FieldSpec(q_exp)
    spec = RSSpec(f, n, k)
    assert rs_min_distance(spec) == n - k + 1
    words = all_codewords(spec)
    as_lists = words.tolist()
    q = f.order
    for idx in range(q**n):
        word = [(idx // q**i) % q for i in range(n)]
        best, near = oracles.nearest_codewords(word, as_lists)
        got = rs_decode(np.array(word), spec)
        if best <= spec.radius:
            assert len(near) == 1
            assert got is not None and got.tolist() == as_lists[near[0]][:k]
        else:
            assert got is None


@pytest.mark.criterion("A10", "two identical CLI runs give byte-identical output files")
def test_a10_cli_determinism(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}.csv"
        subprocess.run(
            [sys.executable, "-m", "hybridnc.cli", "--trials", "60", "--seed", "17",
             "--p", "0.02", "--out", str(out)],
            check=True,
        )
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].count(b"\n") == 5
