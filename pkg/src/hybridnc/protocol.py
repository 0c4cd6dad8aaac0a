"""End-to-end transmission: subspace code outside, systematic RS code inside.

In ``hybrid`` mode every injected vector is RS-encoded; receivers decode each
incoming vector, drop the ones that fail, keep the first ``k`` symbols and
decode the span with the subspace code.  ``baseline`` mode skips the inner
code entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gabidulin import Message, SubspaceCodebook
from .network import EdgeNoiseModel, Topology, check, k_max, simulate
from .reed_solomon import RSSpec, rs_decode, rs_encode_systematic
from .subspace import Subspace, erasures_errors, random_generating_set, span

MODES = ("hybrid", "baseline")


def effective_error_probability(p: float, k_prime: int) -> float:
    """Per-symbol error probability after at most ``k_prime`` noisy hops: 1 - (1-p)^k'."""
    if k_prime < 1:
        raise ValueError("k_prime must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return 1.0 - (1.0 - p) ** k_prime


@dataclass
class ProtocolConfig:
    codebook: SubspaceCodebook
    topology: Topology
    noise: EdgeNoiseModel
    rs: RSSpec | None = None
    decoder: str = "auto"

    def __post_init__(self):
        check(self.topology)
        if self.b < self.codebook.length:
            raise ValueError(
                f"source has {self.b} outgoing edges but codewords have dimension "
                f"{self.codebook.length}"
            )
        if self.rs is not None:
            if self.rs.k != self.codebook.ambient_dim:
                raise ValueError(
                    f"inner code dimension {self.rs.k} must equal the ambient "
                    f"dimension {self.codebook.ambient_dim}"
                )
            if self.rs.field != self.codebook.field:
                raise ValueError("inner code and subspace code use different fields")

    @property
    def b(self) -> int:
        return len(self.topology.source_edges)

    @property
    def field(self):
        return self.codebook.field


@dataclass
class Reception:
    message: Message | None
    received: Subspace
    rho: int | None = None
    t: int | None = None
    inner_failures: int = 0


@dataclass(frozen=True)
class TrialOutcome:
    receiver: str
    mode: str
    success: bool
    rho: int
    t: int
    inner_failures: int
    incoming: int


def send(msg: Message, config: ProtocolConfig, rng: np.random.Generator, mode: str = "hybrid"):
    """Vectors to inject, keyed by the source's outgoing edges in index order."""
    v = config.codebook.encode(msg)
    gens = random_generating_set(v, config.b, rng)
    if mode == "hybrid":
        if config.rs is None:
            raise ValueError("hybrid mode needs an inner code")
        gens = rs_encode_systematic(gens, config.rs)
    elif mode != "baseline":
        raise ValueError(f"unknown mode {mode!r}")
    return dict(zip(config.topology.source_edges, gens))


def _finish(vectors, config: ProtocolConfig, sent: Subspace | None, failures: int) -> Reception:
    n = config.codebook.ambient_dim
    u = span(np.array(vectors, dtype=np.int64).reshape(-1, n), n, config.field)
    msg = config.codebook.decode(u, config.decoder)
    rho = t = None
    if sent is not None:
        rho, t = erasures_errors(sent, u)
    return Reception(msg, u, rho, t, failures)


def receive_hybrid(incoming, config: ProtocolConfig, sent: Subspace | None = None) -> Reception:
    """RS-decode each vector, discard failures, truncate, span and subspace-decode."""
    if config.rs is None:
        raise ValueError("hybrid reception needs an inner code")
    kept, failures = [], 0
    for vec in incoming:
        msg = rs_decode(vec, config.rs)
        if msg is None:
            failures += 1
        else:
            kept.append(msg)
    return _finish(kept, config, sent, failures)


def receive_baseline(incoming, config: ProtocolConfig, sent: Subspace | None = None) -> Reception:
    return _finish(list(incoming), config, sent, 0)


def run_trial(config: ProtocolConfig, mode: str, seed) -> list[TrialOutcome]:
    """One send/simulate/receive cycle with a uniformly random message."""
    rng = np.random.default_rng(seed)
    msg = config.codebook.random_message(rng)
    sent = config.codebook.encode(msg)
    injected = send(msg, config, rng, mode)
    result = simulate(config.topology, injected, config.noise, config.field, rng)
    receive = receive_hybrid if mode == "hybrid" else receive_baseline
    out = []
    for r in config.topology.receivers:
        vecs = [v for _, v in result.received[r]]
        got = receive(vecs, config, sent)
        out.append(
            TrialOutcome(
                receiver=r,
                mode=mode,
                success=got.message == msg,
                rho=got.rho,
                t=got.t,
                inner_failures=got.inner_failures,
                incoming=len(vecs),
            )
        )
    return out


def trial_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, index])


@dataclass(frozen=True)
class ExperimentRow:
    mode: str
    receiver: str
    trials: int
    successes: int
    success_rate: float
    mean_erasures: float
    mean_errors: float
    inner_failure_rate: float
    k_max: int
    p: float
    effective_p: float
    seed: int


def run_experiment(
    config: ProtocolConfig, modes, trials: int, master_seed: int
) -> list[ExperimentRow]:
    """Aggregate ``trials`` independent trials per mode, one row per (mode, receiver)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kmax = k_max(config.topology)
    eff = effective_error_probability(config.noise.p, kmax)
    rows = []
    for mode in modes:
        totals = {r: [0, 0, 0, 0, 0] for r in config.topology.receivers}
        for i in range(trials):
            for o in run_trial(config, mode, trial_seed(master_seed, i)):
                acc = totals[o.receiver]
                acc[0] += o.success
                acc[1] += o.rho
                acc[2] += o.t
                acc[3] += o.inner_failures
                acc[4] += o.incoming
        for r in config.topology.receivers:
            succ, rho, t, fails, inc = totals[r]
            rows.append(
                ExperimentRow(
                    mode=mode,
                    receiver=r,
                    trials=trials,
                    successes=succ,
                    success_rate=succ / trials,
                    mean_erasures=rho / trials,
                    mean_errors=t / trials,
                    inner_failure_rate=fails / inc if inc else 0.0,
                    k_max=kmax,
                    p=config.noise.p,
                    effective_p=eff,
                    seed=master_seed,
                )
            )
    return rows
