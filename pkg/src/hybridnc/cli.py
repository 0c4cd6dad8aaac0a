"""Command-line experiment runner and the topology edge-list format.

Topology files are UTF-8 text, one directive per line::

    # comments start with '#'
    source s
    receiver r1
    receiver r2
    edge s r1

``edge`` lines define edge indices in the order they appear.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from .field import FieldSpec
from .gabidulin import SubspaceCodebook
from .network import EdgeNoiseModel, Topology, TopologyError, check
from .protocol import MODES, ExperimentRow, ProtocolConfig, run_experiment
from .reed_solomon import RSSpec

CSV_COLUMNS = [f.name for f in dataclasses.fields(ExperimentRow)]


class TopologyParseError(ValueError):
    pass


class ConfigError(ValueError):
    pass


BUILTIN_TOPOLOGIES = {
    # the two-source butterfly with both sources merged into s
    "butterfly": """\
source s
receiver r1
receiver r2
edge s r1
edge s c
edge s c
edge s r2
edge c d
edge d r1
edge d r2
""",
    "path3": """\
source s
receiver r
edge s u
edge u v
edge v r
""",
    "parallel4": """\
source s
receiver r
edge s r
edge s r
edge s r
edge s r
""",
}


def parse_topology(text: str) -> Topology:
    source = None
    receivers: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind, args = tok[0], tok[1:]
        if kind == "source" and len(args) == 1:
            if source is not None:
                raise TopologyParseError(f"line {lineno}: second source declaration")
            source = args[0]
        elif kind == "receiver" and len(args) == 1:
            receivers.append(args[0])
        elif kind == "edge" and len(args) == 2:
            edges.append((args[0], args[1]))
        elif kind in ("source", "receiver", "edge"):
            raise TopologyParseError(f"line {lineno}: wrong number of fields for '{kind}'")
        else:
            raise TopologyParseError(f"line {lineno}: unknown directive '{kind}'")
    if source is None:
        raise TopologyParseError("no source declared")
    return check(Topology(source, tuple(receivers), tuple(edges)))


def format_topology(topology: Topology) -> str:
    lines = [f"source {topology.source}"]
    lines += [f"receiver {r}" for r in topology.receivers]
    lines += [f"edge {a} {b}" for a, b in topology.edges]
    return "\n".join(lines) + "\n"


def load_topology(ref: str) -> Topology:
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        if name not in BUILTIN_TOPOLOGIES:
            raise ConfigError(
                f"--topology: unknown builtin '{name}' (have {', '.join(BUILTIN_TOPOLOGIES)})"
            )
        return parse_topology(BUILTIN_TOPOLOGIES[name])
    return parse_topology(Path(ref).read_text(encoding="utf-8"))


@dataclass
class ExperimentConfig:
    topology: str = "builtin:butterfly"
    q_exp: int = 8
    m: int = 4
    ell: int = 4
    kc: int = 2
    n: int = 16
    p: float = 0.01
    trials: int = 1000
    seed: int = 0
    mode: str = "both"
    out: str | None = None
    format: str = "csv"

    def validate(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"--p must lie in [0, 1], got {self.p}")
        if not 1 <= self.q_exp <= 16:
            raise ConfigError(f"--q-exp must lie in [1, 16], got {self.q_exp}")
        if self.m < 1 or self.q_exp * self.m > 62:
            raise ConfigError(f"--m must satisfy 1 <= m and q-exp * m <= 62, got m={self.m}")
        if not 1 <= self.kc <= self.ell <= self.m:
            raise ConfigError(
                f"--kc/--ell must satisfy 1 <= kc <= ell <= m, got kc={self.kc}, ell={self.ell}, m={self.m}"
            )
        if self.n > 1 << self.q_exp:
            raise ConfigError(f"--n must not exceed q = {1 << self.q_exp}, got {self.n}")
        if self.ell + self.m > self.n:
            raise ConfigError(f"--n must be at least ell + m = {self.ell + self.m}, got {self.n}")
        if self.trials < 1:
            raise ConfigError(f"--trials must be >= 1, got {self.trials}")
        if self.mode not in ("hybrid", "baseline", "both"):
            raise ConfigError(f"--mode must be hybrid, baseline or both, got {self.mode}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"--format must be csv or json, got {self.format}")

    @property
    def modes(self) -> tuple[str, ...]:
        return MODES if self.mode == "both" else (self.mode,)

    def protocol(self) -> ProtocolConfig:
        self.validate()
        try:
            topology = load_topology(self.topology)
        except (TopologyError, TopologyParseError, OSError) as exc:
            raise ConfigError(f"--topology: {exc}") from exc
        codebook = SubspaceCodebook.build(self.q_exp, self.m, self.ell, self.kc)
        rs = RSSpec(FieldSpec(self.q_exp), self.n, self.ell + self.m)
        if len(topology.source_edges) < self.ell:
            raise ConfigError(
                f"--ell: source has {len(topology.source_edges)} outgoing edges, "
                f"fewer than ell = {self.ell}"
            )
        return ProtocolConfig(codebook, topology, EdgeNoiseModel(self.p), rs)


def render(rows: list[ExperimentRow], config: ExperimentConfig) -> str:
    if config.format == "json":
        echo = {k: v for k, v in dataclasses.asdict(config).items() if k != "out"}
        doc = {"config": echo, "rows": [dataclasses.asdict(r) for r in rows]}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([getattr(r, c) for c in CSV_COLUMNS])
    return buf.getvalue()


def run(config: ExperimentConfig) -> int:
    """Run the experiment and write results; returns the process exit status."""
    try:
        proto = config.protocol()
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    rows = run_experiment(proto, config.modes, config.trials, config.seed)
    text = render(rows, config)
    if config.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(config.out).write_text(text, encoding="utf-8")
    return 0


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--topology", default="builtin:butterfly", show_default=True,
              help="Topology file, or builtin:butterfly / builtin:path3 / builtin:parallel4.")
@click.option("--q-exp", type=int, default=8, show_default=True, help="Network field is GF(2^q-exp).")
@click.option("--m", type=int, default=4, show_default=True, help="Extension degree of the Gabidulin field.")
@click.option("--ell", type=int, default=4, show_default=True, help="Codeword dimension.")
@click.option("--kc", type=int, default=2, show_default=True, help="Gabidulin message length.")
@click.option("--n", type=int, default=16, show_default=True, help="Inner Reed-Solomon length.")
@click.option("--p", type=float, default=0.01, show_default=True, help="Per-symbol edge error probability.")
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed.")
@click.option("--mode", type=click.Choice(["hybrid", "baseline", "both"]), default="both", show_default=True)
@click.option("--out", default=None, help="Output file (default: stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def main(topology, q_exp, m, ell, kc, n, p, trials, seed, mode, out, fmt):
    """Monte Carlo comparison of subspace coding with and without an inner RS code."""
    config = ExperimentConfig(topology, q_exp, m, ell, kc, n, p, trials, seed, mode, out, fmt)
    sys.exit(run(config))


if __name__ == "__main__":  # pragma: no cover
    main()
