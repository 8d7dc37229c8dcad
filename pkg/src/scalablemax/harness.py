"""Monte Carlo experiment harness: configuration, seeding, metrics, CSV.

Every run of every experiment derives its randomness from
``(base_seed, run_index, stream)`` seed sequences, with separate streams for
agent input bits, channel noise, and auxiliary values.  Records are therefore
a pure function of the configuration, regardless of execution order, and the
same seeds reproduce the same run in both the fast engine and the object-level
protocol path.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, replace
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from . import baselines, engine, protocol, topology
from .bitseq import AgentSequence, Estimate
from .channel import NoiseModel, variance_from_db

SCHEMES = ("scalablemax", "scalablemax-ec", "rb", "rp", "multi-coordinator")

CSV_HEADER = (
    "agents,m,noise_power,correction,termination_parameter,runs,success_rate,"
    "average_iterations_in_successful_runs,average_survivor_count,timeout_rate,"
    "base_seed"
)

_STREAM_AGENTS = 0
_STREAM_NOISE = 1
_STREAM_VALUES = 2

GridValue = Union[int, float, Sequence]


def default_max_iterations(n: int) -> int:
    """Iteration cap: 50 (ceil(log2 n) + 8); the 8 is ceil(log2(1/0.005)).

    Generous compared to the d+1 iterations a clean run needs, so it only
    trips genuinely stuck high-noise EC runs, which are then reported as
    timeouts and folded into the error rate.
    """
    return 50 * (math.ceil(math.log2(max(n, 2))) + 8)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment (or a grid of them, when list-valued fields are given).

    ``noise_db`` is the noise power in dB relative to unit transmission
    power; ``-inf`` (the default) is the noiseless channel.  ``agents``,
    ``noise_db`` and ``tau`` accept lists for sweeps.
    """

    agents: GridValue = 1000
    m: int = 8
    scheme: str = "scalablemax"
    tau: Optional[GridValue] = None
    noise_db: GridValue = -math.inf
    runs: int = 10_000
    base_seed: int = 1
    prefix_length: int = 0
    max_iterations: Optional[int] = None
    initial_estimate: str = ""
    topology_path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.m <= 0 or self.m % 2 != 0:
            raise ValueError(f"m must be an even positive integer, got {self.m}")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.prefix_length < 0:
            raise ValueError("prefix_length must be nonnegative")
        if self.scheme == "scalablemax-ec" and self.tau is None:
            raise ValueError("scalablemax-ec requires tau")
        if self.tau is not None and self.scheme not in (
            "scalablemax-ec",
            "multi-coordinator",  # selects the EC subscheme for the subruns
        ):
            raise ValueError("tau is only meaningful for the error-correcting scheme")
        if self.scheme == "multi-coordinator" and not self.topology_path:
            raise ValueError("multi-coordinator requires a topology file")
        if any(d not in "01" for d in self.initial_estimate):
            raise ValueError("initial_estimate must be a bit string")

    def is_grid(self) -> bool:
        return any(
            isinstance(v, (list, tuple))
            for v in (self.agents, self.noise_db, self.tau)
        )

    def grid_points(self) -> Iterator["ExperimentConfig"]:
        """Cartesian product over list-valued fields, in a fixed order."""
        def as_list(v):
            if isinstance(v, (list, tuple)):
                if len(v) == 0:
                    raise ValueError("empty grid axis")
                return list(v)
            return [v]

        for n in as_list(self.agents):
            for db in as_list(self.noise_db):
                for tau in as_list(self.tau):
                    yield replace(self, agents=n, noise_db=db, tau=tau)

    def require_scalar(self) -> None:
        if self.is_grid():
            raise ValueError("grid-valued config where a single point is required")

    @property
    def n(self) -> int:
        self.require_scalar()
        return int(self.agents)

    @property
    def noise_variance(self) -> float:
        self.require_scalar()
        db = float(self.noise_db)
        return 0.0 if db == -math.inf else variance_from_db(db)

    @property
    def iteration_cap(self) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        return default_max_iterations(self.n)


@dataclass(frozen=True)
class ExperimentRecord:
    """One CSV row; field order matches the header exactly."""

    agents: int
    m: int
    noise_power: float
    correction: bool
    termination_parameter: Optional[int]
    runs: int
    success_rate: float
    average_iterations_in_successful_runs: float
    average_survivor_count: float
    timeout_rate: float
    base_seed: int

    def csv_row(self) -> str:
        cells = [
            str(self.agents),
            str(self.m),
            str(float(self.noise_power)),
            str(bool(self.correction)),
            "" if self.termination_parameter is None else str(self.termination_parameter),
            str(self.runs),
            str(float(self.success_rate)),
            str(float(self.average_iterations_in_successful_runs)),
            str(float(self.average_survivor_count)),
            str(float(self.timeout_rate)),
            str(self.base_seed),
        ]
        return ",".join(cells)


def agent_seed_array(base_seed: int, run_index: int, n: int) -> np.ndarray:
    ss = np.random.SeedSequence([base_seed, run_index, _STREAM_AGENTS])
    return ss.generate_state(n, dtype=np.uint64)


def noise_rng(base_seed: int, run_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([base_seed, run_index, _STREAM_NOISE])
    )


def values_rng(base_seed: int, run_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([base_seed, run_index, _STREAM_VALUES])
    )


def _prefix_bits(config: ExperimentConfig, run_index: int, n: int) -> Optional[np.ndarray]:
    p = config.prefix_length
    if p == 0:
        return None
    rng = values_rng(config.base_seed, run_index)
    return rng.integers(0, 2, size=(n, p), dtype=np.uint8)


def build_agents(config: ExperimentConfig, run_index: int) -> list[AgentSequence]:
    """The run's inputs as explicit AgentSequence objects (reference path)."""
    n = config.n
    seeds = agent_seed_array(config.base_seed, run_index, n)
    prefixes = _prefix_bits(config, run_index, n)
    return [
        AgentSequence(
            prefix=() if prefixes is None else tuple(int(b) for b in prefixes[i]),
            tail_seed=int(seeds[i]),
        )
        for i in range(n)
    ]


def simulate_run_fast(
    config: ExperimentConfig,
    run_index: int,
    compute_d: bool = False,
    collect_survivors: bool = False,
) -> engine.FastRunResult:
    """One vectorized protocol run for the given run index."""
    config.require_scalar()
    if config.scheme not in ("scalablemax", "scalablemax-ec"):
        raise ValueError(f"not a protocol scheme: {config.scheme}")
    n = config.n
    variance = config.noise_variance
    return engine.simulate_run(
        agent_seeds=agent_seed_array(config.base_seed, run_index, n),
        m=config.m,
        noise_variance=variance,
        noise_rng=noise_rng(config.base_seed, run_index) if variance > 0 else None,
        max_iterations=config.iteration_cap,
        tau=config.tau if config.scheme == "scalablemax-ec" else None,
        prefix_bits=_prefix_bits(config, run_index, n),
        initial_estimate=tuple(int(d) for d in config.initial_estimate),
        compute_d=compute_d,
        collect_survivors=collect_survivors,
    )


def simulate_run_objects(config: ExperimentConfig, run_index: int) -> protocol.RunResult:
    """The same run through the object-level state machine (slow, reference)."""
    config.require_scalar()
    agents = build_agents(config, run_index)
    variance = config.noise_variance
    noise = NoiseModel.zero() if variance == 0 else NoiseModel.gaussian(variance)
    rng = noise_rng(config.base_seed, run_index)
    initial = Estimate.from_bits(config.initial_estimate)
    if config.scheme == "scalablemax":
        return protocol.run_scalablemax(
            agents, config.m, noise, rng, config.iteration_cap, initial
        )
    if config.scheme == "scalablemax-ec":
        return protocol.run_scalablemax_ec(
            agents, config.m, config.tau, noise, rng, config.iteration_cap, initial
        )
    raise ValueError(f"not a protocol scheme: {config.scheme}")


def iterate_runs(
    config: ExperimentConfig,
    compute_d: bool = False,
    collect_survivors: bool = False,
) -> Iterator[engine.FastRunResult]:
    for i in range(config.runs):
        yield simulate_run_fast(config, i, compute_d, collect_survivors)


def _protocol_record(config: ExperimentConfig) -> ExperimentRecord:
    successes = 0
    timeouts = 0
    iter_sum = 0
    surv_sum = 0
    for result in iterate_runs(config):
        if result.success:
            successes += 1
            iter_sum += result.iterations
            surv_sum += result.survivor_count
        if result.timeout:
            timeouts += 1
    return ExperimentRecord(
        agents=config.n,
        m=config.m,
        noise_power=float(config.noise_db),
        correction=config.scheme == "scalablemax-ec",
        termination_parameter=config.tau,
        runs=config.runs,
        success_rate=successes / config.runs,
        average_iterations_in_successful_runs=(
            iter_sum / successes if successes else math.nan
        ),
        average_survivor_count=surv_sum / successes if successes else math.nan,
        timeout_rate=timeouts / config.runs,
        base_seed=config.base_seed,
    )


def _gossip_record(config: ExperimentConfig) -> ExperimentRecord:
    graph = None
    if config.topology_path:
        graph = topology.load_topology(config.topology_path).graph
        n = graph.number_of_nodes()
    else:
        n = config.n
    runner = (
        baselines.run_random_broadcast
        if config.scheme == "rb"
        else baselines.run_random_pairwise
    )
    total = 0
    for i in range(config.runs):
        values = values_rng(config.base_seed, i).random(n)
        total += runner(values, graph, noise_rng(config.base_seed, i))
    return ExperimentRecord(
        agents=n,
        m=config.m,
        noise_power=float(config.noise_db),
        correction=False,
        termination_parameter=None,
        runs=config.runs,
        success_rate=1.0,
        average_iterations_in_successful_runs=total / config.runs,
        average_survivor_count=1.0,
        timeout_rate=0.0,
        base_seed=config.base_seed,
    )


def _multi_coordinator_record(config: ExperimentConfig) -> ExperimentRecord:
    network = topology.load_topology(config.topology_path)
    nodes = network.nodes
    n = len(nodes)
    variance = config.noise_variance
    noise = NoiseModel.zero() if variance == 0 else NoiseModel.gaussian(variance)
    cap = (
        config.max_iterations
        if config.max_iterations is not None
        else default_max_iterations(n)
    )
    successes = 0
    timeouts = 0
    iter_sum = 0
    surv_sum = 0.0
    for i in range(config.runs):
        seeds = agent_seed_array(config.base_seed, i, n)
        inputs = {
            node: AgentSequence(prefix=(), tail_seed=int(seeds[k]))
            for k, node in enumerate(nodes)
        }
        result = topology.run_multi_coordinator(
            network,
            inputs,
            config.m,
            noise,
            noise_rng(config.base_seed, i),
            cap,
            tau=config.tau,
        )
        gmax = topology.global_max_value(inputs)
        converged = result.success and all(
            result.values[node] is gmax for node in nodes
        )
        if converged:
            successes += 1
            iter_sum += sum(s.result.iterations for s in result.subruns)
            surv_sum += sum(s.result.survivor_count for s in result.subruns) / len(
                result.subruns
            )
        if any(s.result.timeout for s in result.subruns):
            timeouts += 1
    return ExperimentRecord(
        agents=n,
        m=config.m,
        noise_power=float(config.noise_db),
        correction=config.tau is not None,
        termination_parameter=config.tau,
        runs=config.runs,
        success_rate=successes / config.runs,
        average_iterations_in_successful_runs=(
            iter_sum / successes if successes else math.nan
        ),
        average_survivor_count=surv_sum / successes if successes else math.nan,
        timeout_rate=timeouts / config.runs,
        base_seed=config.base_seed,
    )


def run_experiment(config: ExperimentConfig) -> ExperimentRecord:
    """Execute one grid point and aggregate its metrics."""
    config.require_scalar()
    if config.scheme in ("scalablemax", "scalablemax-ec"):
        return _protocol_record(config)
    if config.scheme in ("rb", "rp"):
        return _gossip_record(config)
    return _multi_coordinator_record(config)


def sweep(config: ExperimentConfig, out_path: str) -> list[ExperimentRecord]:
    """Run the full grid and write one CSV row per point, atomically."""
    if not config.is_grid():
        raise ValueError("sweep requires at least one grid axis (list-valued field)")
    records = [run_experiment(point) for point in config.grid_points()]
    write_records(records, out_path)
    return records


def _write_text(out_path: str, text: str) -> None:
    """Atomic text write: the target path appears only once fully written."""
    directory = os.path.dirname(os.path.abspath(out_path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp_path, out_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def write_records(records: Sequence[ExperimentRecord], out_path: str) -> None:
    lines = [CSV_HEADER] + [record.csv_row() for record in records]
    _write_text(out_path, "\n".join(lines) + "\n")


def figures_data(
    out_dir: str,
    sweep_runs: int = 1000,
    scaling_runs: int = 1000,
    rp_runs: int = 2000,
    base_seed: int = 1,
) -> list[str]:
    """Emit the three experiment CSVs the figure renderer consumes.

    noise_sweep.csv: no-EC plus six tau series over the dB grid (n=1000, m=8).
    scaling_ec.csv: three (dB, tau) series over the agent-count grid.
    scaling_rbrp.csv: analytic RB round budget and the Monte Carlo RP
    (1-0.005)-quantile per agent count, both targeting error 0.005.
    """
    db_grid = [round(-5.5 + 1.5 * k, 2) for k in range(15)]
    n_grid = [1000, 2000, 3000, 4000, 5000]
    records: list[ExperimentRecord] = []
    plain = ExperimentConfig(
        agents=1000, m=8, scheme="scalablemax", noise_db=db_grid,
        runs=sweep_runs, base_seed=base_seed,
    )
    records.extend(run_experiment(p) for p in plain.grid_points())
    corrected = replace(
        plain, scheme="scalablemax-ec", tau=[2, 3, 4, 5, 10, 20]
    )
    records.extend(run_experiment(p) for p in corrected.grid_points())
    sweep_path = os.path.join(out_dir, "noise_sweep.csv")
    write_records(records, sweep_path)

    ec_records: list[ExperimentRecord] = []
    for db, tau in ((-1.0, 2), (5.0, 6), (7.0, 10)):
        series = ExperimentConfig(
            agents=n_grid, m=8, scheme="scalablemax-ec", tau=tau,
            noise_db=db, runs=scaling_runs, base_seed=base_seed,
        )
        ec_records.extend(run_experiment(p) for p in series.grid_points())
    ec_path = os.path.join(out_dir, "scaling_ec.csv")
    write_records(ec_records, ec_path)

    lines = ["agents,RB,RP"]
    for n in n_grid:
        rb = baselines.rb_iterations_for_error(n, 0.005)
        times = np.array(
            [
                baselines.run_random_pairwise(
                    values_rng(base_seed, i).random(n), None, noise_rng(base_seed, i)
                )
                for i in range(rp_runs)
            ]
        )
        rp = int(np.quantile(times, 1.0 - 0.005, method="higher"))
        lines.append(f"{n},{rb},{rp}")
    rbrp_path = os.path.join(out_dir, "scaling_rbrp.csv")
    _write_text(rbrp_path, "\n".join(lines) + "\n")
    return [sweep_path, ec_path, rbrp_path]


def load_config_file(path: str) -> dict[str, str]:
    """Flat key-value config text: one ``key = value`` per line, # comments."""
    options: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, value = line.split("=", 1)
            else:
                parts = line.split(None, 1)
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 'key = value'")
                key, value = parts
            options[key.strip().replace("-", "_")] = value.strip()
    return options
