"""Multi-coordinator extension to general connected network graphs.

A set of designated coordinators covers the graph when removing every edge
without a coordinator endpoint leaves it connected.  Max-consensus then runs
as c rounds over the c coordinator stars in a fixed sequential order; after
each subrun all members of that star overwrite their input with the subgraph
consensus value, and shared members carry it into later subruns.  The
configured scheme executes c^2 times in total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import networkx as nx
import numpy as np

from . import protocol
from .baselines import finishing_phase
from .bitseq import AgentSequence, true_max_index
from .channel import NoiseModel


@dataclass
class NetworkGraph:
    """Undirected connected wireless network with designated coordinators."""

    graph: nx.Graph
    coordinators: tuple

    def __post_init__(self) -> None:
        self.coordinators = tuple(self.coordinators)
        if not self.coordinators:
            raise ValueError("at least one coordinator is required")
        missing = [c for c in self.coordinators if c not in self.graph]
        if missing:
            raise ValueError(f"coordinator ids not in graph: {missing}")
        if len(set(self.coordinators)) != len(self.coordinators):
            raise ValueError("duplicate coordinator ids")
        if self.graph.number_of_nodes() > 1 and not nx.is_connected(self.graph):
            raise ValueError("network graph must be connected")

    @property
    def nodes(self) -> list:
        return list(self.graph.nodes())


def validate_cover(network: NetworkGraph) -> bool:
    """True iff the coordinator-adjacent edges alone keep the graph connected."""
    kept = nx.Graph()
    kept.add_nodes_from(network.graph.nodes())
    coords = set(network.coordinators)
    kept.add_edges_from(
        (u, v) for u, v in network.graph.edges() if u in coords or v in coords
    )
    return kept.number_of_nodes() <= 1 or nx.is_connected(kept)


def induced_star(network: NetworkGraph, coordinator_id) -> NetworkGraph:
    """Subgraph induced by one coordinator and its neighbors.

    A degree-0 coordinator yields a degenerate singleton star, which is legal
    but cannot propagate anything.
    """
    if coordinator_id not in network.coordinators:
        raise ValueError(f"{coordinator_id!r} is not a designated coordinator")
    members = [coordinator_id] + list(network.graph.neighbors(coordinator_id))
    sub = network.graph.subgraph(members).copy()
    return NetworkGraph(graph=sub, coordinators=(coordinator_id,))


@dataclass
class SubrunStats:
    """Bookkeeping for one scheme execution on one coordinator star."""

    round_index: int
    coordinator: object
    members: tuple
    result: protocol.RunResult
    consensus_value: Optional[AgentSequence]
    finishing_broadcasts: int


@dataclass
class MultiCoordinatorResult:
    values: dict
    subruns: list[SubrunStats] = field(default_factory=list)
    success: bool = True

    @property
    def executions(self) -> int:
        return len(self.subruns)


def run_multi_coordinator(
    network: NetworkGraph,
    inputs: dict,
    m: int,
    noise: NoiseModel,
    rng: np.random.Generator,
    max_iterations: int,
    tau: Optional[int] = None,
    scheme: Optional[Callable[..., protocol.RunResult]] = None,
) -> MultiCoordinatorResult:
    """Sequential multi-coordinator consensus: c rounds over c stars.

    ``inputs`` maps node id -> AgentSequence.  Each subrun performs weak
    m-max-consensus on the star members' current values, reduces the survivor
    set to the actual maximum with the digital finishing phase, and overwrites
    every member's value with it.  A failed subrun flags the whole result
    unsuccessful but the remaining subruns still execute, mirroring a real
    deployment where the schedule is fixed in advance.

    ``scheme`` overrides the subrun runner; it receives
    ``(member_values, m, noise, rng, max_iterations)`` and must return a
    :class:`protocol.RunResult`.  By default ``tau`` selects between plain
    ScalableMax (None) and ScalableMax-EC.
    """
    if set(inputs) != set(network.graph.nodes()):
        raise ValueError("inputs must provide exactly one sequence per node")
    if not validate_cover(network):
        raise ValueError("coordinators do not cover the graph (cover condition fails)")
    values = dict(inputs)
    stars = [induced_star(network, c) for c in network.coordinators]
    result = MultiCoordinatorResult(values=values)
    c = len(network.coordinators)
    for round_index in range(c):
        for star in stars:
            members = tuple(star.nodes)
            member_values = [values[node] for node in members]
            if scheme is not None:
                sub = scheme(member_values, m, noise, rng, max_iterations)
            elif tau is None:
                sub = protocol.run_scalablemax(member_values, m, noise, rng, max_iterations)
            else:
                sub = protocol.run_scalablemax_ec(
                    member_values, m, tau, noise, rng, max_iterations
                )
            consensus: Optional[AgentSequence] = None
            broadcasts = 0
            if sub.success:
                survivors = [x for x in member_values if sub.condition.satisfied_by(x)]
                consensus, broadcasts = finishing_phase(survivors, m)
                for node in members:
                    values[node] = consensus
            else:
                result.success = False
            result.subruns.append(
                SubrunStats(
                    round_index=round_index,
                    coordinator=star.coordinators[0],
                    members=members,
                    result=sub,
                    consensus_value=consensus,
                    finishing_broadcasts=broadcasts,
                )
            )
    return result


def global_max_value(inputs: dict) -> AgentSequence:
    """Brute-force global maximum over the original per-node inputs."""
    pool: dict[int, AgentSequence] = {}
    for v in inputs.values():
        pool.setdefault(id(v), v)
    candidates = list(pool.values())
    return candidates[true_max_index(candidates)]


def parse_topology(text: str) -> NetworkGraph:
    """Parse the edge-list topology format.

    One edge per line as two whitespace-separated node ids, plus one line
    ``coordinators <id> [<id> ...]`` naming the designated coordinators.
    Blank lines and ``#`` comments are ignored.  Node ids are kept as strings.
    """
    graph = nx.Graph()
    coordinators: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].lower() == "coordinators":
            if coordinators:
                raise ValueError(f"line {lineno}: duplicate coordinators line")
            if len(parts) < 2:
                raise ValueError(f"line {lineno}: coordinators line names no ids")
            coordinators = parts[1:]
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v' edge, got {raw!r}")
        u, v = parts
        if u == v:
            raise ValueError(f"line {lineno}: self-loop {u!r} is not allowed")
        graph.add_edge(u, v)
    if not coordinators:
        raise ValueError("topology file is missing a 'coordinators' line")
    return NetworkGraph(graph=graph, coordinators=tuple(coordinators))


def load_topology(path) -> NetworkGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_topology(fh.read())
