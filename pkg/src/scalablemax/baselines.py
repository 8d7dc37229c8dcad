"""Random-Broadcast / Random-Pairwise gossip baselines and the finishing phase.

Both gossip schemes spread the maximum over a connected graph through
error-free digital transmissions: RB picks a uniformly random node whose
neighbors absorb its value, RP picks a uniformly random edge whose endpoints
exchange and keep the larger value.  The returned cost is the number of picks
until every node holds the global maximum.

Only the spread of the maximum matters for that stopping time, so the
simulators track the set of max-holders instead of mutating every value.  On
complete graphs the holder process collapses to a chain of geometric waiting
times, which the fast paths sample directly; tests pin them against the
step-by-step :class:`GossipState` reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from .bitseq import AgentSequence, first_difference, true_max_index

_PICK_BLOCK = 4096


def _is_greater(a, b) -> bool:
    """b strictly greater than a, for plain comparables or agent sequences."""
    if a is b:
        return False
    if isinstance(a, AgentSequence):
        k = first_difference(a, b)
        return b.digit(k) > a.digit(k)
    return b > a


def _max_holder_mask(values: Sequence) -> np.ndarray:
    """Boolean mask of the positions holding the maximal value."""
    if len(values) == 0:
        raise ValueError("values must be nonempty")
    if isinstance(values[0], AgentSequence):
        unique: dict[int, AgentSequence] = {}
        for v in values:
            unique.setdefault(id(v), v)
        pool = list(unique.values())
        top = pool[true_max_index(pool)]
        return np.array([v is top for v in values], dtype=bool)
    top = values[0]
    for v in values[1:]:
        if _is_greater(top, v):
            top = v
    return np.array([not _is_greater(v, top) for v in values], dtype=bool)


@dataclass
class GossipState:
    """Step-by-step gossip reference: explicit per-agent values on a graph.

    Values are pointwise monotone nondecreasing under both update rules and
    absorb at the global maximum.  The accelerated simulators below must
    agree with driving this state directly (see the equivalence tests).
    """

    values: list
    graph: nx.Graph
    iterations: int = 0
    _order: list = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        self._order = list(self.graph.nodes())
        if len(self.values) != len(self._order):
            raise ValueError("one value per graph node is required")
        self._index = {node: i for i, node in enumerate(self._order)}

    def apply_broadcast(self, node_index: int) -> None:
        """Node broadcasts; every neighbor keeps the max of its own value."""
        v = self.values[node_index]
        for nb in self.graph.neighbors(self._order[node_index]):
            i = self._index[nb]
            if _is_greater(self.values[i], v):
                self.values[i] = v
        self.iterations += 1

    def apply_pairwise(self, u_index: int, v_index: int) -> None:
        """Both endpoints of an edge keep the larger of their two values."""
        a, b = self.values[u_index], self.values[v_index]
        winner = b if _is_greater(a, b) else a
        self.values[u_index] = winner
        self.values[v_index] = winner
        self.iterations += 1

    def consensus_reached(self) -> bool:
        mask = _max_holder_mask(self.values)
        return bool(mask.all())


def _neighbor_arrays(graph: nx.Graph) -> list[np.ndarray]:
    order = list(graph.nodes())
    index = {node: i for i, node in enumerate(order)}
    return [
        np.array(sorted(index[nb] for nb in graph.neighbors(node)), dtype=np.int64)
        for node in order
    ]


def _is_complete(graph: nx.Graph) -> bool:
    n = graph.number_of_nodes()
    return n >= 1 and all(d == n - 1 for _, d in graph.degree())


def _validate_graph(values: Sequence, graph: Optional[nx.Graph]) -> int:
    n = len(values)
    if n == 0:
        raise ValueError("values must be nonempty")
    if graph is None:
        return n
    if graph.number_of_nodes() != n:
        raise ValueError("one value per graph node is required")
    if n > 1 and not nx.is_connected(graph):
        raise ValueError("gossip requires a connected graph")
    return n


def run_random_broadcast(
    values: Sequence, graph: Optional[nx.Graph], rng: np.random.Generator
) -> int:
    """Picks until RB consensus; ``graph=None`` means the complete graph.

    On a complete graph consensus happens at the first pick of a max-holder,
    a geometric waiting time that is sampled directly; general graphs run the
    holder-spreading process pick by pick.
    """
    n = _validate_graph(values, graph)
    holds = _max_holder_mask(values)
    remaining = int(n - holds.sum())
    if remaining == 0:
        return 0
    if graph is None or _is_complete(graph):
        return int(rng.geometric(float(holds.sum()) / n))
    adjacency = _neighbor_arrays(graph)
    iterations = 0
    while True:
        for j in rng.integers(0, n, size=_PICK_BLOCK):
            iterations += 1
            if holds[j]:
                nb = adjacency[j]
                fresh = ~holds[nb]
                if fresh.any():
                    holds[nb[fresh]] = True
                    remaining -= int(fresh.sum())
                    if remaining == 0:
                        return iterations


def run_random_pairwise(
    values: Sequence, graph: Optional[nx.Graph], rng: np.random.Generator
) -> int:
    """Picks until RP consensus; ``graph=None`` means the complete graph.

    With k max-holders on a complete graph, each pick spreads with probability
    k(n-k)/C(n,2), so the stopping time is a sum of independent geometric
    variables, sampled in one vectorized draw.
    """
    n = _validate_graph(values, graph)
    holds = _max_holder_mask(values)
    h = int(holds.sum())
    if h == n:
        return 0
    if graph is None or _is_complete(graph):
        k = np.arange(h, n, dtype=np.float64)
        p = k * (n - k) / (n * (n - 1) / 2.0)
        return int(rng.geometric(p).sum())
    order = {node: i for i, node in enumerate(graph.nodes())}
    endpoint_pairs = [(order[u], order[v]) for u, v in graph.edges()]
    eu = np.array([u for u, _ in endpoint_pairs], dtype=np.int64)
    ev = np.array([v for _, v in endpoint_pairs], dtype=np.int64)
    remaining = n - h
    iterations = 0
    while True:
        for e in rng.integers(0, len(eu), size=_PICK_BLOCK):
            iterations += 1
            u, v = eu[e], ev[e]
            if holds[u] != holds[v]:
                holds[u] = holds[v] = True
                remaining -= 1
                if remaining == 0:
                    return iterations


def rb_iterations_for_error(n: int, epsilon: float) -> int:
    """Deterministic RB round budget with failure probability at most epsilon
    on a complete graph: ceil(ln(1/eps) / -ln(1 - 1/n))."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must be in (0, 1)")
    return math.ceil(math.log(1.0 / epsilon) / -math.log1p(-1.0 / n))


def finishing_phase(survivors: Sequence, m: int) -> tuple[object, int]:
    """Weak-to-full reduction: survivors broadcast digitally in round robin.

    Everyone keeps the running max, so the result is exact and costs exactly
    one broadcast per survivor, bounded by m independent of the network size.
    Returns (global max value, number of broadcasts used).
    """
    if not (1 <= len(survivors) <= m):
        raise ValueError(f"survivor count must lie in [1, {m}], got {len(survivors)}")
    best = survivors[0]
    for value in survivors[1:]:
        if _is_greater(best, value):
            best = value
    return best, len(survivors)
