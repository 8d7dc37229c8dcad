"""Analytic quantities behind the d+1 iteration guarantee.

Covers the realized description length d of an instance, the success
probability lower bound P(N <= m/4)^(3(d+1)), the log-sum tail bound on d for
uniform inputs, and the good-state predicate the bounded-noise argument
maintains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .bitseq import AgentSequence, Estimate, first_difference, is_geq, is_gt


def normal_cdf(z: float) -> float:
    """Standard normal CDF via erf; avoids a scipy dependency."""
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def description_length(agents: Sequence[AgentSequence]) -> int:
    """Smallest prefix length at which all agents are pairwise distinguishable.

    Equals 1 + the longest pairwise common prefix; 0 for a single agent.
    Materializes tails only as far as the pairwise first differences require.
    """
    if not agents:
        raise ValueError("agents must be nonempty")
    d = 0
    for i in range(len(agents)):
        for j in range(i + 1, len(agents)):
            d = max(d, first_difference(agents[i], agents[j]) + 1)
    return d


def success_bound(d: int, m: int, sigma: float) -> float:
    """Analytic lower bound on successful termination within d+1 iterations.

    Gaussian specialization: Phi(m/(4 sigma))^(3(d+1)); sigma = 0 gives
    certainty.
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    if m <= 0 or m % 2 != 0:
        raise ValueError(f"m must be an even positive integer, got {m}")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return 1.0
    return success_bound_from_cdf(d, lambda c: normal_cdf(c / sigma), m)


def success_bound_from_cdf(d: int, noise_cdf: Callable[[float], float], m: int) -> float:
    """Generic form of the bound for any symmetric noise law: P(N <= m/4)^(3(d+1))."""
    return noise_cdf(m / 4.0) ** (3 * (d + 1))


def d_tail_bound(n: int, p: int, epsilon: float) -> float:
    """Threshold d0 with P(d >= d0) <= epsilon for inputs of p arbitrary bits
    followed by uniform bits: p + log2 n + log2(n-1) + log2(1/eps) - 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if p < 0:
        raise ValueError("p must be nonnegative")
    if not (0 < epsilon <= 1):
        raise ValueError("epsilon must be in (0, 1]")
    return p + math.log2(n) + math.log2(n - 1) + math.log2(1.0 / epsilon) - 1.0


def is_good_state(agents: Sequence[AgentSequence], s: Estimate, m: int) -> bool:
    """Good state: fewer than m/2 protesting agents and at least m/2 active ones.

    Computed by brute-force membership so it can serve as an independent check
    on the incremental bookkeeping of the simulators.
    """
    protesting = sum(1 for x in agents if is_gt(x, s))
    active = sum(1 for x in agents if is_geq(x, s))
    return protesting < m / 2 and active >= m / 2


@dataclass(frozen=True)
class BoundReport:
    """A (d, m, sigma) triple together with the resulting success bound."""

    d: int
    m: int
    sigma: float
    bound: float

    @classmethod
    def compute(cls, d: int, m: int, sigma: float) -> "BoundReport":
        return cls(d=d, m=m, sigma=sigma, bound=success_bound(d, m, sigma))
