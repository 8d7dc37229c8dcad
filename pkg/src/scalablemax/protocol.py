"""ScalableMax and ScalableMax-EC coordinator state machines.

One iteration t spans four time instants: at 4t the coordinator multicasts
its estimate delta, and at 4t+1 .. 4t+3 the agents signal set membership
through the WMAC (protest, activity, raising steps).  Only after all three
readings does the coordinator post-process and either refine its estimate or
terminate with a condition of the form x > S or x >= S.

The error-correcting variant replaces immediate termination with per-estimate
termination counters and adds digit-removal branches that can undo an earlier
bad append.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import channel as ch
from .analysis import description_length
from .bitseq import AgentSequence, Estimate, is_geq, is_gt, relation, true_max_index

#: Counter tags of the ScalableMax-EC termination counters T(S, cond).
COUNTER_TAGS = (">", ">=", "append")


def _require_even(m: int) -> None:
    if m <= 0 or m % 2 != 0:
        raise ValueError(f"m must be an even positive integer, got {m}")


@dataclass(frozen=True)
class TerminationCondition:
    """The coordinator's output: phi(x) = x > S or phi(x) = x >= S."""

    kind: str  # ">" (strictly greater) or ">=" (greater or equal)
    reference: Estimate

    def __post_init__(self) -> None:
        if self.kind not in (">", ">="):
            raise ValueError(f"condition kind must be '>' or '>=', got {self.kind!r}")

    def satisfied_by(self, x: AgentSequence) -> bool:
        if self.kind == ">":
            return is_gt(x, self.reference)
        return is_geq(x, self.reference)

    def __str__(self) -> str:
        return f"x {self.kind} {self.reference}"


@dataclass(frozen=True)
class Decision:
    """Outcome of one coordinator post-processing: continue or terminate.

    ``branch`` names the ladder branch that fired, which the tests compare
    against a straight-line transcription oracle of the two algorithms.
    """

    branch: str
    new_estimate: Optional[Estimate] = None
    condition: Optional[TerminationCondition] = None

    @classmethod
    def proceed(cls, branch: str, new_estimate: Estimate) -> "Decision":
        return cls(branch=branch, new_estimate=new_estimate)

    @classmethod
    def stop(cls, branch: str, condition: TerminationCondition) -> "Decision":
        return cls(branch=branch, condition=condition)

    @property
    def terminates(self) -> bool:
        return self.condition is not None


@dataclass
class CoordinatorState:
    """Coordinator-side run state: estimate, iteration count, EC counters."""

    estimate: Estimate = field(default_factory=Estimate.empty)
    iteration: int = 0
    counters: dict = field(default_factory=dict)
    tau: Optional[int] = None  # absent = plain ScalableMax
    last_delta: str = "no change"

    def counter(self, s: Estimate, tag: str) -> int:
        return self.counters.get((s.digits, tag), 0)

    def bump_counter(self, s: Estimate, tag: str) -> int:
        key = (s.digits, tag)
        value = self.counters.get(key, 0) + 1
        self.counters[key] = value
        return value


@dataclass(frozen=True)
class RunResult:
    """Outcome of a full run.

    ``iterations`` counts executed iterations including the terminating one.
    ``condition`` is None exactly when the run timed out at the iteration cap.
    ``realized_d`` is the instance's description length, measured from the
    actual input sequences rather than assumed.
    """

    success: bool
    survivor_count: int
    iterations: int
    condition: Optional[TerminationCondition]
    timeout: bool
    realized_d: int

    def __post_init__(self) -> None:
        if self.timeout and self.condition is not None:
            raise ValueError("timeout results carry no termination condition")


def agent_signals(x: AgentSequence, s: Estimate) -> tuple[int, int, int]:
    """The three WMAC bits one agent transmits for estimate S.

    protest = 1{x > S}, activity = 1{x >= S}, raising = 1{x >= S'1}.
    """
    rel = relation(x, s)
    protest = 1 if rel > 0 else 0
    activity = 1 if rel >= 0 else 0
    raising = 1 if is_geq(x, s.append(1)) else 0
    return protest, activity, raising


def coordinator_step(m: int, g1: float, g2: float, g3: float, s: Estimate) -> Decision:
    """Post-processing ladder of plain ScalableMax.

    g1, g2, g3 are the received WMAC values of the protest, activity and
    raising steps.  Thresholds are m/4 and 3m/4; comparisons are strict, and
    since the noise is continuous, boundary equality has probability zero.
    """
    _require_even(m)
    lo = m / 4.0
    hi = 3.0 * m / 4.0
    if g1 > lo:
        return Decision.stop("terminate-gt", TerminationCondition(">", s))
    if g2 < hi:
        return Decision.stop("terminate-geq", TerminationCondition(">=", s))
    if g3 < lo:
        return Decision.proceed("append-0", s.append(0))
    s1 = s.append(1)
    if g3 < hi:
        return Decision.stop("append-1-terminate", TerminationCondition(">=", s1))
    return Decision.proceed("append-1", s1)


def coordinator_step_ec(
    m: int, tau: int, state: CoordinatorState, g1: float, g2: float, g3: float
) -> Decision:
    """Post-processing ladder of ScalableMax-EC.

    Adds two correction branches (remove the last estimate digit) and defers
    every termination until the matching counter T(S, cond) reaches tau.  A
    counter that is still below tau leaves the estimate unchanged, so the next
    iteration re-runs with the same S.  Counters are keyed by the full digit
    string of S and persist when an estimate is revisited after a removal.
    """
    _require_even(m)
    if tau < 1:
        raise ValueError(f"tau must be a positive integer, got {tau}")
    s = state.estimate
    lo = m / 4.0
    hi = 3.0 * m / 4.0
    if g1 > hi:
        return Decision.proceed("remove-protest", s.drop_last())
    if g1 > lo:
        if state.bump_counter(s, ">") >= tau:
            return Decision.stop("counter-gt-terminate", TerminationCondition(">", s))
        return Decision.proceed("counter-gt", s)
    if g2 < lo:
        return Decision.proceed("remove-activity", s.drop_last())
    if g2 < hi:
        if state.bump_counter(s, ">=") >= tau:
            return Decision.stop("counter-geq-terminate", TerminationCondition(">=", s))
        return Decision.proceed("counter-geq", s)
    if g3 < lo:
        return Decision.proceed("append-0", s.append(0))
    if g3 < hi:
        if state.bump_counter(s, "append") >= tau:
            return Decision.stop(
                "counter-append-terminate", TerminationCondition(">=", s.append(1))
            )
        return Decision.proceed("counter-append", s)
    return Decision.proceed("append-1", s.append(1))


def run_iteration(
    agents: Sequence[AgentSequence],
    state: CoordinatorState,
    m: int,
    noise: ch.NoiseModel,
    rng: np.random.Generator,
) -> Decision:
    """One full protocol iteration: multicast, three WMAC uses, post-processing.

    All three WMAC steps happen every iteration (the coordinator decides only
    after step 4t+3), so an iteration always costs 1 multicast + 3 WMAC uses
    and, under gaussian noise, consumes exactly 3 noise draws.
    """
    s = state.estimate
    ch.multicast(state.last_delta)
    signals = [agent_signals(x, s) for x in agents]
    g1 = ch.wmac([sig[0] for sig in signals], noise, rng)
    g2 = ch.wmac([sig[1] for sig in signals], noise, rng)
    g3 = ch.wmac([sig[2] for sig in signals], noise, rng)
    if state.tau is None:
        decision = coordinator_step(m, g1, g2, g3, s)
    else:
        decision = coordinator_step_ec(m, state.tau, state, g1, g2, g3)
    state.iteration += 1
    return decision


def _estimate_delta(old: Estimate, new: Estimate) -> str:
    if len(new) == len(old) + 1:
        return f"append {new.digits[-1]}"
    if len(new) == len(old) - 1:
        return "remove last"
    if new == old:
        return "no change"
    raise ValueError(f"estimates differ by more than one digit: {old} -> {new}")


def _unique_inputs(agents: Sequence[AgentSequence]) -> list[AgentSequence]:
    # Multi-coordinator subruns may legitimately hand the same sequence object
    # to several agents; collapse those for the description-length measure.
    seen: dict[int, AgentSequence] = {}
    for x in agents:
        seen.setdefault(id(x), x)
    return list(seen.values())


def evaluate_outcome(
    condition: TerminationCondition, agents: Sequence[AgentSequence], m: int
) -> tuple[int, bool]:
    """Survivor count |M| and the weak m-max-consensus success verdict.

    Also cross-checks the structural guarantee that the true maximum is in M
    whenever M is nonempty; a violation would mean the condition evaluation
    itself is broken, so it raises instead of returning quietly.
    """
    survivors = [x for x in agents if condition.satisfied_by(x)]
    count = len(survivors)
    if count > 0:
        unique = _unique_inputs(agents)
        top = unique[true_max_index(unique)]
        if not condition.satisfied_by(top):
            raise RuntimeError(
                "consistency violation: nonempty survivor set without the true maximum"
            )
    return count, 1 <= count <= m


def _run(
    agents: Sequence[AgentSequence],
    m: int,
    noise: ch.NoiseModel,
    rng: np.random.Generator,
    max_iterations: int,
    tau: Optional[int],
    initial_estimate: Estimate,
) -> RunResult:
    _require_even(m)
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    if len(agents) == 0:
        raise ValueError("at least one agent is required")
    realized_d = description_length(_unique_inputs(agents))
    state = CoordinatorState(estimate=initial_estimate, tau=tau)
    state.last_delta = f"start at {initial_estimate}"
    for _ in range(max_iterations):
        decision = run_iteration(agents, state, m, noise, rng)
        if decision.terminates:
            count, success = evaluate_outcome(decision.condition, agents, m)
            return RunResult(
                success=success,
                survivor_count=count,
                iterations=state.iteration,
                condition=decision.condition,
                timeout=False,
                realized_d=realized_d,
            )
        state.last_delta = _estimate_delta(state.estimate, decision.new_estimate)
        state.estimate = decision.new_estimate
    return RunResult(
        success=False,
        survivor_count=0,
        iterations=state.iteration,
        condition=None,
        timeout=True,
        realized_d=realized_d,
    )


def run_scalablemax(
    agents: Sequence[AgentSequence],
    m: int,
    noise: ch.NoiseModel,
    rng: np.random.Generator,
    max_iterations: int,
    initial_estimate: Optional[Estimate] = None,
) -> RunResult:
    """Run plain ScalableMax from S(0) (default: the empty estimate)."""
    return _run(
        agents, m, noise, rng, max_iterations, None, initial_estimate or Estimate.empty()
    )


def run_scalablemax_ec(
    agents: Sequence[AgentSequence],
    m: int,
    tau: int,
    noise: ch.NoiseModel,
    rng: np.random.Generator,
    max_iterations: int,
    initial_estimate: Optional[Estimate] = None,
) -> RunResult:
    """Run ScalableMax-EC with termination threshold tau."""
    if tau < 1:
        raise ValueError(f"tau must be a positive integer, got {tau}")
    return _run(
        agents, m, noise, rng, max_iterations, tau, initial_estimate or Estimate.empty()
    )
