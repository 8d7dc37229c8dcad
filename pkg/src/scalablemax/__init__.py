"""Simulator for ScalableMax max-consensus over a wireless multiple-access
channel, with error-corrected and multi-coordinator variants, gossip
baselines, analytic bounds and a Monte Carlo experiment harness."""

from .analysis import (
    BoundReport,
    d_tail_bound,
    description_length,
    is_good_state,
    success_bound,
)
from .baselines import (
    GossipState,
    finishing_phase,
    rb_iterations_for_error,
    run_random_broadcast,
    run_random_pairwise,
)
from .bitseq import AgentSequence, ComparisonCapError, Estimate, is_geq, is_gt, true_max_index
from .channel import NoiseModel, WmacFrame, multicast, variance_from_db, wmac
from .harness import ExperimentConfig, ExperimentRecord, figures_data, run_experiment, sweep
from .protocol import (
    CoordinatorState,
    Decision,
    RunResult,
    TerminationCondition,
    agent_signals,
    coordinator_step,
    coordinator_step_ec,
    evaluate_outcome,
    run_iteration,
    run_scalablemax,
    run_scalablemax_ec,
)
from .topology import (
    MultiCoordinatorResult,
    NetworkGraph,
    global_max_value,
    induced_star,
    load_topology,
    parse_topology,
    run_multi_coordinator,
    validate_cover,
)

__version__ = "0.1.0"

__all__ = [
    "AgentSequence",
    "BoundReport",
    "ComparisonCapError",
    "CoordinatorState",
    "Decision",
    "Estimate",
    "ExperimentConfig",
    "ExperimentRecord",
    "GossipState",
    "MultiCoordinatorResult",
    "NetworkGraph",
    "NoiseModel",
    "RunResult",
    "TerminationCondition",
    "WmacFrame",
    "agent_signals",
    "coordinator_step",
    "coordinator_step_ec",
    "d_tail_bound",
    "description_length",
    "evaluate_outcome",
    "figures_data",
    "finishing_phase",
    "global_max_value",
    "induced_star",
    "is_geq",
    "is_good_state",
    "is_gt",
    "load_topology",
    "multicast",
    "parse_topology",
    "rb_iterations_for_error",
    "run_experiment",
    "run_iteration",
    "run_multi_coordinator",
    "run_random_broadcast",
    "run_random_pairwise",
    "run_scalablemax",
    "run_scalablemax_ec",
    "success_bound",
    "sweep",
    "true_max_index",
    "validate_cover",
    "variance_from_db",
    "wmac",
]
