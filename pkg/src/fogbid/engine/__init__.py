"""Discrete-time simulation engine: config, workload, loop, results."""

from .config import ConfigInvalid, SimulationConfig, standard_chain
from .core import (
    RawRun,
    available_backends,
    deploy_phase,
    resolve_backend,
    run,
    simulate_raw,
    summarize,
)
from .results import (
    NodeReport,
    OUTCOME_HEADER,
    RequestOutcome,
    SimulationResult,
    outcome_lines,
    summary_lines,
)
from .workload import WorkloadArrays, generate_arrays, generate_workload, materialize_requests

__all__ = [
    "ConfigInvalid",
    "SimulationConfig",
    "standard_chain",
    "RawRun",
    "available_backends",
    "deploy_phase",
    "resolve_backend",
    "run",
    "simulate_raw",
    "summarize",
    "NodeReport",
    "OUTCOME_HEADER",
    "RequestOutcome",
    "SimulationResult",
    "outcome_lines",
    "summary_lines",
    "WorkloadArrays",
    "generate_arrays",
    "generate_workload",
    "materialize_requests",
]
