"""fogbid: auction-based serverless function placement simulator.

Deterministic, seed-reproducible simulation of function placement
across an edge -> intermediary -> cloud hierarchy, where executables
bid for storage and requests bid for processing slots at each node.
"""

from .auction import AuctionOutcome, Bid, PaymentRule, allocate, brute_force_best_response
from .domain import (
    BidPair,
    DomainError,
    Executable,
    Money,
    NodeKind,
    NodeSpec,
    Request,
    Topology,
    TopologyError,
    TopologyViolation,
    UniformParam,
    validate_topology,
)
from .engine import (
    ConfigInvalid,
    SimulationConfig,
    SimulationResult,
    generate_workload,
    run,
    standard_chain,
)
from .placement import (
    EvictionPolicy,
    NodeState,
    RejectReason,
    StorageDecision,
    accrue_storage_revenue,
    offer_executable,
    offer_requests,
    release_finished,
)

__version__ = "0.1.0"

__all__ = [
    "AuctionOutcome",
    "Bid",
    "PaymentRule",
    "allocate",
    "brute_force_best_response",
    "BidPair",
    "DomainError",
    "Executable",
    "Money",
    "NodeKind",
    "NodeSpec",
    "Request",
    "Topology",
    "TopologyError",
    "TopologyViolation",
    "UniformParam",
    "validate_topology",
    "ConfigInvalid",
    "SimulationConfig",
    "SimulationResult",
    "generate_workload",
    "run",
    "standard_chain",
    "EvictionPolicy",
    "NodeState",
    "RejectReason",
    "StorageDecision",
    "accrue_storage_revenue",
    "offer_executable",
    "offer_requests",
    "release_finished",
    "__version__",
]
