"""Result types, summary metrics, and line-oriented serialization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..domain import Money, NodeKind
from .config import SimulationConfig


@dataclass(frozen=True)
class RequestOutcome:
    """Where one request ended up and what it cost."""

    request_id: int
    served_at: NodeKind
    serving_node: int
    payment: Money
    total_latency_ms: int
    hop_count: int
    overflowed_simulation_end: bool


@dataclass(frozen=True)
class NodeReport:
    """Per-node revenue and placement summary at the end of a run."""

    kind: NodeKind
    storage_revenue: Money
    processing_revenue: Money
    executions_served: int
    avg_execution_price: float
    stored_executables_at_end: tuple[int, ...]
    avg_storage_bid_of_stored: float


@dataclass(frozen=True)
class SimulationResult:
    """Everything a run produces: config echo, node reports, global metrics."""

    config: SimulationConfig
    per_node: Mapping[int, NodeReport]
    served_per_kind: Mapping[NodeKind, int]
    avg_latency_ms: float
    p50_latency_ms: int
    p95_latency_ms: int
    outcomes: tuple[RequestOutcome, ...]

    @property
    def total_requests(self) -> int:
        return sum(self.served_per_kind.values())


def nearest_rank(sorted_values: np.ndarray, percentile: float) -> int:
    """Nearest-rank percentile of a pre-sorted integer array (0 if empty)."""
    n = len(sorted_values)
    if n == 0:
        return 0
    rank = max(1, int(np.ceil(percentile / 100.0 * n)))
    return int(sorted_values[rank - 1])


OUTCOME_HEADER = "request_id,served_kind,serving_node,payment,latency_ms,hops,overflow"


def outcome_lines(result: SimulationResult) -> list[str]:
    """Serialize outcomes one per line, header first, in request id order."""
    lines = [OUTCOME_HEADER]
    for o in sorted(result.outcomes, key=lambda o: o.request_id):
        lines.append(
            f"{o.request_id},{o.served_at},{o.serving_node},{o.payment},"
            f"{o.total_latency_ms},{o.hop_count},{int(o.overflowed_simulation_end)}"
        )
    return lines


def summary_lines(result: SimulationResult) -> list[str]:
    """Human-readable, byte-stable summary block."""
    lines = [
        f"requests = {result.total_requests}",
        f"avg_latency_ms = {result.avg_latency_ms:.6f}",
        f"p50_latency_ms = {result.p50_latency_ms}",
        f"p95_latency_ms = {result.p95_latency_ms}",
    ]
    for kind in NodeKind:
        lines.append(f"served_{kind} = {result.served_per_kind.get(kind, 0)}")
    for node_id in sorted(result.per_node):
        report = result.per_node[node_id]
        lines.append(
            f"node {node_id} kind={report.kind}"
            f" storage_revenue={report.storage_revenue}"
            f" processing_revenue={report.processing_revenue}"
            f" executions={report.executions_served}"
            f" avg_execution_price={report.avg_execution_price:.6f}"
            f" stored={len(report.stored_executables_at_end)}"
            f" avg_storage_bid={report.avg_storage_bid_of_stored:.6f}"
        )
    return lines
