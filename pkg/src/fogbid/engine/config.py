"""Simulation configuration: parameters, defaults, and validation.

The standard topology is a chain of edge nodes feeding one intermediary
feeding one cloud; capacities and hop latencies are configurable per
tier. Custom topologies can be passed directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Any

from ..auction import PaymentRule
from ..domain import (
    DomainError,
    NodeKind,
    NodeSpec,
    Topology,
    UniformParam,
    validate_topology,
)
from ..placement import EvictionPolicy


class ConfigInvalid(DomainError):
    """A simulation configuration violates one of its invariants."""


DEFAULT_EDGE_TO_INTERMEDIARY = UniformParam(20, 10)
DEFAULT_INTERMEDIARY_TO_CLOUD = UniformParam(40, 20)


def standard_chain(
    edge_count: int = 1,
    edge_storage_capacity: int = 100,
    edge_processing_capacity: int = 5,
    intermediary_storage_capacity: int = 500,
    intermediary_processing_capacity: int = 20,
    edge_to_intermediary_latency: UniformParam = DEFAULT_EDGE_TO_INTERMEDIARY,
    intermediary_to_cloud_latency: UniformParam = DEFAULT_INTERMEDIARY_TO_CLOUD,
) -> Topology:
    """Build the edge(s) -> intermediary -> cloud chain topology.

    Edges get ids 0..edge_count-1, the intermediary edge_count, the
    cloud edge_count+1.
    """
    if edge_count < 1:
        raise ConfigInvalid(f"edge_count must be >= 1, got {edge_count}")
    intermediary_id = edge_count
    cloud_id = edge_count + 1
    nodes = [
        NodeSpec(
            id=i,
            kind=NodeKind.EDGE,
            storage_capacity=edge_storage_capacity,
            processing_capacity=edge_processing_capacity,
            uplink=intermediary_id,
            uplink_latency=edge_to_intermediary_latency,
        )
        for i in range(edge_count)
    ]
    nodes.append(
        NodeSpec(
            id=intermediary_id,
            kind=NodeKind.INTERMEDIARY,
            storage_capacity=intermediary_storage_capacity,
            processing_capacity=intermediary_processing_capacity,
            uplink=cloud_id,
            uplink_latency=intermediary_to_cloud_latency,
        )
    )
    nodes.append(
        NodeSpec(
            id=cloud_id,
            kind=NodeKind.CLOUD,
            storage_capacity=None,
            processing_capacity=None,
            uplink=None,
        )
    )
    return Topology(tuple(nodes))


@dataclass(frozen=True)
class SimulationConfig:
    """Full parameter set for one simulation run.

    Durations and latencies are milliseconds; bid parameters are in
    currency units and must land on whole cents; all sampled quantities
    are drawn uniformly over the closed range of their UniformParam.
    """

    seed: int = 42
    duration_ms: int = 120_000
    tick_ms: int = 1
    topology: Topology = field(default_factory=standard_chain)
    processing_latency: UniformParam = UniformParam(30, 15)
    edge_to_intermediary_latency: UniformParam = DEFAULT_EDGE_TO_INTERMEDIARY
    intermediary_to_cloud_latency: UniformParam = DEFAULT_INTERMEDIARY_TO_CLOUD
    storage_bid: UniformParam = UniformParam(100, 50)
    processing_bid: UniformParam = UniformParam(100, 50)
    executable_count: int = 5
    executable_size: UniformParam = UniformParam(10, 5)
    requests_per_second_per_edge: int = 100
    payment_rule: PaymentRule = PaymentRule.FIRST_PRICE
    eviction_policy: EvictionPolicy = EvictionPolicy.ABSOLUTE_BID

    def __post_init__(self) -> None:
        # The tier latency fields are authoritative for the standard tier
        # links; other uplinks keep their per-node latency.
        by_id = {spec.id: spec for spec in self.topology.nodes}
        rewritten = []
        for spec in self.topology.nodes:
            target = by_id.get(spec.uplink) if spec.uplink is not None else None
            if target is None:
                rewritten.append(spec)
            elif spec.kind is NodeKind.EDGE and target.kind is NodeKind.INTERMEDIARY:
                rewritten.append(replace(spec, uplink_latency=self.edge_to_intermediary_latency))
            elif spec.kind is NodeKind.INTERMEDIARY and target.kind is NodeKind.CLOUD:
                rewritten.append(replace(spec, uplink_latency=self.intermediary_to_cloud_latency))
            else:
                rewritten.append(spec)
        object.__setattr__(self, "topology", Topology(tuple(rewritten)))

    @property
    def requests_per_edge(self) -> int:
        return self.requests_per_second_per_edge * self.duration_ms // 1000

    def validate(self) -> None:
        """Raise ConfigInvalid on the first violated invariant."""
        if self.duration_ms <= 0:
            raise ConfigInvalid(f"duration_ms must be > 0, got {self.duration_ms}")
        if self.tick_ms <= 0:
            raise ConfigInvalid(f"tick_ms must be > 0, got {self.tick_ms}")
        if self.duration_ms % self.tick_ms != 0:
            raise ConfigInvalid(
                f"duration_ms {self.duration_ms} is not a multiple of tick_ms {self.tick_ms}"
            )
        if self.executable_count < 1:
            raise ConfigInvalid(f"executable_count must be >= 1, got {self.executable_count}")
        if self.requests_per_second_per_edge < 0:
            raise ConfigInvalid(
                f"requests_per_second_per_edge must be >= 0, "
                f"got {self.requests_per_second_per_edge}"
            )
        if self.requests_per_second_per_edge * self.duration_ms % 1000 != 0:
            raise ConfigInvalid(
                "requests_per_second_per_edge x duration must give a whole "
                f"request count per edge, got {self.requests_per_second_per_edge}"
                f" req/s over {self.duration_ms} ms"
            )
        try:
            lo, _ = self.processing_latency.int_bounds()
            if lo < 1:
                raise ConfigInvalid(
                    f"processing_latency lower bound must be >= 1 ms, got {lo}"
                )
            self.executable_size.int_bounds()
            self.storage_bid.int_bounds(scale=100)
            self.processing_bid.int_bounds(scale=100)
            for spec in self.topology.nodes:
                if spec.uplink_latency is not None:
                    spec.uplink_latency.int_bounds()
            validate_topology(self.topology)
        except ConfigInvalid:
            raise
        except DomainError as exc:
            raise ConfigInvalid(str(exc)) from exc

    def with_overrides(self, overrides: dict[str, Any] | None) -> "SimulationConfig":
        """Return a copy with the named fields replaced; unknown names are rejected."""
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigInvalid(f"unknown config fields: {', '.join(unknown)}")
        return replace(self, **overrides)
