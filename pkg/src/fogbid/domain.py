"""Core data model for the fog placement simulator.

Immutable value types shared by every other module: exact fixed-point
money, node and topology descriptions, executables, requests, and
uniform sampling parameters. The only behavior here is construction
validation; all mutation lives in the engine's node state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping


class DomainError(ValueError):
    """A domain value or structure violates one of its invariants."""


class NodeKind(enum.Enum):
    """The three tiers of the fog hierarchy."""

    EDGE = "edge"
    INTERMEDIARY = "intermediary"
    CLOUD = "cloud"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class Money:
    """A non-negative currency amount with exactly two decimal places.

    Stored as integer cents, so sums over millions of payments are exact
    and independent of addition order.
    """

    cents: int

    def __post_init__(self) -> None:
        if not isinstance(self.cents, int):
            raise DomainError(f"money must be integer cents, got {self.cents!r}")
        if self.cents < 0:
            raise DomainError(f"money cannot be negative: {self.cents} cents")

    @classmethod
    def of(cls, units: int) -> "Money":
        """Whole currency units, e.g. Money.of(100) == 100.00."""
        return cls(units * 100)

    @classmethod
    def parse(cls, text: str) -> "Money":
        """Parse '123', '123.4', or '123.45' into exact cents."""
        text = text.strip()
        whole, _, frac = text.partition(".")
        if len(frac) > 2 or not whole.isdigit() or (frac and not frac.isdigit()):
            raise DomainError(f"not a non-negative 2-decimal currency amount: {text!r}")
        return cls(int(whole) * 100 + int(frac.ljust(2, "0")))

    def __add__(self, other: "Money") -> "Money":
        return Money(self.cents + other.cents)

    def __radd__(self, other: int) -> "Money":
        # supports sum() over Money with the default 0 start
        if other == 0:
            return self
        return NotImplemented

    def __sub__(self, other: "Money") -> "Money":
        return Money(self.cents - other.cents)

    def __mul__(self, factor: int) -> "Money":
        return Money(self.cents * factor)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.cents // 100}.{self.cents % 100:02d}"

    def to_float(self) -> float:
        """Lossy float view, for reporting only."""
        return self.cents / 100.0


ZERO = Money(0)


@dataclass(frozen=True)
class UniformParam:
    """Parameters of a uniform distribution over [mean - half_width, mean + half_width]."""

    mean: float
    half_width: float = 0.0

    def __post_init__(self) -> None:
        if self.half_width < 0:
            raise DomainError(f"half_width must be >= 0, got {self.half_width}")
        if self.mean - self.half_width < 0:
            raise DomainError(
                f"range lower bound is negative: mean {self.mean}, half_width {self.half_width}"
            )

    @classmethod
    def parse(cls, text: str) -> "UniformParam":
        """Parse 'mean' or 'mean,half_width'."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) not in (1, 2):
            raise DomainError(f"expected 'mean' or 'mean,half_width', got {text!r}")
        try:
            numbers = [float(p) for p in parts]
        except ValueError:
            raise DomainError(f"expected 'mean' or 'mean,half_width', got {text!r}") from None
        return cls(numbers[0], numbers[1] if len(numbers) == 2 else 0.0)

    @property
    def low(self) -> float:
        return self.mean - self.half_width

    @property
    def high(self) -> float:
        return self.mean + self.half_width

    @property
    def is_constant(self) -> bool:
        return self.half_width == 0

    def int_bounds(self, scale: int = 1) -> tuple[int, int]:
        """Inclusive integer sampling bounds after scaling (e.g. scale=100 for cents).

        The scaled bounds must land on integers; sampling is then uniform
        over every representable value in the closed range.
        """
        lo = self.low * scale
        hi = self.high * scale
        if lo != int(lo) or hi != int(hi):
            raise DomainError(
                f"range [{self.low}, {self.high}] does not scale to integers (x{scale})"
            )
        return int(lo), int(hi)


@dataclass(frozen=True)
class BidPair:
    """Storage and processing bid for one node kind."""

    storage: Money
    processing: Money


@dataclass(frozen=True)
class Executable:
    """A deployable function binary competing for node storage.

    Bids may be overridden per node kind; absent an override the scalar
    defaults apply everywhere.
    """

    id: int
    size: int
    storage_bid: Money
    processing_bid: Money
    per_kind_overrides: Mapping[NodeKind, BidPair] | None = None

    def __post_init__(self) -> None:
        if self.size <= 0:
            raise DomainError(f"executable size must be > 0, got {self.size}")

    def storage_bid_for(self, kind: NodeKind) -> Money:
        """Effective storage bid at a node of the given kind."""
        if self.per_kind_overrides and kind in self.per_kind_overrides:
            return self.per_kind_overrides[kind].storage
        return self.storage_bid

    def processing_bid_for(self, kind: NodeKind) -> Money:
        """Effective processing bid at a node of the given kind."""
        if self.per_kind_overrides and kind in self.per_kind_overrides:
            return self.per_kind_overrides[kind].processing
        return self.processing_bid


@dataclass(frozen=True)
class Request:
    """One invocation of an executable, generated at an edge node."""

    id: int
    seq: int
    executable_id: int
    origin_node: int
    arrival_time: int
    duration: int
    processing_bid: Money
    hops: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.arrival_time < 0:
            raise DomainError(f"arrival_time must be >= 0, got {self.arrival_time}")
        if self.duration <= 0:
            raise DomainError(f"duration must be > 0, got {self.duration}")
        hops = self.hops or (self.origin_node,)
        if hops[0] != self.origin_node:
            raise DomainError(f"hops must begin at origin node {self.origin_node}, got {hops}")
        object.__setattr__(self, "hops", hops)


@dataclass(frozen=True)
class NodeSpec:
    """Static description of one compute node.

    Cloud nodes have unbounded capacities (None) and no uplink; every
    other node has finite capacities and an uplink toward the cloud.
    """

    id: int
    kind: NodeKind
    storage_capacity: int | None
    processing_capacity: int | None
    uplink: int | None
    uplink_latency: UniformParam | None = None

    def __post_init__(self) -> None:
        if self.kind is NodeKind.CLOUD:
            if self.uplink is not None:
                raise DomainError(f"cloud node {self.id} cannot have an uplink")
            if self.storage_capacity is not None or self.processing_capacity is not None:
                raise DomainError(f"cloud node {self.id} capacities must be unbounded (None)")
        else:
            if self.uplink is None:
                raise DomainError(f"{self.kind} node {self.id} needs an uplink")
            if self.uplink_latency is None:
                raise DomainError(f"{self.kind} node {self.id} needs an uplink latency")
            if self.storage_capacity is None or self.storage_capacity < 1:
                raise DomainError(f"node {self.id} storage_capacity must be >= 1")
            if self.processing_capacity is None or self.processing_capacity < 1:
                raise DomainError(f"node {self.id} processing_capacity must be >= 1")

    @property
    def is_cloud(self) -> bool:
        return self.kind is NodeKind.CLOUD


class TopologyViolation(enum.Enum):
    """First structural problem found while validating a topology."""

    MISSING_CLOUD = "MissingCloud"
    MULTIPLE_CLOUDS = "MultipleClouds"
    CYCLIC_UPLINK = "CyclicUplink"
    ORPHAN_NODE = "OrphanNode"
    MISSING_EDGE = "MissingEdge"
    MISSING_INTERMEDIARY = "MissingIntermediary"


class TopologyError(DomainError):
    """Raised by validate_topology; carries the violated invariant."""

    def __init__(self, violation: TopologyViolation, detail: str):
        super().__init__(f"{violation.value}: {detail}")
        self.violation = violation


@dataclass(frozen=True)
class Topology:
    """A set of nodes whose uplinks form a forest rooted at the cloud."""

    nodes: tuple[NodeSpec, ...]

    def __post_init__(self) -> None:
        seen = set()
        for spec in self.nodes:
            if spec.id in seen:
                raise DomainError(f"duplicate node id {spec.id}")
            seen.add(spec.id)
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda s: s.id)))

    def node(self, node_id: int) -> NodeSpec:
        for spec in self.nodes:
            if spec.id == node_id:
                return spec
        raise DomainError(f"no node with id {node_id}")

    def by_kind(self, kind: NodeKind) -> tuple[NodeSpec, ...]:
        return tuple(s for s in self.nodes if s.kind is kind)

    @property
    def cloud(self) -> NodeSpec:
        clouds = self.by_kind(NodeKind.CLOUD)
        if len(clouds) != 1:
            raise DomainError(f"expected exactly one cloud node, found {len(clouds)}")
        return clouds[0]

    def path_to_cloud(self, node_id: int) -> tuple[int, ...]:
        """Node ids from node_id (inclusive) to the cloud, following uplinks."""
        path = [node_id]
        spec = self.node(node_id)
        while spec.uplink is not None:
            if spec.uplink in path:
                raise TopologyError(TopologyViolation.CYCLIC_UPLINK, f"at node {spec.id}")
            path.append(spec.uplink)
            spec = self.node(spec.uplink)
        return tuple(path)


def validate_topology(topology: Topology) -> None:
    """Check all structural invariants; raise TopologyError on the first violation."""
    clouds = topology.by_kind(NodeKind.CLOUD)
    if not clouds:
        raise TopologyError(TopologyViolation.MISSING_CLOUD, "no cloud node")
    if len(clouds) > 1:
        ids = sorted(s.id for s in clouds)
        raise TopologyError(TopologyViolation.MULTIPLE_CLOUDS, f"cloud nodes {ids}")
    known = {s.id for s in topology.nodes}
    for spec in topology.nodes:
        if spec.uplink is not None and spec.uplink not in known:
            raise TopologyError(
                TopologyViolation.ORPHAN_NODE,
                f"node {spec.id} uplinks to unknown node {spec.uplink}",
            )
    for spec in topology.nodes:
        seen = {spec.id}
        cursor = spec
        while cursor.uplink is not None:
            if cursor.uplink in seen:
                raise TopologyError(TopologyViolation.CYCLIC_UPLINK, f"starting at node {spec.id}")
            seen.add(cursor.uplink)
            cursor = topology.node(cursor.uplink)
        if not cursor.is_cloud:
            # unreachable while non-cloud nodes require an uplink, kept as a guard
            raise TopologyError(
                TopologyViolation.ORPHAN_NODE, f"node {spec.id} chain ends off-cloud"
            )
    if not topology.by_kind(NodeKind.EDGE):
        raise TopologyError(TopologyViolation.MISSING_EDGE, "no edge node")
    if not topology.by_kind(NodeKind.INTERMEDIARY):
        raise TopologyError(TopologyViolation.MISSING_INTERMEDIARY, "no intermediary node")
