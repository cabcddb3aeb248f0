"""Node-local placement decisions.

Each node independently runs two mechanisms: a storage auction that may
evict lower-bidding executables to admit a higher-bidding one, and a
per-tick processing auction that schedules the highest-bidding requests
into free parallel slots and rejects the rest.

Storage revenue accrues in thousandths of a cent (bid cents x elapsed
ms) so totals stay exact; the Money view floors to whole cents.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .auction import Bid, PaymentRule, allocate
from .domain import DomainError, Executable, Money, NodeKind, NodeSpec, Request, ZERO


class EvictionPolicy(enum.Enum):
    """Ordering used to pick eviction victims in the storage auction."""

    ABSOLUTE_BID = "absolute"
    BID_PER_SIZE = "per-size"

    def __str__(self) -> str:
        return self.value


class RejectReason(enum.Enum):
    """Why a node refused to schedule a request."""

    NO_EXECUTABLE = "no_executable"
    NO_CAPACITY = "no_capacity"


@dataclass(frozen=True)
class StorageDecision:
    """Result of offering one executable to one node."""

    accepted: bool
    evicted: tuple[int, ...] = ()
    too_large: bool = False


@dataclass
class _StoredEntry:
    executable: Executable
    stored_since: int


@dataclass
class _BillingSpan:
    bid_cents: int
    start: int
    end: int | None = None  # None while still stored


class NodeState:
    """Mutable runtime state of one node; owned by a single simulation."""

    def __init__(self, spec: NodeSpec):
        self.spec = spec
        self.stored: dict[int, _StoredEntry] = {}
        self.in_flight: set[tuple[int, int]] = set()
        self.processing_revenue: Money = ZERO
        self._spans: dict[int, list[_BillingSpan]] = {}
        self._accrued_thousandths = 0

    @property
    def storage_revenue(self) -> Money:
        return Money(self._accrued_thousandths // 1000)

    @property
    def used_storage(self) -> int:
        return sum(entry.executable.size for entry in self.stored.values())

    @property
    def free_slots(self) -> int | None:
        """Free parallel slots; None means unbounded (cloud)."""
        if self.spec.processing_capacity is None:
            return None
        return self.spec.processing_capacity - len(self.in_flight)

    def _store(self, executable: Executable, now: int) -> None:
        self.stored[executable.id] = _StoredEntry(executable, now)
        bid = executable.storage_bid_for(self.spec.kind)
        self._spans.setdefault(executable.id, []).append(_BillingSpan(bid.cents, now))

    def _evict(self, executable_id: int, now: int) -> None:
        del self.stored[executable_id]
        self._spans[executable_id][-1].end = now


def _policy_key(executable: Executable, kind: NodeKind, policy: EvictionPolicy) -> Fraction:
    bid = executable.storage_bid_for(kind)
    if policy is EvictionPolicy.BID_PER_SIZE:
        return Fraction(bid.cents, executable.size)
    return Fraction(bid.cents)


def offer_executable(
    state: NodeState, executable: Executable, now: int, policy: EvictionPolicy
) -> StorageDecision:
    """Run the storage auction for one incoming executable.

    Cloud nodes accept everything. Elsewhere the executable is admitted
    if it fits, possibly after evicting stored executables whose policy
    key is strictly lower than its own, cheapest first. If even that
    would not free enough room, nothing is evicted and the offer is
    rejected; an executable larger than the whole store is reported as
    too large.
    """
    if executable.id in state.stored:
        raise DomainError(f"executable {executable.id} already stored at node {state.spec.id}")
    if state.spec.is_cloud:
        state._store(executable, now)
        return StorageDecision(accepted=True)
    capacity = state.spec.storage_capacity
    assert capacity is not None
    if executable.size > capacity:
        return StorageDecision(accepted=False, too_large=True)
    free = capacity - state.used_storage
    if free >= executable.size:
        state._store(executable, now)
        return StorageDecision(accepted=True)
    own_key = _policy_key(executable, state.spec.kind, policy)
    candidates = sorted(
        (
            entry.executable
            for entry in state.stored.values()
            if _policy_key(entry.executable, state.spec.kind, policy) < own_key
        ),
        key=lambda e: (_policy_key(e, state.spec.kind, policy), e.id),
    )
    victims: list[int] = []
    for candidate in candidates:
        if free >= executable.size:
            break
        victims.append(candidate.id)
        free += candidate.size
    if free < executable.size:
        return StorageDecision(accepted=False)
    for victim in victims:
        state._evict(victim, now)
    state._store(executable, now)
    return StorageDecision(accepted=True, evicted=tuple(victims))


def offer_requests(
    state: NodeState, batch: Sequence[Request], now: int, rule: PaymentRule
) -> tuple[list[tuple[Request, Money]], list[tuple[Request, RejectReason]]]:
    """Run the processing auction for one tick's batch of requests.

    Four steps: reject requests whose executable is not stored, sort the
    rest by bid (ties first-come-first-served), schedule into free slots
    at auction prices, reject the remainder for lack of capacity. Cloud
    nodes schedule everything.
    """
    if state.spec.is_cloud:
        scheduled = []
        for request in batch:
            payment = request.processing_bid if rule is PaymentRule.FIRST_PRICE else ZERO
            _schedule(state, request, now, payment)
            scheduled.append((request, payment))
        return scheduled, []

    rejected = [
        (r, RejectReason.NO_EXECUTABLE) for r in batch if r.executable_id not in state.stored
    ]
    storable = [r for r in batch if r.executable_id in state.stored]
    free = state.free_slots
    assert free is not None
    by_id = {r.id: r for r in storable}
    bids = [Bid(r.id, r.processing_bid, (r.seq, r.id)) for r in storable]
    outcome = allocate(bids, free, rule)
    scheduled = []
    for bidder_id, payment in outcome.winners:
        request = by_id[bidder_id]
        _schedule(state, request, now, payment)
        scheduled.append((request, payment))
    rejected.extend((by_id[bidder_id], RejectReason.NO_CAPACITY) for bidder_id in outcome.losers)
    return scheduled, rejected


def _schedule(state: NodeState, request: Request, now: int, payment: Money) -> None:
    state.in_flight.add((request.id, now + request.duration))
    state.processing_revenue = state.processing_revenue + payment


def release_finished(state: NodeState, now: int) -> int:
    """Free every slot whose request finished at or before `now`."""
    done = {entry for entry in state.in_flight if entry[1] <= now}
    state.in_flight -= done
    return len(done)


def accrue_storage_revenue(state: NodeState, start: int, end: int) -> Money:
    """Bill storage for [start, end) and return the newly recognized amount.

    Each executable is billed bid x overlap of the interval with its
    stored span, so one evicted mid-interval is charged only up to its
    eviction instant. Callers bill disjoint intervals (the engine bills
    each tick once, or one run-length interval when nothing changes).
    """
    if start > end:
        raise DomainError(f"accrual interval is reversed: [{start}, {end}]")
    before = state._accrued_thousandths // 1000
    for spans in state._spans.values():
        for span in spans:
            stop = end if span.end is None else min(end, span.end)
            overlap = stop - max(start, span.start)
            if overlap > 0:
                state._accrued_thousandths += span.bid_cents * overlap
    return Money(state._accrued_thousandths // 1000 - before)
