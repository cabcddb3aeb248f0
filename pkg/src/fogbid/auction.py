"""Capacity-constrained sealed-bid auction rounds.

One round allocates up to `capacity` identical slots among bidders and
prices the winners under a selectable payment rule. Both the storage
and the processing decisions plug into the same pair of rules.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Hashable, Sequence

from .domain import DomainError, Money, ZERO


class PaymentRule(enum.Enum):
    """What winners pay: their own bid, or the highest losing bid."""

    FIRST_PRICE = "first"
    SECOND_PRICE = "second"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Bid:
    """A sealed bid with a deterministic tiebreak key (seq, id)."""

    bidder_id: Hashable
    amount: Money
    tiebreak: tuple[int, int]


@dataclass(frozen=True)
class AuctionOutcome:
    """Winners with their payments, and losers, both in allocation order."""

    winners: tuple[tuple[Hashable, Money], ...]
    losers: tuple[Hashable, ...]


def allocate(bids: Sequence[Bid], capacity: int, rule: PaymentRule) -> AuctionOutcome:
    """Run one sealed-bid round for `capacity` identical slots.

    Winners are the top-capacity bids under descending amount with ties
    broken by ascending (seq, id). FIRST_PRICE winners pay their own
    bids; SECOND_PRICE winners all pay the highest losing bid, or 0
    when nobody loses (there is no reserve price).
    """
    ranked = sorted(bids, key=lambda b: (-b.amount.cents, b.tiebreak))
    cut = max(0, capacity)
    winning, losing = ranked[:cut], ranked[cut:]
    if rule is PaymentRule.FIRST_PRICE:
        winners = tuple((b.bidder_id, b.amount) for b in winning)
    else:
        price = losing[0].amount if losing else ZERO
        winners = tuple((b.bidder_id, price) for b in winning)
    return AuctionOutcome(winners=winners, losers=tuple(b.bidder_id for b in losing))


def brute_force_best_response(
    own_value: Money,
    opponent_bids: Sequence[Money],
    capacity: int,
    rule: PaymentRule,
    grid: Sequence[Money],
) -> Money:
    """Exhaustively find a utility-maximizing bid on a grid (test oracle).

    Utility is (own_value - payment) when winning, else 0. Among
    maximizers, the bid closest to own_value wins, lower on a distance
    tie, so a truthful optimum is always reported as own_value.
    """
    if not grid:
        raise DomainError("grid must be non-empty")
    if own_value not in grid:
        raise DomainError("grid must include own_value")
    opponents = [Bid(("opp", i), amount, (0, i)) for i, amount in enumerate(opponent_bids)]
    own_id = ("self", 0)

    def utility(candidate: Money) -> int:
        outcome = allocate(opponents + [Bid(own_id, candidate, (1, 0))], capacity, rule)
        for bidder, payment in outcome.winners:
            if bidder == own_id:
                return own_value.cents - payment.cents
        return 0

    return max(
        grid,
        key=lambda c: (utility(c), -abs(c.cents - own_value.cents), -c.cents),
    )
