"""Sealed-bid round allocation, payments, and truthfulness oracle."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fogbid.auction import Bid, PaymentRule, allocate, brute_force_best_response
from fogbid.domain import DomainError, Money


def bids_of(cents, start_seq=0):
    return [Bid(i, Money(c), (start_seq + i, i)) for i, c in enumerate(cents)]


def money_units(units):
    return [Money.of(u) for u in units]


class TestAllocate:
    def test_first_price_pays_own_bids(self):
        outcome = allocate(bids_of([10000, 8000, 6000]), 2, PaymentRule.FIRST_PRICE)
        assert outcome.winners == ((0, Money(10000)), (1, Money(8000)))
        assert outcome.losers == (2,)

    def test_second_price_single_slot(self):
        outcome = allocate(bids_of([10000, 8000]), 1, PaymentRule.SECOND_PRICE)
        assert outcome.winners == ((0, Money(8000)),)
        assert outcome.losers == (1,)

    def test_empty_bids(self):
        for rule in PaymentRule:
            outcome = allocate([], 3, rule)
            assert outcome.winners == ()
            assert outcome.losers == ()

    def test_tie_resolved_by_earlier_tiebreak(self):
        bids = [Bid("late", Money(5000), (7, 1)), Bid("early", Money(5000), (3, 2))]
        outcome = allocate(bids, 1, PaymentRule.FIRST_PRICE)
        assert outcome.winners == (("early", Money(5000)),)
        assert outcome.losers == ("late",)

    def test_second_price_no_losers_pays_zero(self):
        outcome = allocate(bids_of([10000, 8000]), 5, PaymentRule.SECOND_PRICE)
        assert outcome.winners == ((0, Money(0)), (1, Money(0)))

    def test_uniform_price_all_winners_pay_highest_loser(self):
        outcome = allocate(bids_of([10000, 9000, 8000, 7000]), 2, PaymentRule.SECOND_PRICE)
        assert outcome.winners == ((0, Money(8000)), (1, Money(8000)))

    def test_zero_capacity(self):
        outcome = allocate(bids_of([100]), 0, PaymentRule.FIRST_PRICE)
        assert outcome.winners == ()
        assert outcome.losers == (0,)


amounts = st.lists(st.integers(min_value=0, max_value=200), max_size=12)
capacities = st.integers(min_value=0, max_value=15)


class TestAllocateProperties:
    @given(amounts, capacities)
    def test_partition_and_capacity(self, cents, capacity):
        bids = bids_of(cents)
        for rule in PaymentRule:
            outcome = allocate(bids, capacity, rule)
            winner_ids = [w for w, _ in outcome.winners]
            assert len(winner_ids) <= capacity
            assert set(winner_ids) | set(outcome.losers) == {b.bidder_id for b in bids}
            assert set(winner_ids) & set(outcome.losers) == set()

    @given(amounts, capacities)
    def test_winners_dominate_losers(self, cents, capacity):
        bids = bids_of(cents)
        by_id = {b.bidder_id: b for b in bids}
        outcome = allocate(bids, capacity, PaymentRule.FIRST_PRICE)
        for winner_id, _ in outcome.winners:
            for loser_id in outcome.losers:
                w, l = by_id[winner_id], by_id[loser_id]
                assert (w.amount, l.tiebreak) > (l.amount, w.tiebreak)

    @given(amounts, capacities)
    def test_allocation_is_payment_rule_independent(self, cents, capacity):
        bids = bids_of(cents)
        first = allocate(bids, capacity, PaymentRule.FIRST_PRICE)
        second = allocate(bids, capacity, PaymentRule.SECOND_PRICE)
        assert [w for w, _ in first.winners] == [w for w, _ in second.winners]
        assert first.losers == second.losers

    @given(amounts, capacities, st.integers(min_value=1, max_value=9))
    def test_scaling_preserves_winner_order(self, cents, capacity, factor):
        base = allocate(bids_of(cents), capacity, PaymentRule.FIRST_PRICE)
        scaled = allocate(bids_of([c * factor for c in cents]), capacity, PaymentRule.FIRST_PRICE)
        assert [w for w, _ in base.winners] == [w for w, _ in scaled.winners]

    @given(amounts, capacities)
    def test_payment_bounds(self, cents, capacity):
        bids = bids_of(cents)
        by_id = {b.bidder_id: b for b in bids}
        for rule in PaymentRule:
            for winner_id, payment in allocate(bids, capacity, rule).winners:
                if rule is PaymentRule.FIRST_PRICE:
                    assert payment == by_id[winner_id].amount
                else:
                    assert payment <= by_id[winner_id].amount

    @given(amounts, capacities)
    def test_determinism(self, cents, capacity):
        bids = bids_of(cents)
        assert allocate(bids, capacity, PaymentRule.SECOND_PRICE) == allocate(
            bids, capacity, PaymentRule.SECOND_PRICE
        )


GRID = money_units(range(0, 151, 10))


class TestBruteForceBestResponse:
    def test_truthful_against_lower_opponent(self):
        best = brute_force_best_response(
            Money.of(100), money_units([80]), 1, PaymentRule.SECOND_PRICE, GRID
        )
        assert best == Money.of(100)

    def test_truthful_against_higher_opponent(self):
        best = brute_force_best_response(
            Money.of(100), money_units([120]), 1, PaymentRule.SECOND_PRICE, GRID
        )
        assert best == Money.of(100)

    def test_zero_value_bids_zero(self):
        best = brute_force_best_response(
            Money.of(0), money_units([40, 90]), 1, PaymentRule.SECOND_PRICE, GRID
        )
        assert best == Money.of(0)

    def test_grid_preconditions(self):
        with pytest.raises(DomainError):
            brute_force_best_response(Money.of(5), [], 1, PaymentRule.SECOND_PRICE, GRID)
        with pytest.raises(DomainError):
            brute_force_best_response(Money.of(100), [], 1, PaymentRule.SECOND_PRICE, [])

    @given(
        st.integers(min_value=0, max_value=15),
        st.lists(st.integers(min_value=0, max_value=15), max_size=5),
    )
    def test_second_price_truthfulness_on_grid(self, value_step, opponent_steps):
        grid = money_units(range(0, 151, 10))
        value = Money.of(value_step * 10)
        opponents = money_units([s * 10 for s in opponent_steps])
        best = brute_force_best_response(value, opponents, 1, PaymentRule.SECOND_PRICE, grid)
        # tie resolution prefers the truthful bid, so optimal == truthful
        assert best == value
