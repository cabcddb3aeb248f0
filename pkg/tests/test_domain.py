"""Domain type construction, validation, and exactness properties."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fogbid.domain import (
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


def chain(edge_latency=UniformParam(20, 10), mid_latency=UniformParam(40, 20)):
    return Topology(
        (
            NodeSpec(0, NodeKind.EDGE, 100, 5, uplink=1, uplink_latency=edge_latency),
            NodeSpec(1, NodeKind.INTERMEDIARY, 500, 20, uplink=2, uplink_latency=mid_latency),
            NodeSpec(2, NodeKind.CLOUD, None, None, uplink=None),
        )
    )


class TestMoney:
    def test_parse_and_str(self):
        assert Money.parse("100.00") == Money(10000)
        assert Money.parse("100") == Money(10000)
        assert Money.parse("100.5") == Money(10050)
        assert Money.parse("0.07") == Money(7)
        assert str(Money(10050)) == "100.50"
        assert str(Money(7)) == "0.07"

    @pytest.mark.parametrize("bad", ["-1", "1.234", "abc", "1.2.3", ""])
    def test_parse_rejects(self, bad):
        with pytest.raises(DomainError):
            Money.parse(bad)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            Money(-1)
        with pytest.raises(DomainError):
            Money(5) - Money(6)

    def test_arithmetic(self):
        assert Money(150) + Money(50) == Money(200)
        assert Money(150) - Money(50) == Money(100)
        assert Money(150) * 3 == Money(450)
        assert 3 * Money(150) == Money(450)
        assert sum([Money(1), Money(2), Money(3)]) == Money(6)
        assert Money(100) < Money(101)

    @given(st.lists(st.integers(min_value=0, max_value=10**9), max_size=200), st.randoms())
    def test_sum_is_permutation_invariant(self, cents, rnd):
        amounts = [Money(c) for c in cents]
        shuffled = list(amounts)
        rnd.shuffle(shuffled)
        assert sum(amounts, Money(0)) == sum(shuffled, Money(0))


class TestUniformParam:
    def test_bounds(self):
        p = UniformParam(30, 15)
        assert (p.low, p.high) == (15, 45)
        assert not p.is_constant
        assert UniformParam(30).is_constant

    def test_negative_low_rejected(self):
        with pytest.raises(DomainError):
            UniformParam(30, 45)
        with pytest.raises(DomainError):
            UniformParam(10, -1)

    def test_parse(self):
        assert UniformParam.parse("30,15") == UniformParam(30, 15)
        assert UniformParam.parse("30") == UniformParam(30, 0)
        with pytest.raises(DomainError):
            UniformParam.parse("1,2,3")
        with pytest.raises(DomainError):
            UniformParam.parse("abc")

    def test_int_bounds_scaling(self):
        assert UniformParam(100, 50).int_bounds(scale=100) == (5000, 15000)
        with pytest.raises(DomainError):
            UniformParam(0.105, 0).int_bounds(scale=100)


class TestExecutable:
    def test_size_must_be_positive(self):
        with pytest.raises(DomainError):
            Executable(1, 0, Money(100), Money(100))

    def test_scalar_bids_apply_everywhere(self):
        e = Executable(1, 10, Money(6000), Money(9000))
        for kind in NodeKind:
            assert e.storage_bid_for(kind) == Money(6000)
            assert e.processing_bid_for(kind) == Money(9000)

    @given(
        st.sampled_from(list(NodeKind)),
        st.integers(min_value=0, max_value=10**6),
        st.integers(min_value=0, max_value=10**6),
    )
    def test_override_wins_when_present(self, kind, storage_cents, processing_cents):
        override = BidPair(Money(storage_cents), Money(processing_cents))
        e = Executable(1, 10, Money(1), Money(2), per_kind_overrides={kind: override})
        assert e.storage_bid_for(kind) == override.storage
        assert e.processing_bid_for(kind) == override.processing
        for other in NodeKind:
            if other is not kind:
                assert e.storage_bid_for(other) == Money(1)
                assert e.processing_bid_for(other) == Money(2)


class TestRequest:
    def test_hops_default_to_origin(self):
        r = Request(1, 0, 2, origin_node=7, arrival_time=0, duration=30, processing_bid=Money(1))
        assert r.hops == (7,)

    def test_invalid_values_rejected(self):
        with pytest.raises(DomainError):
            Request(1, 0, 2, 7, arrival_time=-1, duration=30, processing_bid=Money(1))
        with pytest.raises(DomainError):
            Request(1, 0, 2, 7, arrival_time=0, duration=0, processing_bid=Money(1))
        with pytest.raises(DomainError):
            Request(1, 0, 2, 7, 0, 30, Money(1), hops=(8, 9))


class TestNodeSpec:
    def test_cloud_shape(self):
        with pytest.raises(DomainError):
            NodeSpec(0, NodeKind.CLOUD, 100, None, uplink=None)
        with pytest.raises(DomainError):
            NodeSpec(0, NodeKind.CLOUD, None, None, uplink=1)

    def test_non_cloud_needs_capacity_and_uplink(self):
        with pytest.raises(DomainError):
            NodeSpec(0, NodeKind.EDGE, 100, 5, uplink=None)
        with pytest.raises(DomainError):
            NodeSpec(0, NodeKind.EDGE, 0, 5, uplink=1, uplink_latency=UniformParam(1))
        with pytest.raises(DomainError):
            NodeSpec(0, NodeKind.EDGE, 100, 0, uplink=1, uplink_latency=UniformParam(1))


class TestTopology:
    def test_standard_chain_is_valid(self):
        validate_topology(chain())

    def test_missing_cloud(self):
        t = Topology(
            (
                NodeSpec(0, NodeKind.EDGE, 100, 5, uplink=1, uplink_latency=UniformParam(1)),
                NodeSpec(1, NodeKind.INTERMEDIARY, 500, 20, uplink=0, uplink_latency=UniformParam(1)),
            )
        )
        with pytest.raises(TopologyError) as err:
            validate_topology(t)
        assert err.value.violation is TopologyViolation.MISSING_CLOUD
        assert str(err.value).startswith("MissingCloud:")

    def test_multiple_clouds(self):
        t = Topology(
            chain().nodes + (NodeSpec(3, NodeKind.CLOUD, None, None, uplink=None),)
        )
        with pytest.raises(TopologyError) as err:
            validate_topology(t)
        assert err.value.violation is TopologyViolation.MULTIPLE_CLOUDS

    def test_self_uplink_is_cyclic(self):
        t = Topology(
            (
                NodeSpec(0, NodeKind.EDGE, 100, 5, uplink=0, uplink_latency=UniformParam(1)),
                NodeSpec(1, NodeKind.INTERMEDIARY, 500, 20, uplink=2, uplink_latency=UniformParam(1)),
                NodeSpec(2, NodeKind.CLOUD, None, None, uplink=None),
            )
        )
        with pytest.raises(TopologyError) as err:
            validate_topology(t)
        assert err.value.violation is TopologyViolation.CYCLIC_UPLINK

    def test_orphan_uplink(self):
        t = Topology(
            (
                NodeSpec(0, NodeKind.EDGE, 100, 5, uplink=9, uplink_latency=UniformParam(1)),
                NodeSpec(1, NodeKind.INTERMEDIARY, 500, 20, uplink=2, uplink_latency=UniformParam(1)),
                NodeSpec(2, NodeKind.CLOUD, None, None, uplink=None),
            )
        )
        with pytest.raises(TopologyError) as err:
            validate_topology(t)
        assert err.value.violation is TopologyViolation.ORPHAN_NODE

    def test_each_tier_required(self):
        no_edge = Topology(
            (
                NodeSpec(1, NodeKind.INTERMEDIARY, 500, 20, uplink=2, uplink_latency=UniformParam(1)),
                NodeSpec(2, NodeKind.CLOUD, None, None, uplink=None),
            )
        )
        with pytest.raises(TopologyError) as err:
            validate_topology(no_edge)
        assert err.value.violation is TopologyViolation.MISSING_EDGE

        no_mid = Topology(
            (
                NodeSpec(0, NodeKind.EDGE, 100, 5, uplink=2, uplink_latency=UniformParam(1)),
                NodeSpec(2, NodeKind.CLOUD, None, None, uplink=None),
            )
        )
        with pytest.raises(TopologyError) as err:
            validate_topology(no_mid)
        assert err.value.violation is TopologyViolation.MISSING_INTERMEDIARY

    def test_duplicate_ids_rejected(self):
        with pytest.raises(DomainError):
            Topology(
                (
                    NodeSpec(0, NodeKind.EDGE, 100, 5, uplink=1, uplink_latency=UniformParam(1)),
                    NodeSpec(0, NodeKind.CLOUD, None, None, uplink=None),
                )
            )

    def test_path_to_cloud(self):
        assert chain().path_to_cloud(0) == (0, 1, 2)
        assert chain().path_to_cloud(2) == (2,)
