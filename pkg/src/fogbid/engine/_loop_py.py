"""Pure Python simulation loop.

Reference implementation of the tick loop, driving the placement
module's node-local auctions directly. Slower than the compiled kernel
but dependency-free; both backends produce bit-identical outputs.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..auction import PaymentRule
from ..domain import Request
from ..placement import NodeState, offer_requests, release_finished
from .workload import WorkloadArrays


def run_loop(
    kinds: np.ndarray,
    uplink: np.ndarray,
    order: np.ndarray,
    states: Sequence[NodeState],
    requests: Sequence[Request],
    rule: PaymentRule,
    duration_ms: int,
    tick_ms: int,
    n_ticks: int,
    arrays: WorkloadArrays,
) -> tuple[np.ndarray, ...]:
    m = len(requests)
    n = len(kinds)
    served = np.full(m, -1, dtype=np.int64)
    payment = np.zeros(m, dtype=np.int64)
    latency = np.zeros(m, dtype=np.int64)
    hops = np.zeros(m, dtype=np.int64)
    overflow = np.zeros(m, dtype=np.uint8)
    node_execs = np.zeros(n, dtype=np.int64)
    node_rev = np.zeros(n, dtype=np.int64)

    arrival = arrays.arrival
    duration = arrays.duration
    bid = arrays.bid_cents
    origin = arrays.origin_idx
    hop_lat = arrays.hop_latency
    hop_off = arrays.hop_offset
    order_list = [int(x) for x in order]
    second_price = rule is PaymentRule.SECOND_PRICE

    buckets: dict[tuple[int, int], list[int]] = {}

    def delegate(ridx: int, from_node: int, now: int) -> None:
        target = int(uplink[from_node])
        lat = int(hop_lat[hop_off[ridx] + hops[ridx]])
        hops[ridx] += 1
        latency[ridx] += lat
        t2 = (now + lat + tick_ms - 1) // tick_ms
        buckets.setdefault((t2, target), []).append(ridx)

    def serve(ridx: int, node: int, now: int, pay_cents: int) -> None:
        latency[ridx] += duration[ridx]
        served[ridx] = node
        payment[ridx] = pay_cents
        if now + duration[ridx] > duration_ms:
            overflow[ridx] = 1
        node_execs[node] += 1
        node_rev[node] += pay_cents

    ptr = 0
    for tick in range(n_ticks):
        now = tick * tick_ms
        while ptr < m and arrival[ptr] <= now:
            buckets.setdefault((tick, int(origin[ptr])), []).append(ptr)
            ptr += 1
        for node in order_list:
            batch = buckets.pop((tick, node), None)
            if not batch:
                continue
            if kinds[node] == 2:
                for ridx in batch:
                    serve(ridx, node, now, 0 if second_price else int(bid[ridx]))
                continue
            state = states[node]
            release_finished(state, now)
            feasible = []
            for ridx in batch:
                if now + duration[ridx] > duration_ms:
                    delegate(ridx, node, now)  # cannot finish in time
                else:
                    feasible.append(ridx)
            if not feasible:
                continue
            scheduled, rejected = offer_requests(
                state, [requests[i] for i in feasible], now, rule
            )
            for request, pay in scheduled:
                serve(request.seq, node, now, pay.cents)
            for request, _reason in rejected:
                delegate(request.seq, node, now)

    return served, payment, latency, hops, overflow, node_execs, node_rev
