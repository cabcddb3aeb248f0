# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation loop.

Mirrors fogbid.engine._loop_py exactly: same event ordering, same
auction arithmetic in integer cents, bit-identical outputs. Requests
live in per-(node, tick) intrusive lists threaded through a ring buffer
sized to the longest possible delegation delay.
"""

import numpy as np

from libc.stdint cimport int8_t, int64_t, uint8_t
from libc.stdlib cimport qsort


cdef int _cmp_desc(const void* a, const void* b) noexcept nogil:
    cdef int64_t x = (<const int64_t*> a)[0]
    cdef int64_t y = (<const int64_t*> b)[0]
    if x > y:
        return -1
    if x < y:
        return 1
    return 0


cdef inline void _heap_push(int64_t[::1] heap, int64_t base, int64_t[::1] hlen,
                            Py_ssize_t node, int64_t value) noexcept nogil:
    cdef int64_t i = hlen[node]
    cdef int64_t parent
    cdef int64_t tmp
    hlen[node] = i + 1
    heap[base + i] = value
    while i > 0:
        parent = (i - 1) >> 1
        if heap[base + parent] <= heap[base + i]:
            break
        tmp = heap[base + parent]
        heap[base + parent] = heap[base + i]
        heap[base + i] = tmp
        i = parent


cdef inline void _heap_pop(int64_t[::1] heap, int64_t base, int64_t[::1] hlen,
                           Py_ssize_t node) noexcept nogil:
    cdef int64_t size = hlen[node] - 1
    cdef int64_t i = 0
    cdef int64_t child, tmp
    hlen[node] = size
    heap[base] = heap[base + size]
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and heap[base + child + 1] < heap[base + child]:
            child += 1
        if heap[base + i] <= heap[base + child]:
            break
        tmp = heap[base + i]
        heap[base + i] = heap[base + child]
        heap[base + child] = tmp
        i = child


def run_loop(
    const int8_t[::1] kinds,
    const int64_t[::1] slots,
    const int64_t[::1] uplink,
    const int64_t[::1] order,
    const uint8_t[:, ::1] stored,
    int second_price,
    int64_t duration_ms,
    int64_t tick_ms,
    int64_t n_ticks,
    int64_t ring_width,
    const int64_t[::1] arrival,
    const int64_t[::1] duration,
    const int64_t[::1] bid,
    const int64_t[::1] exec_idx,
    const int64_t[::1] origin_idx,
    const int64_t[::1] hop_lat,
    const int64_t[::1] hop_off,
):
    cdef Py_ssize_t n = kinds.shape[0]
    cdef Py_ssize_t m = arrival.shape[0]

    served_np = np.full(m, -1, dtype=np.int64)
    payment_np = np.zeros(m, dtype=np.int64)
    latency_np = np.zeros(m, dtype=np.int64)
    hops_np = np.zeros(m, dtype=np.int64)
    overflow_np = np.zeros(m, dtype=np.uint8)
    node_execs_np = np.zeros(n, dtype=np.int64)
    node_rev_np = np.zeros(n, dtype=np.int64)
    ring_np = np.full(n * ring_width, -1, dtype=np.int64)
    nextp_np = np.full(max(m, 1), -1, dtype=np.int64)
    keybuf_np = np.empty(max(m, 1), dtype=np.int64)

    heap_off_np = np.zeros(n + 1, dtype=np.int64)
    cdef Py_ssize_t i
    cdef int64_t total_heap = 0
    for i in range(n):
        if kinds[i] != 2:
            total_heap += slots[i] if slots[i] < m else m
        heap_off_np[i + 1] = total_heap
    heap_np = np.zeros(max(total_heap, 1), dtype=np.int64)
    hlen_np = np.zeros(n, dtype=np.int64)

    cdef int64_t[::1] served = served_np
    cdef int64_t[::1] payment = payment_np
    cdef int64_t[::1] latency = latency_np
    cdef int64_t[::1] hops = hops_np
    cdef uint8_t[::1] overflow = overflow_np
    cdef int64_t[::1] node_execs = node_execs_np
    cdef int64_t[::1] node_rev = node_rev_np
    cdef int64_t[::1] ring = ring_np
    cdef int64_t[::1] nextp = nextp_np
    cdef int64_t[::1] keybuf = keybuf_np
    cdef int64_t[::1] heap_off = heap_off_np
    cdef int64_t[::1] heap = heap_np
    cdef int64_t[::1] hlen = hlen_np

    cdef int64_t M = m + 1
    cdef Py_ssize_t ptr = 0
    cdef int64_t tick, now, t2
    cdef Py_ssize_t oi, node, target, slot, slot2
    cdef int64_t r, nxt, rr
    cdef int64_t base, free_slots, cand_n, k, price, pay, lat, key
    cdef bint sp = second_price != 0

    with nogil:
        for tick in range(n_ticks):
            now = tick * tick_ms
            while ptr < m and arrival[ptr] <= now:
                node = <Py_ssize_t> origin_idx[ptr]
                slot = node * ring_width + (tick % ring_width)
                nextp[ptr] = ring[slot]
                ring[slot] = ptr
                ptr += 1
            for oi in range(n):
                node = <Py_ssize_t> order[oi]
                slot = node * ring_width + (tick % ring_width)
                r = ring[slot]
                if r == -1:
                    continue
                ring[slot] = -1
                if kinds[node] == 2:
                    while r != -1:
                        nxt = nextp[r]
                        pay = 0 if sp else bid[r]
                        latency[r] += duration[r]
                        served[r] = node
                        payment[r] = pay
                        if now + duration[r] > duration_ms:
                            overflow[r] = 1
                        node_execs[node] += 1
                        node_rev[node] += pay
                        r = nxt
                    continue
                base = heap_off[node]
                while hlen[node] > 0 and heap[base] <= now:
                    _heap_pop(heap, base, hlen, node)
                free_slots = slots[node] - hlen[node]
                cand_n = 0
                while r != -1:
                    nxt = nextp[r]
                    if now + duration[r] > duration_ms or stored[node, exec_idx[r]] == 0:
                        # cannot finish in time, or executable not stored: delegate
                        target = <Py_ssize_t> uplink[node]
                        lat = hop_lat[hop_off[r] + hops[r]]
                        hops[r] += 1
                        latency[r] += lat
                        t2 = (now + lat + tick_ms - 1) // tick_ms
                        slot2 = target * ring_width + (t2 % ring_width)
                        nextp[r] = ring[slot2]
                        ring[slot2] = r
                    else:
                        keybuf[cand_n] = bid[r] * M + (m - r)
                        cand_n += 1
                    r = nxt
                if cand_n == 0:
                    continue
                if cand_n > 1:
                    qsort(&keybuf[0], cand_n, sizeof(int64_t), _cmp_desc)
                k = free_slots if free_slots < cand_n else cand_n
                if k < 0:
                    k = 0
                price = 0
                if sp and k < cand_n:
                    price = keybuf[k] // M
                for i in range(cand_n):
                    key = keybuf[i]
                    rr = m - (key % M)
                    if i < k:
                        pay = price if sp else bid[rr]
                        _heap_push(heap, base, hlen, node, now + duration[rr])
                        latency[rr] += duration[rr]
                        served[rr] = node
                        payment[rr] = pay
                        node_execs[node] += 1
                        node_rev[node] += pay
                    else:
                        target = <Py_ssize_t> uplink[node]
                        lat = hop_lat[hop_off[rr] + hops[rr]]
                        hops[rr] += 1
                        latency[rr] += lat
                        t2 = (now + lat + tick_ms - 1) // tick_ms
                        slot2 = target * ring_width + (t2 % ring_width)
                        nextp[rr] = ring[slot2]
                        ring[slot2] = rr
    return (
        served_np,
        payment_np,
        latency_np,
        hops_np,
        overflow_np,
        node_execs_np,
        node_rev_np,
    )
