"""Seeded workload generation.

All randomness for one run is drawn here, up front, from a single
seeded generator: executable sizes and bids, per-request arrival times,
durations, bids and targets, and the hop latency of every delegation a
request could ever take. The simulation loop itself is RNG-free, which
keeps the pure and compiled backends bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..domain import Executable, Money, NodeKind, Request, Topology
from .config import SimulationConfig


@dataclass(frozen=True)
class WorkloadArrays:
    """Column-oriented workload, sorted by (arrival_time, creation id).

    Row r describes the request with seq == r; request_id[r] maps back
    to creation order. hop_latency[hop_offset[r]:hop_offset[r+1]] holds
    the pre-drawn latency of each successive delegation along the
    origin's uplink path.
    """

    request_id: np.ndarray
    arrival: np.ndarray
    duration: np.ndarray
    bid_cents: np.ndarray
    exec_idx: np.ndarray
    origin_idx: np.ndarray
    hop_latency: np.ndarray
    hop_offset: np.ndarray

    def __len__(self) -> int:
        return len(self.arrival)


def _node_order(topology: Topology) -> list:
    return list(topology.nodes)


def _sample_executables(cfg: SimulationConfig, rng: np.random.Generator) -> list[Executable]:
    count = cfg.executable_count
    size_lo, size_hi = cfg.executable_size.int_bounds()
    bid_lo, bid_hi = cfg.storage_bid.int_bounds(scale=100)
    sizes = rng.integers(size_lo, size_hi, size=count, endpoint=True)
    bids = rng.integers(bid_lo, bid_hi, size=count, endpoint=True)
    proc_lo, proc_hi = cfg.processing_bid.int_bounds(scale=100)
    mean_bid = Money((proc_lo + proc_hi) // 2)
    return [
        Executable(
            id=i,
            size=max(1, int(sizes[i])),
            storage_bid=Money(int(bids[i])),
            processing_bid=mean_bid,
        )
        for i in range(count)
    ]


def generate_arrays(
    cfg: SimulationConfig, rng: np.random.Generator | None = None
) -> tuple[list[Executable], WorkloadArrays]:
    """Draw the full workload for a run; deterministic in (cfg, seed)."""
    cfg.validate()
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    executables = _sample_executables(cfg, rng)

    nodes = _node_order(cfg.topology)
    index_of = {spec.id: i for i, spec in enumerate(nodes)}
    edges = [spec for spec in nodes if spec.kind is NodeKind.EDGE]
    per_edge = cfg.requests_per_edge
    dur_lo, dur_hi = cfg.processing_latency.int_bounds()
    bid_lo, bid_hi = cfg.processing_bid.int_bounds(scale=100)

    arrivals, durations, bids, exec_idx, origin_idx = [], [], [], [], []
    hop_columns: list[list[np.ndarray]] = []
    for edge in edges:
        arrivals.append(rng.integers(0, cfg.duration_ms, size=per_edge))
        durations.append(rng.integers(dur_lo, dur_hi, size=per_edge, endpoint=True))
        bids.append(rng.integers(bid_lo, bid_hi, size=per_edge, endpoint=True))
        exec_idx.append(rng.integers(0, cfg.executable_count, size=per_edge))
        origin_idx.append(np.full(per_edge, index_of[edge.id], dtype=np.int64))
        path = cfg.topology.path_to_cloud(edge.id)
        columns = []
        for node_id in path[:-1]:
            param = cfg.topology.node(node_id).uplink_latency
            assert param is not None
            lat_lo, lat_hi = param.int_bounds()
            columns.append(rng.integers(lat_lo, lat_hi, size=per_edge, endpoint=True))
        hop_columns.append(columns)

    total = per_edge * len(edges)
    if total == 0:
        empty = np.zeros(0, dtype=np.int64)
        return executables, WorkloadArrays(
            request_id=empty,
            arrival=empty,
            duration=empty,
            bid_cents=empty,
            exec_idx=empty,
            origin_idx=empty,
            hop_latency=empty,
            hop_offset=np.zeros(1, dtype=np.int64),
        )

    arrival = np.concatenate(arrivals).astype(np.int64)
    creation_id = np.arange(total, dtype=np.int64)
    order = np.lexsort((creation_id, arrival))

    hop_counts = np.concatenate(
        [np.full(per_edge, len(cols), dtype=np.int64) for cols in hop_columns]
    )
    # per-creation-id hop latency rows, flattened in sorted order
    hop_rows = [
        np.stack(cols, axis=1).astype(np.int64) if cols else np.zeros((per_edge, 0), np.int64)
        for cols in hop_columns
    ]
    sorted_counts = hop_counts[order]
    hop_offset = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(sorted_counts, out=hop_offset[1:])
    widths = {row.shape[1] for row in hop_rows}
    if len(widths) == 1:
        hop_latency = np.vstack(hop_rows)[order].reshape(-1)
    else:
        hop_latency = np.zeros(int(hop_offset[-1]), dtype=np.int64)
        for rank, cid in enumerate(order):
            edge_pos, row = divmod(int(cid), per_edge)
            start = hop_offset[rank]
            hop_latency[start : start + sorted_counts[rank]] = hop_rows[edge_pos][row]

    return executables, WorkloadArrays(
        request_id=creation_id[order],
        arrival=arrival[order],
        duration=np.concatenate(durations).astype(np.int64)[order],
        bid_cents=np.concatenate(bids).astype(np.int64)[order],
        exec_idx=np.concatenate(exec_idx).astype(np.int64)[order],
        origin_idx=np.concatenate(origin_idx).astype(np.int64)[order],
        hop_latency=hop_latency,
        hop_offset=hop_offset,
    )


def materialize_requests(arrays: WorkloadArrays, topology: Topology) -> list[Request]:
    """Build Request objects from the columns, indexed by seq."""
    nodes = _node_order(topology)
    return [
        Request(
            id=int(arrays.request_id[r]),
            seq=r,
            executable_id=int(arrays.exec_idx[r]),
            origin_node=nodes[int(arrays.origin_idx[r])].id,
            arrival_time=int(arrays.arrival[r]),
            duration=int(arrays.duration[r]),
            processing_bid=Money(int(arrays.bid_cents[r])),
        )
        for r in range(len(arrays))
    ]


def generate_workload(
    cfg: SimulationConfig, rng: np.random.Generator | None = None
) -> tuple[list[Executable], list[Request]]:
    """Generate the run's executables and its requests in seq order."""
    executables, arrays = generate_arrays(cfg, rng)
    return executables, materialize_requests(arrays, cfg.topology)
