"""Simulation orchestration: deploy, tick loop, metrics.

The tick loop has two interchangeable backends: a compiled kernel
(fogbid._kernel, built from Cython) and a pure Python reference
implementation. Both consume the same pre-drawn workload arrays and
produce bit-identical outputs; the kernel is just fast. Selection is
automatic, overridable per call or via the FOGBID_BACKEND environment
variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..domain import Executable, Money, NodeKind, NodeSpec
from ..placement import EvictionPolicy, NodeState, accrue_storage_revenue, offer_executable
from .config import SimulationConfig
from . import _loop_py
from .results import NodeReport, RequestOutcome, SimulationResult, nearest_rank
from .workload import WorkloadArrays, generate_arrays, materialize_requests

try:
    from .. import _kernel
except ImportError:  # extension not built; pure backend still works
    _kernel = None

PURE = "pure"
COMPILED = "compiled"

_KIND_CODE = {NodeKind.EDGE: 0, NodeKind.INTERMEDIARY: 1, NodeKind.CLOUD: 2}
_CODE_KIND = {code: kind for kind, code in _KIND_CODE.items()}


def available_backends() -> tuple[str, ...]:
    return (COMPILED, PURE) if _kernel is not None else (PURE,)


def resolve_backend(name: str | None = None) -> str:
    """Pick a backend: explicit argument, else $FOGBID_BACKEND, else fastest available."""
    chosen = name or os.environ.get("FOGBID_BACKEND") or available_backends()[0]
    if chosen not in (PURE, COMPILED):
        raise ValueError(f"unknown backend {chosen!r}; expected 'pure' or 'compiled'")
    if chosen == COMPILED and _kernel is None:
        raise ValueError("compiled backend requested but the extension is not built")
    return chosen


def deploy_phase(
    states: Iterable[NodeState],
    executables: Sequence[Executable],
    policy: EvictionPolicy,
) -> dict[int, tuple[int, ...]]:
    """Offer every executable to every node at t=0.

    Executables are offered in ascending id order, each to all nodes
    (ascending node id) before the next one. Returns the surviving
    placement per node once all offers are done.
    """
    ordered_states = sorted(states, key=lambda s: s.spec.id)
    for executable in sorted(executables, key=lambda e: e.id):
        for state in ordered_states:
            offer_executable(state, executable, now=0, policy=policy)
    return {s.spec.id: tuple(sorted(s.stored)) for s in ordered_states}


@dataclass
class RawRun:
    """Array-level output of one simulation, before report assembly."""

    config: SimulationConfig
    backend: str
    executables: list[Executable]
    arrays: WorkloadArrays
    nodes: list[NodeSpec]
    states: list[NodeState]
    deployment: dict[int, tuple[int, ...]]
    served_idx: np.ndarray
    payment_cents: np.ndarray
    latency: np.ndarray
    hops: np.ndarray
    overflow: np.ndarray
    node_execs: np.ndarray
    node_rev_cents: np.ndarray


def _topology_arrays(cfg: SimulationConfig) -> tuple[np.ndarray, ...]:
    nodes = list(cfg.topology.nodes)
    index_of = {spec.id: i for i, spec in enumerate(nodes)}
    kinds = np.array([_KIND_CODE[s.kind] for s in nodes], dtype=np.int8)
    slots = np.array(
        [-1 if s.processing_capacity is None else s.processing_capacity for s in nodes],
        dtype=np.int64,
    )
    uplink = np.array(
        [-1 if s.uplink is None else index_of[s.uplink] for s in nodes], dtype=np.int64
    )
    depth = np.array(
        [len(cfg.topology.path_to_cloud(s.id)) - 1 for s in nodes], dtype=np.int64
    )
    order = np.array(
        sorted(range(len(nodes)), key=lambda i: (-depth[i], nodes[i].id)), dtype=np.int64
    )
    return kinds, slots, uplink, order


def _tick_budget(cfg: SimulationConfig) -> tuple[int, int]:
    """Total ticks to simulate and the delegation ring width."""
    chain_extra = 0
    for spec in cfg.topology.nodes:
        total = 0
        for node_id in cfg.topology.path_to_cloud(spec.id)[:-1]:
            param = cfg.topology.node(node_id).uplink_latency
            assert param is not None
            _, hi = param.int_bounds()
            total += -(-hi // cfg.tick_ms)
        chain_extra = max(chain_extra, total)
    ring_width = chain_extra + 2
    n_ticks = cfg.duration_ms // cfg.tick_ms + chain_extra + 2
    return n_ticks, ring_width


def simulate_raw(cfg: SimulationConfig, backend: str | None = None) -> RawRun:
    """Run one simulation and return its raw per-request arrays."""
    cfg.validate()
    chosen = resolve_backend(backend)
    executables, arrays = generate_arrays(cfg)
    nodes = list(cfg.topology.nodes)
    states = [NodeState(spec) for spec in nodes]
    deployment = deploy_phase(states, executables, cfg.eviction_policy)

    kinds, slots, uplink, order = _topology_arrays(cfg)
    n_ticks, ring_width = _tick_budget(cfg)
    m = len(arrays)
    if m and int(arrays.bid_cents.max()) * (m + 1) >= 2**62:
        raise RuntimeError("bid magnitude too large for the packed sort key")

    second_price = int(cfg.payment_rule.value == "second")
    if chosen == COMPILED:
        stored = np.zeros((len(nodes), cfg.executable_count), dtype=np.uint8)
        for i, state in enumerate(states):
            for executable_id in state.stored:
                stored[i, executable_id] = 1
        out = _kernel.run_loop(
            kinds,
            slots,
            uplink,
            order,
            stored,
            second_price,
            cfg.duration_ms,
            cfg.tick_ms,
            n_ticks,
            ring_width,
            arrays.arrival,
            arrays.duration,
            arrays.bid_cents,
            arrays.exec_idx,
            arrays.origin_idx,
            arrays.hop_latency,
            arrays.hop_offset,
        )
    else:
        requests = materialize_requests(arrays, cfg.topology)
        out = _loop_py.run_loop(
            kinds,
            uplink,
            order,
            states,
            requests,
            cfg.payment_rule,
            cfg.duration_ms,
            cfg.tick_ms,
            n_ticks,
            arrays,
        )
    served_idx, payment_cents, latency, hops, overflow, node_execs, node_rev = out
    if m and not (served_idx >= 0).all():
        lost = int((served_idx < 0).sum())
        raise RuntimeError(f"conservation violated: {lost} requests never served")

    # the kernel (and the pure loop's cloud fast path) tally revenue in
    # arrays only; mirror the totals back so node state agrees either way
    for i, state in enumerate(states):
        state.processing_revenue = Money(int(node_rev[i]))
        accrue_storage_revenue(state, 0, cfg.duration_ms)

    return RawRun(
        config=cfg,
        backend=chosen,
        executables=executables,
        arrays=arrays,
        nodes=nodes,
        states=states,
        deployment=deployment,
        served_idx=served_idx,
        payment_cents=payment_cents,
        latency=latency,
        hops=hops,
        overflow=overflow,
        node_execs=node_execs,
        node_rev_cents=node_rev,
    )


def summarize(raw: RawRun, include_outcomes: bool = True) -> SimulationResult:
    """Assemble the per-node and global reports from raw arrays."""
    m = len(raw.arrays)
    kinds = np.array([_KIND_CODE[s.kind] for s in raw.nodes], dtype=np.int64)
    if m:
        kind_counts = np.bincount(kinds[raw.served_idx], minlength=3)
        sorted_latency = np.sort(raw.latency)
        avg_latency = float(raw.latency.mean())
    else:
        kind_counts = np.zeros(3, dtype=np.int64)
        sorted_latency = raw.latency
        avg_latency = 0.0
    served_per_kind = {_CODE_KIND[c]: int(kind_counts[c]) for c in range(3)}

    per_node: dict[int, NodeReport] = {}
    for i, spec in enumerate(raw.nodes):
        executions = int(raw.node_execs[i])
        revenue_cents = int(raw.node_rev_cents[i])
        state = raw.states[i]
        stored_ids = tuple(sorted(state.stored))
        stored_bids = [
            entry.executable.storage_bid_for(spec.kind).cents
            for entry in state.stored.values()
        ]
        per_node[spec.id] = NodeReport(
            kind=spec.kind,
            storage_revenue=state.storage_revenue,
            processing_revenue=Money(revenue_cents),
            executions_served=executions,
            avg_execution_price=(revenue_cents / executions / 100.0) if executions else 0.0,
            stored_executables_at_end=stored_ids,
            avg_storage_bid_of_stored=(
                sum(stored_bids) / len(stored_bids) / 100.0 if stored_bids else 0.0
            ),
        )

    outcomes: tuple[RequestOutcome, ...] = ()
    if include_outcomes:
        outcomes = tuple(
            RequestOutcome(
                request_id=int(raw.arrays.request_id[r]),
                served_at=raw.nodes[int(raw.served_idx[r])].kind,
                serving_node=raw.nodes[int(raw.served_idx[r])].id,
                payment=Money(int(raw.payment_cents[r])),
                total_latency_ms=int(raw.latency[r]),
                hop_count=int(raw.hops[r]),
                overflowed_simulation_end=bool(raw.overflow[r]),
            )
            for r in range(m)
        )

    return SimulationResult(
        config=raw.config,
        per_node=per_node,
        served_per_kind=served_per_kind,
        avg_latency_ms=avg_latency,
        p50_latency_ms=nearest_rank(sorted_latency, 50),
        p95_latency_ms=nearest_rank(sorted_latency, 95),
        outcomes=outcomes,
    )


def run(cfg: SimulationConfig, backend: str | None = None) -> SimulationResult:
    """Run one full simulation and return its complete result."""
    return summarize(simulate_raw(cfg, backend), include_outcomes=True)
