"""Canned parameter sweeps and CSV emission.

Two standard experiments: sweep request load with processing capacity
as the bottleneck (exp1), and sweep executable count with storage as
the bottleneck (exp2). Each sweep point runs several independently
seeded repetitions and reports arithmetic-mean metrics.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields as dataclass_fields, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .domain import DomainError, NodeKind
from .engine.config import ConfigInvalid, SimulationConfig, standard_chain
from .engine.core import RawRun, simulate_raw

EXP1_VALUES = tuple(range(100, 2001, 100))
EXP1_VERIFICATION_POINT = 5000
EXP2_VALUES = tuple(range(5, 101, 5))

CSV_COLUMNS = (
    "value",
    "edge_avg_exec_price",
    "interm_avg_exec_price",
    "cloud_avg_exec_price",
    "edge_avg_storage_bid",
    "interm_avg_storage_bid",
    "cloud_avg_storage_bid",
    "avg_latency_ms",
    "edge_share",
    "interm_share",
    "cloud_share",
    "repetitions",
)


@dataclass(frozen=True)
class SweepSpec:
    """A parameter sweep: one base config, one varied field, many values."""

    name: str
    base_config: SimulationConfig
    swept_parameter: str
    values: tuple[float, ...]
    repetitions: int = 5

    def __post_init__(self) -> None:
        if not self.values:
            raise ConfigInvalid("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigInvalid("sweep values must be strictly increasing")
        if self.repetitions < 1:
            raise ConfigInvalid(f"repetitions must be >= 1, got {self.repetitions}")
        known = {f.name for f in dataclass_fields(SimulationConfig)}
        if self.swept_parameter not in known:
            raise ConfigInvalid(f"swept_parameter {self.swept_parameter!r} is not a config field")

    def config_for(self, value: float, repetition: int) -> SimulationConfig:
        """Config for one (value, repetition) cell, distinctly seeded."""
        index = self.values.index(value)
        seed = self.base_config.seed + index * self.repetitions + repetition
        if float(value).is_integer():
            value = int(value)
        return replace(
            self.base_config, **{self.swept_parameter: value, "seed": seed}
        )


@dataclass(frozen=True)
class SweepRow:
    """Mean metrics of one sweep value across its repetitions."""

    value: float
    edge_avg_exec_price: float
    interm_avg_exec_price: float
    cloud_avg_exec_price: float
    edge_avg_storage_bid: float
    interm_avg_storage_bid: float
    cloud_avg_storage_bid: float
    avg_latency_ms: float
    edge_share: float
    interm_share: float
    cloud_share: float
    repetitions: int
    seeds: tuple[int, ...] = ()
    ok: bool = True
    error: str = ""


def exp1_spec(
    overrides: dict[str, Any] | None = None,
    repetitions: int = 5,
    include_verification_point: bool = False,
) -> SweepSpec:
    """Load sweep: processing capacity binds, storage never does.

    Edge and intermediary keep their standard 5 and 20 parallel slots
    (saturating near 166 and 832 req/s respectively at 30 ms mean
    durations); storage is sized far beyond the total executable
    footprint so every node stores everything.
    """
    base = SimulationConfig(
        topology=standard_chain(
            edge_storage_capacity=1_000_000,
            edge_processing_capacity=5,
            intermediary_storage_capacity=1_000_000,
            intermediary_processing_capacity=20,
        ),
        requests_per_second_per_edge=100,
    ).with_overrides(overrides)
    values = EXP1_VALUES + ((EXP1_VERIFICATION_POINT,) if include_verification_point else ())
    return SweepSpec(
        name="exp1",
        base_config=base,
        swept_parameter="requests_per_second_per_edge",
        values=values,
        repetitions=repetitions,
    )


def exp2_spec(
    overrides: dict[str, Any] | None = None,
    repetitions: int = 5,
) -> SweepSpec:
    """Storage sweep: storage capacity binds, processing never does.

    Edge stores 100 units, the intermediary 500, executables average
    size 10; parallel slots are sized far beyond the offered load so no
    request is ever rejected for capacity.
    """
    base = SimulationConfig(
        topology=standard_chain(
            edge_storage_capacity=100,
            edge_processing_capacity=1_000_000,
            intermediary_storage_capacity=500,
            intermediary_processing_capacity=1_000_000,
        ),
        requests_per_second_per_edge=100,
        executable_count=5,
    ).with_overrides(overrides)
    return SweepSpec(
        name="exp2",
        base_config=base,
        swept_parameter="executable_count",
        values=EXP2_VALUES,
        repetitions=repetitions,
    )


@dataclass(frozen=True)
class _RunMetrics:
    exec_price: tuple[float, float, float]
    storage_bid: tuple[float, float, float]
    share: tuple[float, float, float]
    avg_latency_ms: float


def _metrics_of(raw: RawRun) -> _RunMetrics:
    kind_code = {NodeKind.EDGE: 0, NodeKind.INTERMEDIARY: 1, NodeKind.CLOUD: 2}
    kinds = np.array([kind_code[s.kind] for s in raw.nodes], dtype=np.int64)
    execs = np.zeros(3, dtype=np.int64)
    revenue = np.zeros(3, dtype=np.int64)
    np.add.at(execs, kinds, raw.node_execs)
    np.add.at(revenue, kinds, raw.node_rev_cents)
    exec_price = tuple(
        float(revenue[c]) / execs[c] / 100.0 if execs[c] else 0.0 for c in range(3)
    )

    bid_sum = [0, 0, 0]
    bid_count = [0, 0, 0]
    for state in raw.states:
        code = kind_code[state.spec.kind]
        for entry in state.stored.values():
            bid_sum[code] += entry.executable.storage_bid_for(state.spec.kind).cents
            bid_count[code] += 1
    storage_bid = tuple(
        bid_sum[c] / bid_count[c] / 100.0 if bid_count[c] else 0.0 for c in range(3)
    )

    total = len(raw.arrays)
    if total:
        served = np.bincount(kinds[raw.served_idx], minlength=3)
        share = tuple(float(served[c]) / total for c in range(3))
        avg_latency = float(raw.latency.mean())
    else:
        share = (0.0, 0.0, 0.0)
        avg_latency = 0.0
    return _RunMetrics(exec_price, storage_bid, share, avg_latency)


def _run_cell(args: tuple[SweepSpec, float, int]) -> _RunMetrics:
    spec, value, repetition = args
    return _metrics_of(simulate_raw(spec.config_for(value, repetition)))


def run_sweep(spec: SweepSpec, max_workers: int | None = None) -> list[SweepRow]:
    """Run every (value, repetition) cell and aggregate one row per value.

    Rows keep their value order. A failing cell marks its row failed
    (ok=False, error message attached) without aborting the sweep.
    """
    cells = [(spec, value, rep) for value in spec.values for rep in range(spec.repetitions)]
    results: list[_RunMetrics | Exception] = []
    if max_workers is not None and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            futures = [pool.submit(_run_cell, cell) for cell in cells]
            for future in futures:
                results.append(future.exception() or future.result())
    else:
        for cell in cells:
            try:
                results.append(_run_cell(cell))
            except (DomainError, RuntimeError) as exc:
                results.append(exc)

    rows: list[SweepRow] = []
    for i, value in enumerate(spec.values):
        chunk = results[i * spec.repetitions : (i + 1) * spec.repetitions]
        seeds = tuple(
            spec.base_config.seed + i * spec.repetitions + rep
            for rep in range(spec.repetitions)
        )
        failures = [r for r in chunk if isinstance(r, Exception)]
        if failures:
            rows.append(
                SweepRow(
                    value=value,
                    edge_avg_exec_price=0.0,
                    interm_avg_exec_price=0.0,
                    cloud_avg_exec_price=0.0,
                    edge_avg_storage_bid=0.0,
                    interm_avg_storage_bid=0.0,
                    cloud_avg_storage_bid=0.0,
                    avg_latency_ms=0.0,
                    edge_share=0.0,
                    interm_share=0.0,
                    cloud_share=0.0,
                    repetitions=spec.repetitions - len(failures),
                    seeds=seeds,
                    ok=False,
                    error=str(failures[0]),
                )
            )
            continue
        metrics: list[_RunMetrics] = chunk  # type: ignore[assignment]

        def mean(pick) -> float:
            return sum(pick(m) for m in metrics) / len(metrics)

        rows.append(
            SweepRow(
                value=value,
                edge_avg_exec_price=mean(lambda m: m.exec_price[0]),
                interm_avg_exec_price=mean(lambda m: m.exec_price[1]),
                cloud_avg_exec_price=mean(lambda m: m.exec_price[2]),
                edge_avg_storage_bid=mean(lambda m: m.storage_bid[0]),
                interm_avg_storage_bid=mean(lambda m: m.storage_bid[1]),
                cloud_avg_storage_bid=mean(lambda m: m.storage_bid[2]),
                avg_latency_ms=mean(lambda m: m.avg_latency_ms),
                edge_share=mean(lambda m: m.share[0]),
                interm_share=mean(lambda m: m.share[1]),
                cloud_share=mean(lambda m: m.share[2]),
                repetitions=spec.repetitions,
                seeds=seeds,
            )
        )
    return rows


def _format_value(value: float) -> str:
    if float(value) == int(value):
        return str(int(value))
    return f"{value:.6f}"


def csv_path(spec: SweepSpec, out_dir: str | Path) -> Path:
    """Conventional file name: <sweep-name>-<base-seed>.csv inside out_dir."""
    return Path(out_dir) / f"{spec.name}-{spec.base_config.seed}.csv"


def write_csv(rows: Sequence[SweepRow], destination: str | Path) -> None:
    """Write aggregated rows as CSV; failed rows are dropped.

    Raises RuntimeError when nothing is writable (no rows, or all rows
    failed), so callers never produce an empty result file.
    """
    good = [row for row in rows if row.ok]
    if not good:
        raise RuntimeError("no successful sweep rows to write")
    lines = [",".join(CSV_COLUMNS)]
    for row in good:
        lines.append(
            ",".join(
                (
                    _format_value(row.value),
                    f"{row.edge_avg_exec_price:.6f}",
                    f"{row.interm_avg_exec_price:.6f}",
                    f"{row.cloud_avg_exec_price:.6f}",
                    f"{row.edge_avg_storage_bid:.6f}",
                    f"{row.interm_avg_storage_bid:.6f}",
                    f"{row.cloud_avg_storage_bid:.6f}",
                    f"{row.avg_latency_ms:.6f}",
                    f"{row.edge_share:.6f}",
                    f"{row.interm_share:.6f}",
                    f"{row.cloud_share:.6f}",
                    str(row.repetitions),
                )
            )
        )
    Path(destination).write_text("\n".join(lines) + "\n", encoding="ascii")
