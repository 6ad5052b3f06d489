"""Derived cost bounds and sensitivity metrics, in exact rationals.

Every quantity here is a pure function of summary counters; nothing reads
the trace again.  Fractions are used throughout so that equal-by-math values
are equal bit-for-bit, and callers render decimals only at the output edge.

With m concurrent memory issue slots and miss cost a, the memory portion of
the execution is sandwiched by

    lower   = max(D, ceil(W/m)) * a
    layered = sum_i ceil(W_i/m) * a      (W_i = misses in layer i)
    closed  = ((W - D)/m + D) * a

and the latency sensitivity of a trace is the slope of that closed form in a:

    sensitivity          = (W - D)/m + D
    relative sensitivity = sensitivity / (sensitivity * a0 + C)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .builder import EdagSummary
from .errors import (DepthExceedsWork, InconsistentSummary, MixedParams,
                     TauMismatch, ZeroBaselineCost, ZeroSpan)

LOW_RATIO_THRESHOLD = Fraction(3, 10)
LOW_RATIO_WARNING = (
    "memory work below 0.3 of compute cost; "
    "relative sensitivity is low-confidence")


@dataclass(frozen=True, slots=True)
class ModelParams:
    """Knobs the metrics depend on, kept together so runs are comparable."""

    issue_slots: int = 4
    miss_cost: int = 200
    baseline_cost: int = 50
    clock_hz: float = 1e9

    def __post_init__(self):
        if self.issue_slots < 1:
            raise ValueError(f"issue_slots must be >= 1, got {self.issue_slots}")
        if self.miss_cost < 1:
            raise ValueError(f"miss_cost must be >= 1, got {self.miss_cost}")
        if self.baseline_cost < 0:
            raise ValueError(f"baseline_cost must be >= 0, got {self.baseline_cost}")
        if self.baseline_cost > self.miss_cost:
            raise ValueError("baseline_cost cannot exceed miss_cost")
        if self.clock_hz <= 0:
            raise ValueError(f"clock_hz must be positive, got {self.clock_hz}")


@dataclass(frozen=True, slots=True)
class CostBounds:
    lower: Fraction
    layered_upper: Fraction
    closed_upper: Fraction

    def shifted(self, offset: int) -> "CostBounds":
        return CostBounds(self.lower + offset,
                          self.layered_upper + offset,
                          self.closed_upper + offset)


def _check_counts(work: int, depth: int, layer_counts: dict[int, int] | None):
    if depth > work:
        raise DepthExceedsWork(f"depth {depth} exceeds work {work}")
    if layer_counts is not None:
        total = sum(layer_counts.values())
        if total != work:
            raise InconsistentSummary(
                f"layer counts sum to {total}, expected work {work}")


def memory_cost_bounds(work: int, depth: int, layer_counts: dict[int, int],
                       issue_slots: int, miss_cost: int) -> CostBounds:
    """Sandwich for the memory portion of the schedule, in cycles."""
    _check_counts(work, depth, layer_counts)
    m = issue_slots
    lower = Fraction(max(depth, -(-work // m)) * miss_cost)
    layered = Fraction(sum(-(-wi // m) for wi in layer_counts.values()) * miss_cost)
    closed = (Fraction(work - depth, m) + depth) * miss_cost
    return CostBounds(lower, layered, closed)


def total_cost_bounds(work: int, depth: int, layer_counts: dict[int, int],
                      compute_cost: int, issue_slots: int,
                      miss_cost: int) -> CostBounds:
    """Memory bounds plus the serial non-memory cost C on every side."""
    return memory_cost_bounds(work, depth, layer_counts,
                              issue_slots, miss_cost).shifted(compute_cost)


def latency_sensitivity(work: int, depth: int, issue_slots: int) -> Fraction:
    """Cycles of projected cost per cycle of miss latency: (W-D)/m + D."""
    _check_counts(work, depth, None)
    return Fraction(work - depth, issue_slots) + depth


def relative_sensitivity(sensitivity: Fraction, baseline_cost: int,
                         compute_cost: int) -> Fraction:
    """Sensitivity normalized by projected cost at a baseline miss latency."""
    denom = sensitivity * baseline_cost + compute_cost
    if denom == 0:
        raise ZeroBaselineCost("projected baseline cost is zero")
    return sensitivity / denom


def bandwidth_gbs(bytes_total: int, tinf: int, clock_hz: float) -> float:
    """Theoretical-maximum data rate: all movement inside the critical path.

    GB/s with decimal giga; undefined (ZeroSpan) when the span is empty.
    """
    if tinf <= 0:
        raise ZeroSpan("critical path is empty; bandwidth undefined")
    rate = Fraction(bytes_total) * Fraction(clock_hz) / (Fraction(tinf) * 10**9)
    return float(rate)


def movement_series(summary: EdagSummary, tau: int) -> list[tuple[int, int]]:
    """(time_cycles, bytes-in-flight) rows sampled every tau cycles."""
    if summary.tau != tau or summary.movement_bins is None:
        raise TauMismatch(
            f"summary was built with tau={summary.tau}, requested {tau}")
    return [(i * tau, u) for i, u in enumerate(summary.movement_bins)]


@dataclass(frozen=True, slots=True)
class MetricsReport:
    """Everything the analyzer derives from one summary."""

    memory_bounds: CostBounds
    total_bounds: CostBounds
    sensitivity: Fraction
    relative: Fraction | None
    parallelism: Fraction | None
    bandwidth: float | None
    params: ModelParams
    warnings: tuple[str, ...]


def compute_report(summary: EdagSummary, params: ModelParams) -> MetricsReport:
    w = summary.memory_work
    d = summary.memory_depth
    c = summary.compute_cost
    mem_bounds = memory_cost_bounds(w, d, summary.layer_counts,
                                    params.issue_slots, params.miss_cost)
    warnings: list[str] = []
    sens = latency_sensitivity(w, d, params.issue_slots)
    try:
        rel = relative_sensitivity(sens, params.baseline_cost, c)
    except ZeroBaselineCost:
        rel = None
        warnings.append("relative sensitivity undefined: baseline cost is zero")
    if c > 0 and Fraction(w, c) < LOW_RATIO_THRESHOLD:
        warnings.append(LOW_RATIO_WARNING)
    parallelism = Fraction(summary.t1, summary.tinf) if summary.tinf > 0 else None
    try:
        bw = bandwidth_gbs(summary.bytes_total, summary.tinf, params.clock_hz)
    except ZeroSpan:
        bw = None
        warnings.append("bandwidth undefined: critical path is empty")
    if summary.unknown_records:
        warnings.append(
            f"{summary.unknown_records} record(s) with unsupported mnemonics "
            "decoded permissively")
    if summary.atomic_records:
        warnings.append(
            f"{summary.atomic_records} atomic record(s) decoded as combined "
            "load+store")
    return MetricsReport(
        memory_bounds=mem_bounds,
        total_bounds=mem_bounds.shifted(c),
        sensitivity=sens,
        relative=rel,
        parallelism=parallelism,
        bandwidth=bw,
        params=params,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True, slots=True)
class RankedTrace:
    rank: int
    name: str
    value: Fraction
    warnings: tuple[str, ...]


def rank_traces(reports: list[tuple[str, MetricsReport]],
                metric: str) -> list[RankedTrace]:
    """Order traces by descending metric; ties break on the name.

    metric is 'lambda' (sensitivity) or 'Lambda' (relative sensitivity).
    Reports must share one ModelParams; Lambda rankings carry the
    low-ratio warning on affected traces.
    """
    if metric not in ("lambda", "Lambda"):
        raise ValueError(f"unknown ranking metric {metric!r}")
    if len(reports) < 2:
        raise ValueError("ranking needs at least two traces")
    params = reports[0][1].params
    for name, rep in reports:
        if rep.params != params:
            raise MixedParams(
                f"trace {name!r} was analyzed with different parameters")
    rows = []
    for name, rep in reports:
        if metric == "lambda":
            value = rep.sensitivity
            warnings: tuple[str, ...] = ()
        else:
            if rep.relative is None:
                raise ZeroBaselineCost(
                    f"trace {name!r} has no defined relative sensitivity")
            value = rep.relative
            warnings = tuple(m for m in rep.warnings if m == LOW_RATIO_WARNING)
        rows.append((value, name, warnings))
    rows.sort(key=lambda r: (-r[0], r[1]))
    return [RankedTrace(i + 1, name, value, warns)
            for i, (value, name, warns) in enumerate(rows)]
