"""Cost bounds, sensitivity scores, bandwidth, ranking."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from memdag import (
    CacheConfig,
    DepthExceedsWork,
    InconsistentSummary,
    MixedParams,
    ModelParams,
    TauMismatch,
    ZeroSpan,
    bandwidth_gbs,
    compute_report,
    latency_sensitivity,
    memory_cost_bounds,
    movement_series,
    rank_traces,
    relative_sensitivity,
    total_cost_bounds,
)
from memdag.builder import EdagSummary
from memdag.metrics import LOW_RATIO_WARNING
from conftest import build_text

NO_CACHE = CacheConfig.disabled()


def test_bounds_single_wide_layer():
    b = memory_cost_bounds(4, 1, {1: 4}, issue_slots=4, miss_cost=200)
    assert b.lower == 200
    assert b.layered_upper == 200
    assert b.closed_upper == 350


def test_bounds_ragged_layers():
    # seven misses over layers 3+2+2, two slots, cost 10 per miss
    b = memory_cost_bounds(7, 3, {1: 3, 2: 2, 3: 2}, issue_slots=2, miss_cost=10)
    assert b.lower == Fraction(40)       # ceil(7/2) rounds dominate depth
    assert b.layered_upper == Fraction(40)
    assert b.closed_upper == Fraction(50)


def test_depth_dominated_lower_bound():
    b = memory_cost_bounds(3, 3, {1: 1, 2: 1, 3: 1}, issue_slots=8, miss_cost=5)
    assert b.lower == 15                 # depth beats ceil(3/8)=1


def test_total_bounds_shift_by_compute_cost():
    mem = memory_cost_bounds(4, 1, {1: 4}, 4, 200)
    tot = total_cost_bounds(4, 1, {1: 4}, compute_cost=14,
                            issue_slots=4, miss_cost=200)
    assert tot.lower == mem.lower + 14
    assert tot.layered_upper == mem.layered_upper + 14
    assert tot.closed_upper == mem.closed_upper + 14


def test_inconsistent_inputs_rejected():
    with pytest.raises(DepthExceedsWork):
        memory_cost_bounds(2, 3, {1: 1, 2: 1, 3: 1}, 2, 10)
    with pytest.raises(InconsistentSummary):
        memory_cost_bounds(5, 2, {1: 2, 2: 2}, 2, 10)


def test_sensitivity_closed_form():
    lam = latency_sensitivity(4, 1, 4)
    assert lam == Fraction(7, 4)
    # the two published forms must agree exactly, not approximately
    w, d, m = 4, 1, 4
    assert lam == Fraction(w - d, m) + d
    assert lam == Fraction(w, m) + (1 - Fraction(1, m)) * d


def test_relative_sensitivity_value():
    lam = Fraction(7, 4)
    rel = relative_sensitivity(lam, baseline_cost=50, compute_cost=100)
    assert rel == Fraction(7, 750)


def test_bandwidth_exact_fraction_to_float():
    assert bandwidth_gbs(16, 204, 1e9) == float(Fraction(16, 204))
    assert bandwidth_gbs(64, 200, 2e9) == float(Fraction(64 * 2, 200))
    with pytest.raises(ZeroSpan):
        bandwidth_gbs(64, 0, 1e9)


def test_model_params_validation():
    with pytest.raises(Exception):
        ModelParams(issue_slots=0)
    with pytest.raises(Exception):
        ModelParams(miss_cost=10, baseline_cost=50)
    with pytest.raises(Exception):
        ModelParams(clock_hz=0.0)


def report_for(text, **params):
    summary = build_text(text, NO_CACHE).summary
    return compute_report(summary, ModelParams(**params))


def test_report_on_reduction_loop():
    text = "\n".join([
        "add a3,a0,a1", "mv a0,zero",
        "lw a4,0(a5);0x100", "addi a5,a5,4", "addw a0,a0,a4", "bne a3,a5,-6",
        "lw a4,0(a5);0x104", "addi a5,a5,4", "addw a0,a0,a4", "bne a3,a5,-6",
        "lw a4,0(a5);0x108", "addi a5,a5,4", "addw a0,a0,a4", "bne a3,a5,-6",
        "lw a4,0(a5);0x10c", "addi a5,a5,4", "addw a0,a0,a4", "bne a3,a5,-6",
    ])
    rep = report_for(text, issue_slots=4, miss_cost=200, baseline_cost=50)
    assert rep.sensitivity == Fraction(7, 4)
    assert rep.memory_bounds.lower == 200
    assert LOW_RATIO_WARNING in rep.warnings     # W=4 against C=14
    assert rep.relative == Fraction(Fraction(7, 4),
                                    Fraction(7, 4) * 50 + 14)


def test_report_degenerate_no_memory():
    rep = report_for("addi a0,a0,1\naddi a0,a0,2")
    assert rep.sensitivity == 0
    assert rep.memory_bounds.lower == 0
    assert rep.bandwidth == 0.0
    assert rep.parallelism == Fraction(2, 2)


def test_report_empty_trace_marks_undefined():
    rep = compute_report(EdagSummary(), ModelParams())
    assert rep.parallelism is None
    assert rep.bandwidth is None
    assert any("bandwidth" in w for w in rep.warnings)


def test_report_counts_decode_warnings():
    summary = build_text("frobnicate a0,a1\namoadd.w a0,a1,(a2);0x100",
                         NO_CACHE).summary
    rep = compute_report(summary, ModelParams())
    assert any("unsupported" in w for w in rep.warnings)
    assert any("atomic" in w for w in rep.warnings)


def test_movement_series_requires_matching_tau():
    summary = build_text("lw a0,0(a1);0x100", NO_CACHE, tau=50).summary
    rows = movement_series(summary, 50)
    assert rows[0] == (0, 4)
    assert rows[-1][0] == 200
    with pytest.raises(TauMismatch):
        movement_series(summary, 60)
    with pytest.raises(TauMismatch):
        movement_series(build_text("nop", NO_CACHE).summary, 50)


def _reports(named_texts, **params):
    p = ModelParams(**params)
    return [(name, compute_report(build_text(t, NO_CACHE).summary, p))
            for name, t in named_texts]


def test_rank_orders_descending_with_name_ties():
    chase = "li a0,4096\nld a0,0(a0);0x1000\nld a0,0(a0);0x1040"
    flat = "li a0,4096\nld a1,0(a0);0x1000\nld a2,0(a0);0x1040"
    rows = rank_traces(_reports([("b", chase), ("a", flat), ("c", flat)]),
                       "lambda")
    assert [(r.rank, r.name) for r in rows] == [(1, "b"), (2, "a"), (3, "c")]
    assert rows[0].value > rows[1].value
    assert rows[1].value == rows[2].value


def test_rank_lambda_attaches_low_ratio_warning():
    busy = "\n".join(["lw a0,0(a1);0x100"] + ["addi a2,a2,1"] * 20)
    lean = "lw a0,0(a1);0x100\nlw a2,0(a1);0x140"
    rows = rank_traces(_reports([("busy", busy), ("lean", lean)]), "Lambda")
    by_name = {r.name: r for r in rows}
    assert LOW_RATIO_WARNING in by_name["busy"].warnings
    assert by_name["lean"].warnings == ()


def test_rank_rejects_mixed_params():
    a = _reports([("a", "lw a0,0(a1);0x100")], issue_slots=2)
    b = _reports([("b", "lw a0,0(a1);0x100")], issue_slots=4)
    with pytest.raises(MixedParams):
        rank_traces(a + b, "lambda")
    with pytest.raises(ValueError):
        rank_traces(a, "lambda")         # fewer than two traces
    with pytest.raises(ValueError):
        rank_traces(a + b, "gamma")


@given(w=st.integers(0, 500), d=st.integers(0, 500), m=st.integers(1, 16))
def test_sensitivity_forms_agree_exactly(w, d, m):
    if d > w:
        w, d = d, w
    lam = latency_sensitivity(w, d, m)
    assert lam == Fraction(w, m) + (1 - Fraction(1, m)) * d
    assert latency_sensitivity(w, d, 1) == w


@given(w=st.integers(1, 300), d=st.integers(1, 300),
       m1=st.integers(1, 16), m2=st.integers(1, 16))
def test_sensitivity_monotone_in_slots(w, d, m1, m2):
    if d > w:
        w, d = d, w
    if m1 > m2:
        m1, m2 = m2, m1
    assert latency_sensitivity(w, d, m1) >= latency_sensitivity(w, d, m2)
    assert latency_sensitivity(w, d, m2) >= d


@st.composite
def _layered_counts(draw):
    depth = draw(st.integers(1, 12))
    counts = {i: draw(st.integers(1, 9)) for i in range(1, depth + 1)}
    return counts


@settings(max_examples=200)
@given(counts=_layered_counts(), m=st.integers(1, 16), alpha=st.integers(1, 400))
def test_bound_ordering_and_scaling(counts, m, alpha):
    w = sum(counts.values())
    d = max(counts)
    b = memory_cost_bounds(w, d, counts, m, alpha)
    assert b.lower <= b.layered_upper <= b.closed_upper
    doubled = memory_cost_bounds(w, d, counts, m, 2 * alpha)
    assert doubled.lower == 2 * b.lower
    assert doubled.closed_upper == 2 * b.closed_upper
    if m == 1:
        assert b.lower == b.layered_upper == b.closed_upper == w * alpha


@settings(max_examples=100)
@given(counts=_layered_counts(), m=st.integers(1, 8))
def test_full_layers_make_bounds_tight(counts, m):
    counts = {i: c * m for i, c in counts.items()}
    w = sum(counts.values())
    d = max(counts)
    b = memory_cost_bounds(w, d, counts, m, 7)
    # every layer an exact multiple of m: scheduling has no rounding slack
    assert b.lower == b.layered_upper == Fraction(w, m) * 7
