"""Dependence-graph analysis of sequential RISC-V memory traces.

The package turns an instruction trace into the DAG of its true (read after
write) dependences, counts the cache misses that survive a configurable
cache model, and reports work/depth style cost bounds plus a latency
sensitivity score for the memory portion of the execution.
"""

from .builder import (
    BuildResult,
    CostModel,
    DEFAULT_VERTEX_CAP,
    Edge,
    EdagSummary,
    MaterializedEdag,
    Vertex,
    build,
    export_dot,
)
from .cache import CacheConfig, CacheState, PassthroughCache, make_cache
from .errors import (
    AnalysisError,
    CapExceeded,
    DepthExceedsWork,
    InconsistentSummary,
    InvalidSpec,
    MalformedLine,
    MixedParams,
    NotAMemoryOp,
    TauMismatch,
    UnknownMnemonic,
    ZeroBaselineCost,
    ZeroSpan,
)
from .isa import InstructionEffect, MemAccess, decode_effect, supported_mnemonics
from .metrics import (
    CostBounds,
    MetricsReport,
    ModelParams,
    RankedTrace,
    bandwidth_gbs,
    compute_report,
    latency_sensitivity,
    memory_cost_bounds,
    movement_series,
    rank_traces,
    relative_sensitivity,
    total_cost_bounds,
)
from .oracle import ScheduleResult, brute_force_memory_depth, simulate_greedy_memory
from .synth import SynthSpec, SynthTruth, generate, ground_truth
from .trace import Operand, TraceRecord, parse_trace_line, read_trace, read_trace_file

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "BuildResult",
    "CacheConfig",
    "CacheState",
    "CapExceeded",
    "CostBounds",
    "CostModel",
    "DEFAULT_VERTEX_CAP",
    "DepthExceedsWork",
    "Edge",
    "EdagSummary",
    "InconsistentSummary",
    "InstructionEffect",
    "InvalidSpec",
    "MalformedLine",
    "MaterializedEdag",
    "MemAccess",
    "MetricsReport",
    "MixedParams",
    "ModelParams",
    "NotAMemoryOp",
    "Operand",
    "PassthroughCache",
    "RankedTrace",
    "ScheduleResult",
    "SynthSpec",
    "SynthTruth",
    "TauMismatch",
    "TraceRecord",
    "UnknownMnemonic",
    "Vertex",
    "ZeroBaselineCost",
    "ZeroSpan",
    "bandwidth_gbs",
    "brute_force_memory_depth",
    "build",
    "compute_report",
    "decode_effect",
    "export_dot",
    "generate",
    "ground_truth",
    "latency_sensitivity",
    "make_cache",
    "memory_cost_bounds",
    "movement_series",
    "parse_trace_line",
    "rank_traces",
    "read_trace",
    "read_trace_file",
    "relative_sensitivity",
    "simulate_greedy_memory",
    "supported_mnemonics",
    "total_cost_bounds",
    "__version__",
]
