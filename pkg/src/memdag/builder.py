"""Streams trace records into dependency-graph accumulators.

One pass in trace order is enough for every summary quantity because trace
order is a topological order of the dependence DAG: a last-writer table keyed
by register name and byte address resolves each read to the vertex that
produced the value, and per-vertex start/finish times and memory layers fall
out of the same lookups.  Only true (read-after-write) dependencies shape the
graph; anti and output dependencies are artifacts of register reuse and are
dropped unless a caller explicitly keeps them for visualization.

Vertex timing: a cache miss costs ``miss_cost`` cycles and moves data; every
other vertex (cache hits included) costs ``unit_cost`` and moves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable

from .cache import CacheConfig, make_cache
from .errors import CapExceeded
from .isa import effect_template
from .trace import TraceRecord

DEFAULT_VERTEX_CAP = 200_000

RAW = "raw"
WAR = "war"
WAW = "waw"


@dataclass(frozen=True, slots=True)
class CostModel:
    """Per-vertex cycle costs; integers keep every derived time exact."""

    miss_cost: int = 200
    unit_cost: int = 1

    def __post_init__(self):
        if not isinstance(self.miss_cost, int) or self.miss_cost < 1:
            raise ValueError(f"miss_cost must be a positive integer, got {self.miss_cost}")
        if not isinstance(self.unit_cost, int) or self.unit_cost < 0:
            raise ValueError(f"unit_cost must be a non-negative integer, got {self.unit_cost}")


@dataclass(slots=True)
class EdagSummary:
    """Streaming accumulators for one trace under one configuration."""

    t1: int = 0                 # serial cost: sum of every vertex cost
    tinf: int = 0               # critical path finish time
    vertex_count: int = 0
    compute_cost: int = 0       # C: cost sum over non-memory-access vertices
    memory_work: int = 0        # W: number of memory-access (miss) vertices
    layer_counts: dict[int, int] = field(default_factory=dict)
    bytes_total: int = 0
    tau: int | None = None
    movement_bins: list[int] | None = None
    cache_hits_load: int = 0
    cache_hits_store: int = 0
    cache_misses_load: int = 0
    cache_misses_store: int = 0
    unknown_records: int = 0
    atomic_records: int = 0

    @property
    def memory_depth(self) -> int:
        return max(self.layer_counts) if self.layer_counts else 0

    @property
    def cache_hits(self) -> int:
        return self.cache_hits_load + self.cache_hits_store

    @property
    def cache_misses(self) -> int:
        return self.cache_misses_load + self.cache_misses_store


@dataclass(slots=True)
class Vertex:
    id: int
    text: str
    kind: str
    is_mem: bool
    cost: int
    moved_bytes: int
    start: int
    finish: int
    layer: int                  # memory layer; 0 for non-memory vertices


@dataclass(frozen=True, slots=True)
class Edge:
    src: int
    dst: int
    dep: str                    # 'raw', 'war', or 'waw'


class MaterializedEdag:
    """Explicit vertex and edge lists for graphs small enough to hold."""

    def __init__(self, vertices: list[Vertex], edges: list[Edge]):
        self.vertices = vertices
        self.edges = edges

    def predecessor_lists(self) -> list[list[int]]:
        preds: list[list[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            preds[e.dst].append(e.src)
        return preds

    def recompute_summary(self, tau: int | None = None,
                          update_vertices: bool = False) -> EdagSummary:
        """Re-derive the summary by longest-path DP over the stored edges.

        This is a second, independent route to the same numbers the
        streaming pass produced; cache and decode counters are not
        reconstructible from the graph and stay zero.
        """
        return _summarize_graph(self.vertices, self.predecessor_lists(),
                                tau, update_vertices)


@dataclass(slots=True)
class BuildResult:
    summary: EdagSummary
    graph: MaterializedEdag | None = None


def _movement_rows(tinf: int, tau: int) -> int:
    # One row per sample point tau*i inside [0, tinf), plus the boundary
    # sample when the span ends exactly on a multiple of tau.
    rows = -(-tinf // tau)
    if tinf % tau == 0:
        rows += 1
    return rows


def _finalize_movement(diff: dict[int, int], tinf: int, tau: int) -> list[int]:
    rows = _movement_rows(tinf, tau)
    bins = [0] * rows
    running = 0
    get = diff.get
    for i in range(rows):
        d = get(i)
        if d:
            running += d
        bins[i] = running
    return bins


def _summarize_graph(vertices: list[Vertex], preds: list[list[int]],
                     tau: int | None, update_vertices: bool) -> EdagSummary:
    n = len(vertices)
    finish = [0] * n
    mlayer = [0] * n
    layer_counts: dict[int, int] = {}
    diff: dict[int, int] = {}
    t1 = tinf = c = w = moved_total = 0
    for v in vertices:
        start = 0
        ml_in = 0
        for u in preds[v.id]:
            if finish[u] > start:
                start = finish[u]
            if mlayer[u] > ml_in:
                ml_in = mlayer[u]
        fin = start + v.cost
        finish[v.id] = fin
        t1 += v.cost
        if fin > tinf:
            tinf = fin
        if v.is_mem:
            layer = ml_in + 1
            mlayer[v.id] = layer
            layer_counts[layer] = layer_counts.get(layer, 0) + 1
            w += 1
            moved_total += v.moved_bytes
            if tau is not None and v.moved_bytes:
                i0 = -(-start // tau)
                i1 = fin // tau
                if i0 <= i1:
                    diff[i0] = diff.get(i0, 0) + v.moved_bytes
                    diff[i1 + 1] = diff.get(i1 + 1, 0) - v.moved_bytes
        else:
            layer = 0
            mlayer[v.id] = ml_in
            c += v.cost
        if update_vertices:
            v.start = start
            v.finish = fin
            v.layer = layer
    summary = EdagSummary(
        t1=t1, tinf=tinf, vertex_count=n, compute_cost=c, memory_work=w,
        layer_counts=layer_counts, bytes_total=moved_total, tau=tau,
    )
    if tau is not None:
        summary.movement_bins = _finalize_movement(diff, tinf, tau)
    return summary


def build(records: Iterable[TraceRecord],
          cache_config: CacheConfig | None = None,
          cost: CostModel | None = None,
          *,
          materialize: bool = False,
          keep_false_deps: bool = False,
          keep_waw: bool | None = None,
          keep_war: bool | None = None,
          tau: int | None = None,
          vertex_cap: int = DEFAULT_VERTEX_CAP,
          strict: bool = False) -> BuildResult:
    """Consume a record stream and return its summary (plus graph if asked).

    ``keep_false_deps`` turns on both anti (war) and output (waw) edges;
    the individual flags override it.  Keeping false dependencies requires
    ``materialize`` because start/finish times and layers are then
    recomputed over the enlarged edge set.
    """
    if keep_waw is None:
        keep_waw = keep_false_deps
    if keep_war is None:
        keep_war = keep_false_deps
    keep_false = keep_waw or keep_war
    if keep_false and not materialize:
        raise ValueError("keeping false dependencies requires materialize=True")
    if tau is not None and tau < 1:
        raise ValueError(f"tau must be a positive cycle count, got {tau}")
    cost = cost or CostModel()

    cache = make_cache(cache_config)
    access = cache.access
    cache_enabled = cache_config is not None and cache_config.enabled
    line_size = cache_config.line_size if cache_enabled else 0
    alpha = cost.miss_cost
    unit = cost.unit_cost
    permissive = not strict

    regs: dict = {}             # register -> (finish, mlayer[, writer id])
    mem: dict = {}              # byte address -> same tuple shape
    rget = regs.get
    mget = mem.get
    templates: dict = {}
    tpl_get = templates.get
    layer_counts: dict[int, int] = {}
    diff: dict[int, int] = {}
    mat = materialize
    vertices: list[Vertex] = []
    edges: list[Edge] = []
    readers: dict = {}          # value key -> ids reading it since last write

    t1 = tinf = total_c = work = moved_total = 0
    unknown_count = atomic_count = 0
    vid = 0

    for rec in records:
        text = rec.text
        tpl = tpl_get(text)
        if tpl is None:
            tpl = effect_template(rec.mnemonic, rec.operands,
                                  permissive=permissive, line_no=rec.line_no)
            templates[text] = tpl
        if tpl.unknown:
            unknown_count += 1
        if tpl.atomic:
            atomic_count += 1

        addr = rec.data_addr
        msize = tpl.mem_size
        has_addr = bool(msize) and addr is not None
        mem_vertex = False
        t = unit
        moved = 0
        if has_addr:
            missed, missed_lines = access(addr, msize, tpl.mem_is_write)
            if missed:
                mem_vertex = True
                t = alpha
                moved = missed_lines * line_size if line_size else msize

        start = 0
        ml_in = 0
        if mat:
            preds: dict[int, str] = {}
            for r in tpl.read_regs:
                st = rget(r)
                if st is not None:
                    if st[0] > start:
                        start = st[0]
                    if st[1] > ml_in:
                        ml_in = st[1]
                    preds[st[2]] = RAW
            if has_addr and tpl.mem_reads and mem:
                for b in range(addr, addr + msize):
                    st = mget(b)
                    if st is not None:
                        if st[0] > start:
                            start = st[0]
                        if st[1] > ml_in:
                            ml_in = st[1]
                        preds[st[2]] = RAW
        else:
            for r in tpl.read_regs:
                st = rget(r)
                if st is not None:
                    if st[0] > start:
                        start = st[0]
                    if st[1] > ml_in:
                        ml_in = st[1]
            if has_addr and tpl.mem_reads and mem:
                for b in range(addr, addr + msize):
                    st = mget(b)
                    if st is not None:
                        if st[0] > start:
                            start = st[0]
                        if st[1] > ml_in:
                            ml_in = st[1]

        fin = start + t
        t1 += t
        if fin > tinf:
            tinf = fin
        if mem_vertex:
            layer = ml_in + 1
            ml_out = layer
            layer_counts[layer] = layer_counts.get(layer, 0) + 1
            work += 1
            moved_total += moved
            if tau is not None:
                i0 = -(-start // tau)
                i1 = fin // tau
                if i0 <= i1:
                    diff[i0] = diff.get(i0, 0) + moved
                    diff[i1 + 1] = diff.get(i1 + 1, 0) - moved
        else:
            layer = 0
            ml_out = ml_in
            total_c += t

        if mat:
            if vid >= vertex_cap:
                raise CapExceeded(
                    f"materialized graph exceeds the {vertex_cap}-vertex cap")
            if keep_war:
                for r in tpl.read_regs:
                    lst = readers.get(r)
                    if lst is None:
                        readers[r] = [vid]
                    elif lst[-1] != vid:
                        lst.append(vid)
                if has_addr and tpl.mem_reads:
                    for b in range(addr, addr + msize):
                        lst = readers.get(b)
                        if lst is None:
                            readers[b] = [vid]
                        elif lst[-1] != vid:
                            lst.append(vid)
            state = (fin, ml_out, vid)
            for table, keys in ((regs, tpl.write_regs),
                                (mem, range(addr, addr + msize)
                                 if has_addr and tpl.mem_writes else ())):
                for k in keys:
                    if keep_waw:
                        old = table.get(k)
                        if old is not None and old[2] != vid and old[2] not in preds:
                            preds[old[2]] = WAW
                    if keep_war:
                        lst = readers.pop(k, None)
                        if lst:
                            for u in lst:
                                if u != vid and u not in preds:
                                    preds[u] = WAR
                    table[k] = state
            vertices.append(Vertex(vid, text, tpl.kind, mem_vertex, t, moved,
                                   start, fin, layer))
            for u, dep in preds.items():
                edges.append(Edge(u, vid, dep))
        else:
            state = (fin, ml_out)
            for r in tpl.write_regs:
                regs[r] = state
            if has_addr and tpl.mem_writes:
                for b in range(addr, addr + msize):
                    mem[b] = state
        vid += 1

    summary = EdagSummary(
        t1=t1, tinf=tinf, vertex_count=vid, compute_cost=total_c,
        memory_work=work, layer_counts=layer_counts,
        bytes_total=moved_total, tau=tau,
        cache_hits_load=cache.hits_load, cache_hits_store=cache.hits_store,
        cache_misses_load=cache.misses_load, cache_misses_store=cache.misses_store,
        unknown_records=unknown_count, atomic_records=atomic_count,
    )
    if tau is not None:
        summary.movement_bins = _finalize_movement(diff, tinf, tau)

    graph = None
    if mat:
        graph = MaterializedEdag(vertices, edges)
        if keep_false:
            # Anti/output edges lengthen paths, so timing and layering are
            # only meaningful after a second pass over the full edge set.
            patched = graph.recompute_summary(tau, update_vertices=True)
            summary.tinf = patched.tinf
            summary.layer_counts = patched.layer_counts
            summary.movement_bins = patched.movement_bins
    return BuildResult(summary, graph)


def export_dot(graph: MaterializedEdag, sink: IO[str] | None = None,
               vertex_cap: int | None = DEFAULT_VERTEX_CAP) -> str:
    """Render the graph in DOT: misses red, everything else white, false
    dependencies dashed.  Refuses graphs past the vertex cap."""
    if vertex_cap is not None and len(graph.vertices) > vertex_cap:
        raise CapExceeded(
            f"{len(graph.vertices)} vertices exceed the DOT cap of {vertex_cap}")
    out = ["digraph edag {", "  rankdir=TB;",
           '  node [shape=box, style=filled, fontname="monospace"];']
    for v in graph.vertices:
        color = "red" if v.is_mem else "white"
        label = f"{v.id}: {v.text}".replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'  v{v.id} [label="{label}", fillcolor={color}];')
    for e in graph.edges:
        style = "" if e.dep == RAW else " [style=dashed]"
        out.append(f"  v{e.src} -> v{e.dst}{style};")
    out.append("}")
    text = "\n".join(out) + "\n"
    if sink is not None:
        sink.write(text)
    return text
