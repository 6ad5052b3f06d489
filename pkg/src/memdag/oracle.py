"""Executable cross-checks for the analytic bounds.

``simulate_greedy_memory`` runs an event-driven list schedule over a
materialized graph: non-memory vertices start the moment their predecessors
finish (unbounded width), memory vertices contend for a fixed number of
issue slots.  Among ready memory vertices the shallowest layer goes first,
trace order breaking ties.  Plain trace-order FIFO can waste slots on deep
vertices while a wide shallow layer waits, overshooting the per-layer upper
bound; layer-first priority provably stays within it, so the makespan must
land inside the lower/upper cost bounds.

``brute_force_memory_depth`` recomputes the layered depth by longest-path
DP over the explicit edge list, independent of the streaming layer logic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .builder import MaterializedEdag


@dataclass(frozen=True, slots=True)
class ScheduleResult:
    makespan: int
    start: tuple[int, ...]
    finish: tuple[int, ...]
    peak_memory_concurrency: int


def simulate_greedy_memory(graph: MaterializedEdag, issue_slots: int,
                           miss_cost: int, unit_cost: int = 0) -> ScheduleResult:
    """Greedy schedule makespan with m concurrent memory issue slots.

    Memory vertices cost ``miss_cost``, everything else ``unit_cost``
    (0 isolates the memory portion, making the result comparable to the
    memory cost bounds).  The scheduler is work-conserving: a slot never
    idles while some ready memory vertex is waiting.
    """
    if issue_slots < 1:
        raise ValueError(f"issue_slots must be >= 1, got {issue_slots}")
    if miss_cost < 1:
        raise ValueError(f"miss_cost must be >= 1, got {miss_cost}")
    vertices = graph.vertices
    n = len(vertices)
    if n == 0:
        return ScheduleResult(0, (), (), 0)

    preds_left = [0] * n
    succs: list[list[int]] = [[] for _ in range(n)]
    for e in graph.edges:
        preds_left[e.dst] += 1
        succs[e.src].append(e.dst)

    start = [0] * n
    finish = [0] * n
    events: list[tuple[int, int]] = []      # (completion time, vertex)
    mem_ready: list[tuple[int, int]] = []   # ready memory: (layer, id)
    free = issue_slots
    busy = 0
    peak = 0
    done = 0

    def release(vid: int, now: int) -> None:
        nonlocal done
        done += 1
        for s in succs[vid]:
            preds_left[s] -= 1
            if preds_left[s] == 0:
                admit(s, now)

    def admit(vid: int, now: int) -> None:
        if vertices[vid].is_mem:
            heapq.heappush(mem_ready, (vertices[vid].layer, vid))
        else:
            start[vid] = now
            finish[vid] = now + unit_cost
            heapq.heappush(events, (finish[vid], vid))

    for vid in range(n):
        if preds_left[vid] == 0:
            admit(vid, 0)

    now = 0
    while done < n:
        # Zero-cost vertices can cascade at the same timestamp; drain every
        # event at `now` before giving slots away so the ready set is full.
        if events and events[0][0] <= now:
            t, vid = heapq.heappop(events)
            now = t
            if vertices[vid].is_mem:
                free += 1
                busy -= 1
            release(vid, now)
            continue
        if free and mem_ready:
            _, vid = heapq.heappop(mem_ready)
            start[vid] = now
            finish[vid] = now + miss_cost
            heapq.heappush(events, (finish[vid], vid))
            free -= 1
            busy += 1
            if busy > peak:
                peak = busy
            continue
        if not events:
            break
        now = events[0][0]

    makespan = max(finish) if finish else 0
    return ScheduleResult(makespan, tuple(start), tuple(finish), peak)


def brute_force_memory_depth(graph: MaterializedEdag) -> int:
    """Longest path counted in memory-access vertices, straight off the edges."""
    n = len(graph.vertices)
    depth = [0] * n
    preds = graph.predecessor_lists()
    best = 0
    for v in graph.vertices:
        d = 0
        for u in preds[v.id]:
            if depth[u] > d:
                d = depth[u]
        if v.is_mem:
            d += 1
        depth[v.id] = d
        if d > best:
            best = d
    return best
