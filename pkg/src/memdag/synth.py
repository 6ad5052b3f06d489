"""Deterministic synthetic traces with known work and depth.

Five shapes cover the interesting corners of the work/depth space:

    chain      load-modify-store ping-pong on one address (W = 2n, D = 2n)
    fanout     n independent loads (W = n, D = 1)
    sum        reduction loop body, one load per element (W = n, D = 1)
    ptr-chase  each load's base register is the prior load's value (W = n, D = n)
    random-dag seeded random dependence structure with the exact edge list
               reported alongside, for oracle cross-checks

Ground truths hold for a build with the cache disabled; the same (pattern,
n, seed, base_addr, stride) always yields byte-identical text.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .errors import InvalidSpec

PATTERNS = ("chain", "fanout", "sum", "ptr-chase", "random-dag")

_POOL_REGS = ("a0 a1 a2 a3 a4 a5 a6 a7 "
              "s2 s3 s4 s5 s6 s7 s8 s9 s10 s11 t0 t1").split()
_LIVE_WIDTH = 10


@dataclass(frozen=True, slots=True)
class SynthSpec:
    pattern: str
    n: int
    seed: int = 0
    base_addr: int = 0x10000000
    stride: int = 64

    def __post_init__(self):
        if self.pattern not in PATTERNS:
            raise InvalidSpec(f"unknown pattern {self.pattern!r}; "
                              f"choose one of {', '.join(PATTERNS)}")
        if self.n < 1:
            raise InvalidSpec(f"n must be >= 1, got {self.n}")
        if self.stride < 1:
            raise InvalidSpec(f"stride must be >= 1, got {self.stride}")
        if self.base_addr < 0 or self.base_addr + self.n * self.stride >= 2**64:
            raise InvalidSpec("address range leaves the 64-bit space")


@dataclass(frozen=True, slots=True)
class SynthTruth:
    """What a cache-disabled build of the generated trace must report."""

    work: int
    depth: int
    layer_counts: dict[int, int]
    edges: tuple[tuple[int, int], ...] | None = None


def _chain(spec: SynthSpec) -> list[str]:
    a = spec.base_addr
    lines = [f"li a0,{a}"]
    for _ in range(spec.n):
        lines.append(f"lw a1,0(a0);0x{a:x}")
        lines.append("addiw a1,a1,1")
        lines.append(f"sw a1,0(a0);0x{a:x}")
    return lines


def _fanout(spec: SynthSpec) -> list[str]:
    lines = []
    for i in range(spec.n):
        addr = spec.base_addr + i * spec.stride
        lines.append(f"li a5,{addr}")
        lines.append(f"ld a4,0(a5);0x{addr:x}")
    return lines


def _sum(spec: SynthSpec) -> list[str]:
    lines = ["add a3,a0,a1", "mv a0,zero"]
    for i in range(spec.n):
        addr = spec.base_addr + i * spec.stride
        lines.append(f"lw a4,0(a5);0x{addr:x}")
        lines.append(f"addi a5,a5,{spec.stride}")
        lines.append("addw a0,a0,a4")
        lines.append("bne a3,a5,-6")
    return lines


def _ptr_chase(spec: SynthSpec) -> list[str]:
    lines = [f"li a0,{spec.base_addr}"]
    for i in range(spec.n):
        addr = spec.base_addr + i * spec.stride
        lines.append(f"ld a0,0(a0);0x{addr:x}")
    return lines


def _random_dag(spec: SynthSpec) -> tuple[list[str], SynthTruth]:
    rng = random.Random(spec.seed)
    free = deque(_POOL_REGS)
    live: list[tuple[str, int, int]] = []   # (reg, writer vertex, mem layer)
    lines: list[str] = []
    edges: list[tuple[int, int]] = []
    layer_counts: dict[int, int] = {}
    next_addr = spec.base_addr
    stride = max(spec.stride, 8)

    def alloc() -> str:
        if free:
            return free.popleft()
        reg, _, _ = live.pop(0)
        return reg

    for _ in range(spec.n):
        roll = rng.random()
        if not live or roll < 0.2:
            mode = "root"
        elif len(live) >= 2 and roll < 0.5:
            mode = "join"
        else:
            mode = "follow"

        if mode == "root":
            base = alloc()
            lines.append(f"li {base},{next_addr}")
            base_vid = len(lines) - 1
            ml = 0
            temp = base
        elif mode == "join":
            (xr, xv, xm), (yr, yv, ym) = rng.sample(live, 2)
            temp = alloc()
            lines.append(f"add {temp},{xr},{yr}")
            base_vid = len(lines) - 1
            edges.append((xv, base_vid))
            edges.append((yv, base_vid))
            ml = max(xm, ym)
        else:
            xr, xv, xm = live[rng.randrange(len(live))]
            temp = None
            base_vid = xv
            base = xr
            ml = xm

        dest = alloc()
        addr = next_addr
        next_addr += stride
        src = temp if temp is not None else base
        lines.append(f"ld {dest},0({src});0x{addr:x}")
        ld_vid = len(lines) - 1
        edges.append((base_vid, ld_vid))
        if temp is not None:
            free.append(temp)
        layer = ml + 1
        layer_counts[layer] = layer_counts.get(layer, 0) + 1
        live.append((dest, ld_vid, layer))
        if len(live) > _LIVE_WIDTH:
            reg, _, _ = live.pop(0)
            free.append(reg)

    truth = SynthTruth(
        work=spec.n,
        depth=max(layer_counts),
        layer_counts=layer_counts,
        edges=tuple(edges),
    )
    return lines, truth


def generate(spec: SynthSpec) -> str:
    """Trace text for the spec, newline-terminated."""
    if spec.pattern == "random-dag":
        lines, _ = _random_dag(spec)
    else:
        lines = {
            "chain": _chain,
            "fanout": _fanout,
            "sum": _sum,
            "ptr-chase": _ptr_chase,
        }[spec.pattern](spec)
    return "\n".join(lines) + "\n"


def ground_truth(spec: SynthSpec) -> SynthTruth:
    """Expected (W, D, layer counts[, edges]) for a cache-disabled build."""
    n = spec.n
    if spec.pattern == "chain":
        return SynthTruth(2 * n, 2 * n, {i: 1 for i in range(1, 2 * n + 1)})
    if spec.pattern == "fanout":
        return SynthTruth(n, 1, {1: n})
    if spec.pattern == "sum":
        return SynthTruth(n, 1, {1: n})
    if spec.pattern == "ptr-chase":
        return SynthTruth(n, n, {i: 1 for i in range(1, n + 1)})
    _, truth = _random_dag(spec)
    return truth
