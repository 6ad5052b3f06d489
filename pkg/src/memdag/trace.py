"""Trace line grammar and the streaming reader.

A trace is plain text, one executed instruction per line, optionally followed
by the data address the instruction touched:

    line    := insn [';' '0x' HEX]
    insn    := MNEMONIC [operand (',' operand)*]
    operand := REG | INT | INT '(' REG ')'

Whitespace around tokens is ignored, blank lines are skipped, and files whose
name ends in ``.gz`` are decompressed transparently.  Reading is streaming:
memory use is constant per line no matter how long the trace is.
"""

from __future__ import annotations

import gzip
import re
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from .errors import MalformedLine
from .registers import canonical_register

_U64_MAX = 2**64 - 1
_I64_MIN = -(2**63)
_I64_MAX = 2**63 - 1

# INT '(' REG ')' with the INT optional: atomics are commonly printed with a
# bare "(rs1)" address operand, which reads as displacement 0.
_MNEMONIC_RE = re.compile(r"[a-z][a-z0-9.]*$")
_MEMREF_RE = re.compile(
    r"^(-?(?:0x[0-9a-fA-F]+|[0-9]+))?\s*\(\s*([A-Za-z][A-Za-z0-9]*)\s*\)$"
)

REG = "reg"
IMM = "imm"
MEM = "mem"


@dataclass(frozen=True, slots=True)
class Operand:
    """One operand: a register, an immediate, or a displacement(base) pair.

    kind == 'reg':  reg holds the canonical register name
    kind == 'imm':  value holds a signed 64-bit integer
    kind == 'mem':  reg holds the base register, value the displacement
    """

    kind: str
    reg: str | None = None
    value: int | None = None

    def render(self) -> str:
        if self.kind == REG:
            return self.reg
        if self.kind == IMM:
            return str(self.value)
        return f"{self.value}({self.reg})"


@dataclass(slots=True)
class TraceRecord:
    """One executed instruction; ``text`` is the canonical instruction column."""

    line_no: int
    mnemonic: str
    operands: tuple[Operand, ...]
    data_addr: int | None
    text: str


def _parse_int(tok: str) -> int | None:
    body = tok[1:] if tok.startswith("-") else tok
    if not body:
        return None
    try:
        if body[:2].lower() == "0x":
            return int(tok, 16)
        return int(tok, 10)
    except ValueError:
        return None


def _parse_operand(tok: str, line_no: int) -> Operand:
    reg = canonical_register(tok)
    if reg is not None:
        return Operand(REG, reg=reg)
    m = _MEMREF_RE.match(tok)
    if m is not None:
        disp_text, base_text = m.groups()
        base = canonical_register(base_text)
        if base is None:
            raise MalformedLine(line_no, f"unknown base register in {tok!r}")
        disp = _parse_int(disp_text) if disp_text else 0
        if disp is None or not _I64_MIN <= disp <= _I64_MAX:
            raise MalformedLine(line_no, f"bad displacement in {tok!r}")
        return Operand(MEM, reg=base, value=disp)
    value = _parse_int(tok)
    if value is not None:
        if not _I64_MIN <= value <= _I64_MAX:
            raise MalformedLine(line_no, f"immediate out of range: {tok!r}")
        return Operand(IMM, value=value)
    raise MalformedLine(line_no, f"unparseable operand {tok!r}")


# Distinct instruction texts are bounded by the static code footprint, so a
# memo pays off on loopy traces.  The cap guards pathological inputs.
_INSN_CACHE: dict[str, tuple[str, tuple[Operand, ...], str]] = {}
_INSN_CACHE_MAX = 1 << 20


def _parse_insn(insn: str, line_no: int) -> tuple[str, tuple[Operand, ...], str]:
    cached = _INSN_CACHE.get(insn)
    if cached is not None:
        return cached
    head = insn.split(None, 1)
    if not head:
        raise MalformedLine(line_no, "empty instruction")
    mnemonic = head[0].lower()
    if not _MNEMONIC_RE.match(mnemonic):
        raise MalformedLine(line_no, f"bad mnemonic {head[0]!r}")
    operands: tuple[Operand, ...] = ()
    if len(head) > 1:
        toks = [t.strip() for t in head[1].split(",")]
        if any(not t for t in toks):
            raise MalformedLine(line_no, "empty operand")
        operands = tuple(_parse_operand(t, line_no) for t in toks)
    if operands:
        text = mnemonic + " " + ",".join(op.render() for op in operands)
    else:
        text = mnemonic
    if len(_INSN_CACHE) >= _INSN_CACHE_MAX:
        _INSN_CACHE.clear()
    _INSN_CACHE[insn] = (mnemonic, operands, text)
    return mnemonic, operands, text


def parse_trace_line(line: str, line_no: int) -> TraceRecord:
    """Parse one non-blank trace line.  Raises MalformedLine on any violation."""
    parts = line.split(";")
    if len(parts) > 2:
        raise MalformedLine(line_no, "more than one address field")
    insn = parts[0].strip()
    if not insn:
        raise MalformedLine(line_no, "empty instruction")
    data_addr = None
    if len(parts) == 2:
        addr_text = parts[1].strip()
        if addr_text[:2].lower() != "0x":
            raise MalformedLine(line_no, f"address must be 0x-hex, got {addr_text!r}")
        try:
            data_addr = int(addr_text, 16)
        except ValueError:
            raise MalformedLine(line_no, f"non-hex address {addr_text!r}") from None
        if data_addr > _U64_MAX:
            raise MalformedLine(line_no, f"address above 64 bits: {addr_text}")
    mnemonic, operands, text = _parse_insn(insn, line_no)
    return TraceRecord(line_no, mnemonic, operands, data_addr, text)


def render_record(record: TraceRecord) -> str:
    """Canonical text form; parsing it back yields an equal record."""
    if record.data_addr is None:
        return record.text
    return f"{record.text};0x{record.data_addr:x}"


def read_trace(source: Iterable[str]) -> Iterator[TraceRecord]:
    """Yield records from an iterable of text lines, in order.

    Blank lines are skipped but still advance the line counter, so reported
    line numbers always match the input file.  Parse problems raise
    MalformedLine; I/O problems surface as the reader's own OSError.
    """
    for line_no, raw in enumerate(source, 1):
        stripped = raw.strip()
        if not stripped:
            continue
        yield parse_trace_line(stripped, line_no)


def open_trace(path: str) -> IO[str]:
    """Open a trace file for text reading, decompressing ``.gz`` transparently."""
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def read_trace_file(path: str) -> Iterator[TraceRecord]:
    with open_trace(path) as stream:
        yield from read_trace(stream)
